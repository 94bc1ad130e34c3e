//! Optimal gradient vector field construction by expansion frames.
//!
//! The 2-flow is a breadth-first traversal of the semigraph: starting
//! from a coboundary triangle (paired with one of its boundary edges) or,
//! on a closed component, from an arbitrary triangle left critical, every
//! other triangle is matched with the edge it was first reached through.
//! The edges never matched form the expansion frame, a connected graph
//! spanning every vertex. The frame is then cut into ears and a 1-flow is
//! routed along each ear, leaving one critical vertex per component and
//! one critical edge per independent cycle of the frame.

use std::collections::VecDeque;

use crate::complex::{CellId, MeshError, OrientedComplex2};
use crate::dgvf::{FieldError, MorseMatching};

/// Instrumentation for the near-linearity checks: every face/coface
/// inspection counts as one Hasse-edge visit.
#[derive(Clone, Copy, Default, Debug)]
pub struct FrameCounters {
    pub hasse_visits: u64,
    pub pairs: u64,
}

/// One elementary expansion, reported through the trace hook.
#[derive(Clone, Copy, Debug)]
pub struct ExpansionEvent {
    pub lower: CellId,
    pub upper: CellId,
    pub frame_vertices: usize,
    pub frame_edges: usize,
}

/// The residual 1-complex of a 2-flow: live vertices and edges.
#[derive(Clone, Debug)]
pub struct ExpansionFrame {
    vertex_in: Vec<bool>,
    edge_in: Vec<bool>,
    vertex_count: usize,
    edge_count: usize,
}

impl ExpansionFrame {
    pub fn empty(vertices: usize, edges: usize) -> ExpansionFrame {
        ExpansionFrame {
            vertex_in: vec![false; vertices],
            edge_in: vec![false; edges],
            vertex_count: 0,
            edge_count: 0,
        }
    }

    /// The frame a finished 2-flow leaves behind: every vertex plus every
    /// edge not matched with a triangle.
    pub fn residual(c: &OrientedComplex2, m: &MorseMatching) -> ExpansionFrame {
        let mut f = ExpansionFrame::empty(c.vertex_count(), c.edge_count());
        for v in 0..c.vertex_count() {
            f.add_vertex(v);
        }
        for e in 0..c.edge_count() {
            let id = c.edge_id(e);
            let matched_up = matches!(m.pair_of(id), Some(up) if c.dim(up) == 2);
            if !matched_up {
                f.add_edge(e);
            }
        }
        f
    }

    pub fn add_vertex(&mut self, v: usize) {
        if !self.vertex_in[v] {
            self.vertex_in[v] = true;
            self.vertex_count += 1;
        }
    }

    pub fn add_edge(&mut self, e: usize) {
        if !self.edge_in[e] {
            self.edge_in[e] = true;
            self.edge_count += 1;
        }
    }

    pub fn remove_edge(&mut self, e: usize) {
        if self.edge_in[e] {
            self.edge_in[e] = false;
            self.edge_count -= 1;
        }
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertex_in[v]
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edge_in[e]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn live_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.edge_in
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(e, _)| e)
    }

    /// Number of live edges incident on `v`.
    pub fn degree(&self, c: &OrientedComplex2, v: usize) -> usize {
        c.vertex_edge_list(v)
            .iter()
            .filter(|&&e| self.edge_in[e])
            .count()
    }

    /// Edges with a degree-1 endpoint: the 1-dimensional coboundary faces
    /// of the frame.
    pub fn coboundary_edges(&self, c: &OrientedComplex2) -> Vec<usize> {
        self.live_edges()
            .filter(|&e| {
                let [a, b] = c.edge_vertices(e);
                self.degree(c, a) == 1 || self.degree(c, b) == 1
            })
            .collect()
    }

    /// True when all live vertices are connected through live edges.
    pub fn is_connected(&self, c: &OrientedComplex2) -> bool {
        let Some(start) = self.vertex_in.iter().position(|&b| b) else {
            return true;
        };
        let mut seen = vec![false; self.vertex_in.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &e in c.vertex_edge_list(v) {
                if !self.edge_in[e] {
                    continue;
                }
                let [a, b] = c.edge_vertices(e);
                let w = if a == v { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.vertex_count
    }
}

/// All d-cells of the complex possessing at least one boundary face, in
/// id order.
pub fn find_cobdry(c: &OrientedComplex2, d: usize) -> Vec<CellId> {
    match d {
        2 => (0..c.triangle_count())
            .filter(|&t| {
                c.triangle_edges(t)
                    .iter()
                    .any(|&e| c.edge_triangles(e).len() == 1)
            })
            .map(|t| c.triangle_id(t))
            .collect(),
        1 => (0..c.edge_count())
            .filter(|&e| {
                c.edge_vertices(e)
                    .iter()
                    .any(|&v| c.vertex_edge_list(v).len() == 1)
            })
            .map(|e| c.edge_id(e))
            .collect(),
        _ => Vec::new(),
    }
}

/// Mutable state threaded through a flow run.
pub struct FlowState<'a> {
    complex: &'a OrientedComplex2,
    pub matching: MorseMatching,
    pub frame: ExpansionFrame,
    queue: VecDeque<CellId>,
    pub counters: FrameCounters,
    pub last_matched_edge: Option<usize>,
    trace: Option<&'a mut dyn FnMut(&ExpansionEvent)>,
}

impl<'a> FlowState<'a> {
    pub fn new(c: &'a OrientedComplex2) -> FlowState<'a> {
        FlowState {
            complex: c,
            matching: MorseMatching::for_complex(c),
            frame: ExpansionFrame::empty(c.vertex_count(), c.edge_count()),
            queue: VecDeque::new(),
            counters: FrameCounters::default(),
            last_matched_edge: None,
            trace: None,
        }
    }

    pub fn with_trace(
        c: &'a OrientedComplex2,
        trace: &'a mut dyn FnMut(&ExpansionEvent),
    ) -> FlowState<'a> {
        let mut s = FlowState::new(c);
        s.trace = Some(trace);
        s
    }

    /// Adds the gradient pair `<theta, tau>` unless `tau` or `theta` is
    /// already matched. On success `tau` is enqueued and, for a 2-cell,
    /// the frame expands across `theta`.
    pub fn add_pair_to_field(&mut self, tau: Option<CellId>, theta: CellId) -> bool {
        let Some(tau) = tau else { return false };
        if self.matching.is_matched(tau) || self.matching.is_matched(theta) {
            return false;
        }
        debug_assert!(self.complex.faces(tau).iter().any(|&(f, _)| f == theta));
        self.matching.add_pair(theta, tau);
        self.queue.push_back(tau);
        self.counters.pairs += 1;
        if self.complex.dim(tau) == 2 {
            let t = self.complex.local_index(tau);
            let theta_edge = self.complex.local_index(theta);
            self.frame.remove_edge(theta_edge);
            for &e in &self.complex.triangle_edges(t) {
                if e != theta_edge {
                    self.frame.add_edge(e);
                }
            }
            for &v in &self.complex.triangle_vertices(t) {
                self.frame.add_vertex(v);
            }
            self.last_matched_edge = Some(theta_edge);
        }
        if let Some(trace) = self.trace.as_deref_mut() {
            trace(&ExpansionEvent {
                lower: theta,
                upper: tau,
                frame_vertices: self.frame.vertex_count(),
                frame_edges: self.frame.edge_count(),
            });
        }
        true
    }

    /// Starts a flow at `cell` without pairing it (the critical start of a
    /// closed component or cut ear).
    fn start_critical(&mut self, cell: CellId) {
        if self.complex.dim(cell) == 2 {
            let t = self.complex.local_index(cell);
            for &e in &self.complex.triangle_edges(t) {
                self.frame.add_edge(e);
            }
            for &v in &self.complex.triangle_vertices(t) {
                self.frame.add_vertex(v);
            }
        }
        self.queue.push_back(cell);
    }

    /// Scans the faces of `cell`, pairing each with its unmatched coface
    /// on the other side, restricted to `live` cells when given.
    fn scan_faces(&mut self, cell: CellId, live_edges: Option<&[bool]>) {
        let rev = self.matching.rev_pair_of(cell);
        let mut faces: Vec<CellId> = self
            .complex
            .faces(cell)
            .into_iter()
            .map(|(f, _)| f)
            .filter(|&f| Some(f) != rev)
            .collect();
        faces.sort_unstable();
        for theta in faces {
            self.counters.hasse_visits += 1;
            let candidate = self
                .complex
                .cofaces(theta)
                .into_iter()
                .filter(|&mu| mu != cell)
                .filter(|&mu| match live_edges {
                    Some(set) => self.complex.dim(mu) == 1 && set[self.complex.local_index(mu)],
                    None => true,
                })
                .find(|&mu| !self.matching.is_matched(mu));
            self.counters.hasse_visits += 1;
            self.add_pair_to_field(candidate, theta);
        }
    }
}

/// One breadth-first flow pass at level `d` over the `live` d-cells.
///
/// `cobdry` lists the coboundary faces among them. Each pass starts from
/// the coboundary queue when possible (pairing the start with one of its
/// boundary faces) and otherwise from the lowest-id unmatched live cell,
/// which stays critical. The outer loop keeps restarting until every live
/// cell is matched or was a critical start, so disjoint semigraph
/// components are all drained.
pub fn frame_flow(
    state: &mut FlowState,
    live: &[CellId],
    cobdry: &[CellId],
    live_edges: Option<&[bool]>,
    boundary_vertex: Option<&[bool]>,
) {
    let c = state.complex;
    let mut bq: VecDeque<CellId> = cobdry.iter().copied().collect();
    let mut next_live = 0usize;
    let mut started: Vec<bool> = vec![false; live.len()];
    let live_pos: std::collections::HashMap<CellId, usize> =
        live.iter().enumerate().map(|(i, &id)| (id, i)).collect();

    loop {
        // Pick the next start cell.
        let mut start = None;
        while let Some(t) = bq.pop_front() {
            state.counters.hasse_visits += 1;
            if !state.matching.is_matched(t) && !started[live_pos[&t]] {
                start = Some((t, true));
                break;
            }
        }
        if start.is_none() {
            while next_live < live.len() {
                let t = live[next_live];
                next_live += 1;
                state.counters.hasse_visits += 1;
                if !state.matching.is_matched(t) && !started[live_pos[&t]] {
                    start = Some((t, false));
                    break;
                }
            }
        }
        let Some((start_cell, from_bdry)) = start else {
            return;
        };
        started[live_pos[&start_cell]] = true;

        if from_bdry {
            // Pair the start with its lowest-id boundary face.
            let mut bfaces: Vec<CellId> = c
                .faces(start_cell)
                .into_iter()
                .map(|(f, _)| f)
                .filter(|&f| match c.dim(start_cell) {
                    2 => c.edge_triangles(c.local_index(f)).len() == 1,
                    _ => boundary_vertex.is_some_and(|bv| bv[f.0]),
                })
                .collect();
            bfaces.sort_unstable();
            match bfaces.first() {
                Some(&upsilon) => {
                    state.add_pair_to_field(Some(start_cell), upsilon);
                }
                None => state.start_critical(start_cell),
            }
        } else {
            state.start_critical(start_cell);
        }
        while let Some(cell) = state.queue.pop_front() {
            state.scan_faces(cell, live_edges);
        }
    }
}

/// One ear of an ear decomposition: a simple path or cycle of frame
/// edges. Every ear after the first starts on a vertex of an earlier ear.
#[derive(Clone, Debug)]
pub struct Ear {
    /// Complex edge indices in walk order.
    pub edges: Vec<usize>,
    pub start_vertex: usize,
    pub end_vertex: usize,
    pub closed: bool,
    /// Whether each endpoint already belonged to an earlier ear. A free
    /// (unanchored) endpoint is where the ear's 1-flow starts.
    pub start_anchored: bool,
    pub end_anchored: bool,
}

/// Ordered ears partitioning a frame's edges.
#[derive(Clone, Debug)]
pub struct EarDecomposition {
    pub ears: Vec<Ear>,
}

/// Decomposes an explicit graph (given as `edges` with endpoints in
/// `edge_ends`) into ears anchored at `anchor`. Greedy walks extend
/// through unassigned edges, refuse to re-enter their own interior, and
/// stop on vertices already assigned to earlier ears.
pub fn ear_decompose_graph(
    vertex_bound: usize,
    edge_ends: &[[usize; 2]],
    anchor: usize,
) -> Result<EarDecomposition, FieldError> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_bound];
    for (i, &[a, b]) in edge_ends.iter().enumerate() {
        adj[a].push((i, b));
        adj[b].push((i, a));
    }
    let mut assigned_edge = vec![false; edge_ends.len()];
    let mut assigned_vertex = vec![false; vertex_bound];
    let mut ears: Vec<Ear> = Vec::new();

    // Returns (edges, end vertex, closed, end stopped on an assigned vertex).
    let walk = |start: usize,
                assigned_edge: &mut Vec<bool>,
                assigned_vertex: &[bool],
                visited: &mut Vec<bool>|
     -> (Vec<usize>, usize, bool, bool) {
        let mut cur = start;
        let mut path = Vec::new();
        visited[start] = true;
        loop {
            let step = adj[cur]
                .iter()
                .find(|&&(e, w)| !assigned_edge[e] && !(visited[w] && w != start));
            let Some(&(e, w)) = step else {
                return (path, cur, false, false);
            };
            assigned_edge[e] = true;
            path.push(e);
            if w == start {
                return (path, w, true, false);
            }
            if assigned_vertex[w] {
                return (path, w, false, true);
            }
            visited[w] = true;
            cur = w;
        }
    };

    // First ear: walk both directions out of the anchor. If the second
    // walk closes a cycle back through the anchor, the two walks are kept
    // as separate ears (a single combined ear would not be a 1-manifold).
    let mark = |edges: &[usize], assigned_vertex: &mut Vec<bool>| {
        for &e in edges {
            assigned_vertex[edge_ends[e][0]] = true;
            assigned_vertex[edge_ends[e][1]] = true;
        }
    };
    let mut visited = vec![false; vertex_bound];
    let (forward, fwd_end, fwd_closed, _) =
        walk(anchor, &mut assigned_edge, &assigned_vertex, &mut visited);
    if fwd_closed {
        mark(&forward, &mut assigned_vertex);
        ears.push(Ear {
            edges: forward,
            start_vertex: anchor,
            end_vertex: anchor,
            closed: true,
            start_anchored: true,
            end_anchored: true,
        });
    } else {
        let (backward, bwd_end, bwd_closed, _) =
            walk(anchor, &mut assigned_edge, &assigned_vertex, &mut visited);
        if bwd_closed {
            mark(&backward, &mut assigned_vertex);
            ears.push(Ear {
                edges: backward,
                start_vertex: anchor,
                end_vertex: anchor,
                closed: true,
                start_anchored: true,
                end_anchored: true,
            });
            if !forward.is_empty() {
                mark(&forward, &mut assigned_vertex);
                ears.push(Ear {
                    edges: forward,
                    start_vertex: anchor,
                    end_vertex: fwd_end,
                    closed: false,
                    start_anchored: true,
                    end_anchored: false,
                });
            }
        } else {
            let mut edges: Vec<usize> = backward.into_iter().rev().collect();
            edges.extend(forward);
            if edges.is_empty() && !edge_ends.is_empty() {
                return Err(FieldError::Corrupt(
                    "anchor vertex has no frame edges".into(),
                ));
            }
            if !edges.is_empty() {
                mark(&edges, &mut assigned_vertex);
                ears.push(Ear {
                    edges,
                    start_vertex: bwd_end,
                    end_vertex: fwd_end,
                    closed: false,
                    start_anchored: false,
                    end_anchored: false,
                });
            }
        }
    }

    while assigned_edge.iter().any(|&b| !b) {
        let start = (0..vertex_bound)
            .find(|&v| assigned_vertex[v] && adj[v].iter().any(|&(e, _)| !assigned_edge[e]));
        let Some(start) = start else {
            return Err(FieldError::Corrupt("frame is disconnected".into()));
        };
        let mut visited = vec![false; vertex_bound];
        let (edges, end, closed, end_assigned) =
            walk(start, &mut assigned_edge, &assigned_vertex, &mut visited);
        mark(&edges, &mut assigned_vertex);
        ears.push(Ear {
            edges,
            start_vertex: start,
            end_vertex: end,
            closed,
            start_anchored: true,
            end_anchored: closed || end_assigned,
        });
    }
    Ok(EarDecomposition { ears })
}

/// Ear decomposition of a frame restricted to one connected component of
/// the complex (selected through `vertex_filter`).
pub fn ear_decompose(
    c: &OrientedComplex2,
    frame: &ExpansionFrame,
    vertex_filter: impl Fn(usize) -> bool,
    anchor: usize,
) -> Result<EarDecomposition, FieldError> {
    let edges: Vec<usize> = frame
        .live_edges()
        .filter(|&e| vertex_filter(c.edge_vertices(e)[0]))
        .collect();
    let ends: Vec<[usize; 2]> = edges.iter().map(|&e| c.edge_vertices(e)).collect();
    let mut dec = ear_decompose_graph(c.vertex_count(), &ends, anchor)?;
    for ear in &mut dec.ears {
        for e in &mut ear.edges {
            *e = edges[*e];
        }
    }
    Ok(dec)
}

/// Everything `main_frame` produces besides the matching itself.
pub struct MainFrameOutput {
    pub matching: MorseMatching,
    pub frame: ExpansionFrame,
    pub counters: FrameCounters,
    pub ears_per_component: Vec<EarDecomposition>,
}

/// Designs the optimal gradient vector field: a 2-flow over every
/// connected component followed by 1-flows along the ears of the
/// resulting frame.
pub fn main_frame(c: &OrientedComplex2) -> Result<MainFrameOutput, MeshError> {
    main_frame_impl(c, None)
}

/// As [`main_frame`], reporting every elementary expansion to `trace`.
pub fn main_frame_with_trace(
    c: &OrientedComplex2,
    trace: &mut dyn FnMut(&ExpansionEvent),
) -> Result<MainFrameOutput, MeshError> {
    main_frame_impl(c, Some(trace))
}

fn main_frame_impl(
    c: &OrientedComplex2,
    trace: Option<&mut dyn FnMut(&ExpansionEvent)>,
) -> Result<MainFrameOutput, MeshError> {
    c.validate_manifold()?;
    let (comp_of_vertex, ncomp) = c.connected_components();
    let mut state = match trace {
        Some(t) => FlowState::with_trace(c, t),
        None => FlowState::new(c),
    };
    let mut ears_per_component = Vec::new();

    for comp in 0..ncomp {
        let tris: Vec<CellId> = (0..c.triangle_count())
            .filter(|&t| comp_of_vertex[c.triangle_vertices(t)[0]] == comp)
            .map(|t| c.triangle_id(t))
            .collect();
        if tris.is_empty() {
            // A bare vertex: it is the component's critical 0-cell.
            let v = (0..c.vertex_count())
                .find(|&v| comp_of_vertex[v] == comp)
                .unwrap();
            state.frame.add_vertex(v);
            continue;
        }
        let cobdry: Vec<CellId> = tris
            .iter()
            .copied()
            .filter(|&t| {
                let t = c.local_index(t);
                c.triangle_edges(t)
                    .iter()
                    .any(|&e| c.edge_triangles(e).len() == 1)
            })
            .collect();
        frame_flow(&mut state, &tris, &cobdry, None, None);

        let anchor_edge = state
            .last_matched_edge
            .expect("a component with triangles always records a matched edge");
        let anchor = c.edge_vertices(anchor_edge)[0].min(c.edge_vertices(anchor_edge)[1]);
        let ears =
            ear_decompose(c, &state.frame, |v| comp_of_vertex[v] == comp, anchor).map_err(|e| {
                MeshError::Malformed {
                    line: 0,
                    reason: e.to_string(),
                }
            })?;

        for ear in &ears.ears {
            let mut live_local = ear.edges.clone();
            live_local.sort_unstable();
            let live: Vec<CellId> = live_local.iter().map(|&e| c.edge_id(e)).collect();
            let mut live_set = vec![false; c.edge_count()];
            for &e in &live_local {
                live_set[e] = true;
            }
            // The ear's 1-flow starts at its free endpoints: end edges
            // whose endpoint no earlier ear has consumed.
            let mut bvx = vec![false; c.vertex_count()];
            let mut cobdry_local = Vec::new();
            if !ear.closed {
                if !ear.start_anchored {
                    bvx[ear.start_vertex] = true;
                    cobdry_local.push(ear.edges[0]);
                }
                if !ear.end_anchored {
                    bvx[ear.end_vertex] = true;
                    cobdry_local.push(*ear.edges.last().unwrap());
                }
            }
            cobdry_local.sort_unstable();
            cobdry_local.dedup();
            let cobdry1: Vec<CellId> = cobdry_local.iter().map(|&e| c.edge_id(e)).collect();
            frame_flow(&mut state, &live, &cobdry1, Some(&live_set), Some(&bvx));
        }
        ears_per_component.push(ears);
    }

    Ok(MainFrameOutput {
        matching: state.matching,
        frame: state.frame,
        counters: state.counters,
        ears_per_component,
    })
}
