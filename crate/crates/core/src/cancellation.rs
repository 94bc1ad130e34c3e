//! Pseudo-optimality by critical-cell cancellation: random gradient
//! fields, unique-path reversal, and the king-flow reduction that turns
//! an arbitrary field into an optimal one without ever adding a pair that
//! is not a cancellation.

use std::fmt;

use crate::complex::{CellId, MeshError, OrientedComplex2};
use crate::dgvf::{FieldError, MorseMatching};
use crate::frameflow::{ear_decompose, ExpansionFrame};

/// Minimal deterministic PRNG (splitmix64); seeds reproduce runs exactly
/// on every platform.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CancelError {
    /// The pair has zero or several connecting gradient paths, so the
    /// cancellation criterion fails.
    PathNotUnique {
        lower: CellId,
        upper: CellId,
        found: usize,
    },
    /// A cell given to a cancellation was not critical.
    NotCritical(CellId),
    /// A cancellation broke acyclicity (checked when enabled).
    AcyclicityLost,
    Mesh(MeshError),
    Field(FieldError),
}

impl fmt::Display for CancelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CancelError::PathNotUnique {
                lower,
                upper,
                found,
            } => write!(
                f,
                "cancellation of ({lower}, {upper}) needs exactly one gradient path, found {found}"
            ),
            CancelError::NotCritical(c) => write!(f, "{c} is not critical"),
            CancelError::AcyclicityLost => write!(f, "cancellation broke acyclicity"),
            CancelError::Mesh(e) => write!(f, "{e}"),
            CancelError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CancelError {}

impl From<MeshError> for CancelError {
    fn from(e: MeshError) -> CancelError {
        CancelError::Mesh(e)
    }
}

impl From<FieldError> for CancelError {
    fn from(e: FieldError) -> CancelError {
        CancelError::Field(e)
    }
}

/// One cancellation, as reported through the king-flow trace hook.
#[derive(Clone, Copy, Debug)]
pub struct CancelEvent {
    pub step: u64,
    pub lower: CellId,
    pub upper: CellId,
    pub upsilon_before: usize,
    pub upsilon_after: usize,
}

/// Builds a random acyclic gradient field by seeded free-pair collapses:
/// while some cell has a unique live coface, match a uniformly random
/// such pair; when none exists, remove a random live top-dimensional cell
/// as critical. Reproducible per seed.
pub fn random_dgvf(c: &OrientedComplex2, seed: u64) -> MorseMatching {
    let mut rng = SplitMix64::new(seed);
    let n = c.cell_count();
    let mut alive = vec![true; n];
    let mut coface_count = vec![0usize; n];
    for (raw, count) in coface_count.iter_mut().enumerate() {
        *count = c.cofaces(CellId(raw)).len();
    }
    let mut matching = MorseMatching::for_complex(c);

    // Free cells kept in a vector with positions for O(1) random removal.
    let mut free: Vec<usize> = Vec::new();
    let mut free_pos: Vec<Option<usize>> = vec![None; n];
    let set_free = |free: &mut Vec<usize>,
                    free_pos: &mut Vec<Option<usize>>,
                    cell: usize,
                    on: bool| match (free_pos[cell], on) {
        (None, true) => {
            free_pos[cell] = Some(free.len());
            free.push(cell);
        }
        (Some(at), false) => {
            let last = *free.last().unwrap();
            free.swap_remove(at);
            free_pos[cell] = None;
            if last != cell {
                free_pos[last] = Some(at);
            }
        }
        _ => {}
    };
    for (raw, &count) in coface_count.iter().enumerate() {
        if c.dim(CellId(raw)) < 2 && count == 1 {
            set_free(&mut free, &mut free_pos, raw, true);
        }
    }

    let remove_cell = |cell: usize,
                       alive: &mut Vec<bool>,
                       coface_count: &mut Vec<usize>,
                       free: &mut Vec<usize>,
                       free_pos: &mut Vec<Option<usize>>| {
        alive[cell] = false;
        set_free(free, free_pos, cell, false);
        for (face, _) in c.faces(CellId(cell)) {
            if alive[face.0] {
                coface_count[face.0] -= 1;
                let live_cofaces = c.cofaces(face).into_iter().filter(|cf| alive[cf.0]).count();
                set_free(free, free_pos, face.0, live_cofaces == 1);
            }
        }
    };

    let mut live_cells = n;
    while live_cells > 0 {
        if !free.is_empty() {
            let tau = free[rng.below(free.len())];
            let sigma = c
                .cofaces(CellId(tau))
                .into_iter()
                .find(|cf| alive[cf.0])
                .expect("free cell must have a live coface");
            matching.add_pair(CellId(tau), sigma);
            remove_cell(
                sigma.0,
                &mut alive,
                &mut coface_count,
                &mut free,
                &mut free_pos,
            );
            remove_cell(tau, &mut alive, &mut coface_count, &mut free, &mut free_pos);
            live_cells -= 2;
        } else {
            // No free pair: a random top-dimensional live cell goes
            // critical.
            let top_dim = (0..n)
                .filter(|&i| alive[i])
                .map(|i| c.dim(CellId(i)))
                .max()
                .unwrap();
            let tops: Vec<usize> = (0..n)
                .filter(|&i| alive[i] && c.dim(CellId(i)) == top_dim)
                .collect();
            let pick = tops[rng.below(tops.len())];
            remove_cell(
                pick,
                &mut alive,
                &mut coface_count,
                &mut free,
                &mut free_pos,
            );
            live_cells -= 1;
        }
    }
    matching
}

/// Mutable state for a run of cancellations.
pub struct CancellationState<'a> {
    pub complex: &'a OrientedComplex2,
    pub matching: MorseMatching,
    /// Verify acyclicity after every cancellation.
    pub check_acyclic: bool,
    pub cancellations: u64,
    trace: Option<&'a mut dyn FnMut(&CancelEvent)>,
}

impl<'a> CancellationState<'a> {
    pub fn new(complex: &'a OrientedComplex2, matching: MorseMatching) -> CancellationState<'a> {
        CancellationState {
            complex,
            matching,
            check_acyclic: false,
            cancellations: 0,
            trace: None,
        }
    }

    pub fn with_trace(
        complex: &'a OrientedComplex2,
        matching: MorseMatching,
        trace: &'a mut dyn FnMut(&CancelEvent),
    ) -> CancellationState<'a> {
        let mut s = CancellationState::new(complex, matching);
        s.trace = Some(trace);
        s
    }

    fn upsilon(&self) -> usize {
        let (counts, _) = self.matching.critical_cells(self.complex);
        counts.upsilon()
    }
}

/// All gradient paths from the boundary of `upper` down to `lower`, as
/// alternating cell sequences `a0, b0, a1, ..., ak` with `a0` a face of
/// `upper` and `ak = lower`. Stops collecting past `cap` paths.
fn collect_paths(
    c: &OrientedComplex2,
    m: &MorseMatching,
    upper: CellId,
    lower: CellId,
    cap: usize,
) -> Vec<Vec<CellId>> {
    let mut found = Vec::new();
    let mut stack = Vec::new();
    for (face, _) in c.faces(upper) {
        dfs_collect(c, m, face, lower, cap, &mut stack, &mut found);
        if found.len() >= cap {
            break;
        }
    }
    found
}

fn dfs_collect(
    c: &OrientedComplex2,
    m: &MorseMatching,
    cur: CellId,
    target: CellId,
    cap: usize,
    stack: &mut Vec<CellId>,
    found: &mut Vec<Vec<CellId>>,
) {
    if found.len() >= cap {
        return;
    }
    stack.push(cur);
    if cur == target {
        found.push(stack.clone());
    } else if let Some(up) = m.pair_of(cur) {
        stack.push(up);
        for (next, _) in c.faces(up) {
            if next != cur {
                dfs_collect(c, m, next, target, cap, stack, found);
            }
        }
        stack.pop();
    }
    stack.pop();
}

/// Cancels the critical pair (`lower`, `upper`) by reversing the unique
/// gradient path between them. Errors when the path is absent or not
/// unique, or (with checking on) if acyclicity breaks.
pub fn cancel_pair(
    state: &mut CancellationState,
    lower: CellId,
    upper: CellId,
) -> Result<(), CancelError> {
    let c = state.complex;
    if !state.matching.is_critical(lower) {
        return Err(CancelError::NotCritical(lower));
    }
    if !state.matching.is_critical(upper) {
        return Err(CancelError::NotCritical(upper));
    }
    let paths = collect_paths(c, &state.matching, upper, lower, 2);
    if paths.len() != 1 {
        return Err(CancelError::PathNotUnique {
            lower,
            upper,
            found: paths.len(),
        });
    }
    let before = if state.trace.is_some() {
        state.upsilon()
    } else {
        0
    };
    let path = &paths[0];
    // path = a0, b0, a1, b1, ..., ak; remove the old pairs, then shift:
    // a0 matches upper, a_{i+1} matches b_i.
    let mut i = 0;
    while i + 1 < path.len() {
        state.matching.remove_pair(path[i], path[i + 1]);
        i += 2;
    }
    state.matching.add_pair(path[0], upper);
    let mut i = 1;
    while i + 1 < path.len() {
        state.matching.add_pair(path[i + 1], path[i]);
        i += 2;
    }
    state.cancellations += 1;
    if state.check_acyclic && !state.matching.is_acyclic(c) {
        return Err(CancelError::AcyclicityLost);
    }
    if state.trace.is_some() {
        let ev = CancelEvent {
            step: state.cancellations,
            lower,
            upper,
            upsilon_before: before,
            upsilon_after: state.upsilon(),
        };
        if let Some(t) = state.trace.as_deref_mut() {
            t(&ev);
        }
    }
    Ok(())
}

/// Where the backward chain through one coface of a critical 1-cell
/// roots: a critical 2-cell, a boundary-started flow, or the king itself.
fn chain_root(
    c: &OrientedComplex2,
    m: &MorseMatching,
    gamma: CellId,
    coface: CellId,
) -> Result<crate::dgvf::PathSource, FieldError> {
    crate::dgvf::trace_inverse_path(c, m, gamma, coface).map(|(_, src)| src)
}

/// Finds a saddle shared between `king` and another critical cell of the
/// same dimension, per the king's dimension:
///
/// * q = 2: a critical 1-cell with exactly one gradient path from `king`
///   and a unique path from a distinct critical 2-cell.
/// * q = 0: a critical 1-cell whose two descending walks end at `king`
///   and at a distinct critical 0-cell.
pub fn shared_saddle(
    state: &CancellationState,
    king: CellId,
) -> Result<Option<(CellId, CellId)>, CancelError> {
    let c = state.complex;
    let m = &state.matching;
    match c.dim(king) {
        2 => {
            let reach = flood_two_flow(c, m, king);
            let (_, critical) = m.critical_cells(c);
            for &gamma in &critical[1] {
                let e = c.local_index(gamma);
                let cofs = c.edge_triangles(e);
                if !cofs.iter().any(|&t| reach[t]) {
                    continue;
                }
                let mut king_chains = 0;
                let mut other: Option<CellId> = None;
                for &t in cofs {
                    match chain_root(c, m, gamma, c.triangle_id(t))? {
                        crate::dgvf::PathSource::Critical(root) if root == king => king_chains += 1,
                        crate::dgvf::PathSource::Critical(root) => other = Some(root),
                        crate::dgvf::PathSource::Boundary(_) => {}
                    }
                }
                if king_chains == 1 {
                    if let Some(sigma) = other {
                        return Ok(Some((gamma, sigma)));
                    }
                }
            }
            Ok(None)
        }
        0 => {
            let (_, critical) = m.critical_cells(c);
            for &gamma in &critical[1] {
                let [a, b] = c.edge_vertices(c.local_index(gamma));
                let (ea, eb) = (walk_down(c, m, a), walk_down(c, m, b));
                if ea == eb {
                    continue;
                }
                let king_v = king.0;
                if ea == king_v {
                    return Ok(Some((gamma, c.vertex_id(eb))));
                }
                if eb == king_v {
                    return Ok(Some((gamma, c.vertex_id(ea))));
                }
            }
            Ok(None)
        }
        _ => Err(CancelError::Field(FieldError::BadQuery(format!(
            "shared_saddle expects a 0- or 2-cell king, got {king}"
        )))),
    }
}

/// Triangles reachable from `start` along the 2-flow.
fn flood_two_flow(c: &OrientedComplex2, m: &MorseMatching, start: CellId) -> Vec<bool> {
    let mut reach = vec![false; c.triangle_count()];
    let mut stack = vec![c.local_index(start)];
    reach[stack[0]] = true;
    while let Some(t) = stack.pop() {
        for &e in &c.triangle_edges(t) {
            if let Some(up) = m.pair_of(c.edge_id(e)) {
                if c.dim(up) == 2 {
                    let t2 = c.local_index(up);
                    if !reach[t2] {
                        reach[t2] = true;
                        stack.push(t2);
                    }
                }
            }
        }
    }
    reach
}

/// The deterministic descending 1-flow walk from a vertex, ending at the
/// critical vertex of its basin.
fn walk_down(c: &OrientedComplex2, m: &MorseMatching, start: usize) -> usize {
    let mut v = start;
    for _ in 0..=c.edge_count() {
        match m.pair_of(c.vertex_id(v)) {
            None => return v,
            Some(e) => {
                let [a, b] = c.edge_vertices(c.local_index(e));
                v = if a == v { b } else { a };
            }
        }
    }
    unreachable!("1-flow walk exceeded the edge count; field has a cycle")
}

/// Pairs every coboundary d-cell with its critical boundary face, first
/// cancelling through the unique path from the critical cell that feeds
/// the existing pairing. Boundary faces whose flow provably emanates from
/// the manifold boundary are left alone (the Euler identity settles them).
pub fn fix_bdry(state: &mut CancellationState, d: usize) -> Result<(), CancelError> {
    let c = state.complex;
    match d {
        2 => {
            for t in 0..c.triangle_count() {
                let tri = c.triangle_id(t);
                let bfaces: Vec<usize> = c
                    .triangle_edges(t)
                    .iter()
                    .copied()
                    .filter(|&e| c.edge_triangles(e).len() == 1)
                    .collect();
                for e in bfaces {
                    let b = c.edge_id(e);
                    if !state.matching.is_critical(b) {
                        continue;
                    }
                    match state.matching.rev_pair_of(tri) {
                        None => cancel_pair(state, b, tri)?,
                        Some(theta) => {
                            let theta_e = c.local_index(theta);
                            if c.edge_triangles(theta_e).len() == 1 {
                                // Already paired with a boundary face.
                                continue;
                            }
                            match chain_root(c, &state.matching, b, tri)? {
                                crate::dgvf::PathSource::Critical(alpha) => {
                                    cancel_pair(state, b, alpha)?
                                }
                                crate::dgvf::PathSource::Boundary(_) => {}
                            }
                        }
                    }
                }
            }
            Ok(())
        }
        1 => {
            // Frame-level analogue: degree-1 frame vertices that are
            // critical get paired through a walk from a critical edge.
            let frame = ExpansionFrame::residual(c, &state.matching);
            let mut targets = Vec::new();
            for v in 0..c.vertex_count() {
                if frame.degree(c, v) == 1 && state.matching.is_critical(c.vertex_id(v)) {
                    targets.push(v);
                }
            }
            for v in targets {
                let (_, critical) = state.matching.critical_cells(c);
                let mut source = None;
                for &gamma in &critical[1] {
                    let [a, b] = c.edge_vertices(c.local_index(gamma));
                    let (ea, eb) = (
                        walk_down(c, &state.matching, a),
                        walk_down(c, &state.matching, b),
                    );
                    if (ea == v) != (eb == v) {
                        source = Some(gamma);
                        break;
                    }
                }
                if let Some(gamma) = source {
                    cancel_pair(state, c.vertex_id(v), gamma)?;
                }
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// Outcome of a king-flow reduction.
pub struct KingFlowOutcome {
    pub matching: MorseMatching,
    pub upsilon_before: usize,
    pub upsilon_after: usize,
    pub cancellations: u64,
}

/// Reduces an arbitrary gradient field to the optimal one using critical
/// cell cancellations only: per semigraph component, fix the boundary and
/// run king reversals at dimension 2; then decompose the residual frame
/// into ears and run king reversals at dimension 0 ear by ear, protecting
/// one minimum per connected component.
pub fn king_flow(
    c: &OrientedComplex2,
    matching: MorseMatching,
    check_acyclic: bool,
    trace: Option<&mut dyn FnMut(&CancelEvent)>,
) -> Result<KingFlowOutcome, CancelError> {
    c.validate_manifold()?;
    let mut state = match trace {
        Some(t) => CancellationState::with_trace(c, matching, t),
        None => CancellationState::new(c, matching),
    };
    state.check_acyclic = check_acyclic;
    let upsilon_before = state.upsilon();

    // Dimension-2 phase, component by component of the semigraph.
    let semigraph = c.semigraph();
    for comp in 0..semigraph.component_count {
        fix_bdry_component(&mut state, comp, &semigraph)?;
        let mut worklist: Vec<CellId> = {
            let (_, critical) = state.matching.critical_cells(c);
            critical[2]
                .iter()
                .copied()
                .filter(|&t| semigraph.component_of_triangle[c.local_index(t)] == comp)
                .collect()
        };
        worklist.reverse();
        while let Some(king) = worklist.pop() {
            if !state.matching.is_critical(king) {
                continue;
            }
            king_rev_2(&mut state, king)?;
        }
    }

    // Dimension-0 phase over the residual frame, per complex component.
    let (comp_of_vertex, ncomp) = c.connected_components();
    for comp in 0..ncomp {
        let keeper = {
            let (_, critical) = state.matching.critical_cells(c);
            critical[0]
                .iter()
                .copied()
                .find(|&v| comp_of_vertex[v.0] == comp)
                .expect("every component keeps at least one critical vertex")
        };
        let frame = ExpansionFrame::residual(c, &state.matching);
        let has_edges = frame
            .live_edges()
            .any(|e| comp_of_vertex[c.edge_vertices(e)[0]] == comp);
        if !has_edges {
            continue;
        }
        let ears = ear_decompose(c, &frame, |v| comp_of_vertex[v] == comp, keeper.0)?;
        for ear in &ears.ears {
            let in_ear: std::collections::BTreeSet<usize> = ear.edges.iter().copied().collect();
            loop {
                let cancelled = sweep_minima(&mut state, keeper, Some(&in_ear))?;
                if !cancelled {
                    break;
                }
            }
        }
        // Saddles whose basins only merged after their ear was processed.
        loop {
            let cancelled = sweep_minima(&mut state, keeper, None)?;
            if !cancelled {
                break;
            }
        }
    }

    let upsilon_after = state.upsilon();
    Ok(KingFlowOutcome {
        matching: state.matching,
        upsilon_before,
        upsilon_after,
        cancellations: state.cancellations,
    })
}

fn fix_bdry_component(
    state: &mut CancellationState,
    comp: usize,
    semigraph: &crate::complex::Semigraph,
) -> Result<(), CancelError> {
    let c = state.complex;
    for t in 0..c.triangle_count() {
        if semigraph.component_of_triangle[t] != comp {
            continue;
        }
        let tri = c.triangle_id(t);
        let bfaces: Vec<usize> = c
            .triangle_edges(t)
            .iter()
            .copied()
            .filter(|&e| c.edge_triangles(e).len() == 1)
            .collect();
        for e in bfaces {
            let b = c.edge_id(e);
            if !state.matching.is_critical(b) {
                continue;
            }
            match state.matching.rev_pair_of(tri) {
                None => cancel_pair(state, b, tri)?,
                Some(theta) => {
                    if c.edge_triangles(c.local_index(theta)).len() == 1 {
                        continue;
                    }
                    match chain_root(c, &state.matching, b, tri)? {
                        crate::dgvf::PathSource::Critical(alpha) => cancel_pair(state, b, alpha)?,
                        crate::dgvf::PathSource::Boundary(_) => {}
                    }
                }
            }
        }
    }
    Ok(())
}

/// Saddle-merging loop for one king 2-cell, then the boundary rule: if a
/// critical 1-cell keeps a unique path from the king, cancel the king
/// into it.
fn king_rev_2(state: &mut CancellationState, king: CellId) -> Result<(), CancelError> {
    while let Some((gamma, sigma)) = shared_saddle(state, king)? {
        cancel_pair(state, gamma, sigma)?;
    }
    if !state.matching.is_critical(king) {
        return Ok(());
    }
    let c = state.complex;
    let (_, critical) = state.matching.critical_cells(c);
    for &phi in &critical[1] {
        let paths = collect_paths(c, &state.matching, king, phi, 2);
        if paths.len() == 1 {
            return cancel_pair(state, phi, king);
        }
    }
    Ok(())
}

/// One pass over critical 1-cells (optionally restricted to an ear):
/// cancel any saddle whose two descending walks reach distinct minima,
/// never cancelling the protected keeper. Returns whether a cancellation
/// happened.
fn sweep_minima(
    state: &mut CancellationState,
    keeper: CellId,
    restrict: Option<&std::collections::BTreeSet<usize>>,
) -> Result<bool, CancelError> {
    let c = state.complex;
    let saddles: Vec<CellId> = {
        let (_, critical) = state.matching.critical_cells(c);
        critical[1]
            .iter()
            .copied()
            .filter(|&g| restrict.is_none_or(|set| set.contains(&c.local_index(g))))
            .collect()
    };
    for gamma in saddles {
        let [a, b] = c.edge_vertices(c.local_index(gamma));
        let (ea, eb) = (
            walk_down(c, &state.matching, a),
            walk_down(c, &state.matching, b),
        );
        if ea == eb {
            continue;
        }
        let sigma = if ea == keeper.0 {
            eb
        } else if eb == keeper.0 {
            ea
        } else {
            ea.max(eb)
        };
        cancel_pair(state, c.vertex_id(sigma), gamma)?;
        return Ok(true);
    }
    Ok(false)
}
