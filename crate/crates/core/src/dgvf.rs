//! Discrete gradient vector fields as matchings on the Hasse graph:
//! pairing storage, acyclicity (the Morse-matching condition), critical
//! cell enumeration, inverse path tracing, and extraction of a compatible
//! discrete Morse function.

use std::fmt;

use crate::complex::{CellId, OrientedComplex2};

/// Errors from vector-field operations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FieldError {
    /// The reoriented Hasse graph contains a directed cycle.
    CycleDetected,
    /// An internal invariant was violated (always a bug, never bad input).
    Corrupt(String),
    /// A precondition on the queried cells does not hold.
    BadQuery(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::CycleDetected => write!(f, "matching is not acyclic"),
            FieldError::Corrupt(s) => write!(f, "internal corruption: {s}"),
            FieldError::BadQuery(s) => write!(f, "bad query: {s}"),
        }
    }
}

impl std::error::Error for FieldError {}

/// Critical cell counts per dimension.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MorseCounts {
    pub c: [usize; 3],
}

impl MorseCounts {
    /// Total number of critical cells.
    pub fn upsilon(&self) -> usize {
        self.c.iter().sum()
    }

    /// c0 - c1 + c2, which always equals the Euler characteristic.
    pub fn euler(&self) -> i64 {
        self.c[0] as i64 - self.c[1] as i64 + self.c[2] as i64
    }
}

impl fmt::Display for MorseCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.c[0], self.c[1], self.c[2])
    }
}

/// A combinatorial vector field stored as two id-indexed arrays, mutually
/// inverse: `pair` maps a cell to its matched coface, `rev_pair` to its
/// matched face. A cell is critical when both entries are empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MorseMatching {
    pair: Vec<Option<CellId>>,
    rev_pair: Vec<Option<CellId>>,
}

impl MorseMatching {
    pub fn new(cell_count: usize) -> MorseMatching {
        MorseMatching {
            pair: vec![None; cell_count],
            rev_pair: vec![None; cell_count],
        }
    }

    pub fn for_complex(c: &OrientedComplex2) -> MorseMatching {
        MorseMatching::new(c.cell_count())
    }

    pub fn cell_count(&self) -> usize {
        self.pair.len()
    }

    pub fn pair_of(&self, cell: CellId) -> Option<CellId> {
        self.pair[cell.0]
    }

    pub fn rev_pair_of(&self, cell: CellId) -> Option<CellId> {
        self.rev_pair[cell.0]
    }

    pub fn is_matched(&self, cell: CellId) -> bool {
        self.pair[cell.0].is_some() || self.rev_pair[cell.0].is_some()
    }

    pub fn is_critical(&self, cell: CellId) -> bool {
        !self.is_matched(cell)
    }

    /// Records the gradient pair `<lower, upper>`.
    ///
    /// Panics if either cell is already part of a pair; callers guard.
    pub fn add_pair(&mut self, lower: CellId, upper: CellId) {
        assert!(self.pair[lower.0].is_none() && self.rev_pair[lower.0].is_none());
        assert!(self.pair[upper.0].is_none() && self.rev_pair[upper.0].is_none());
        self.pair[lower.0] = Some(upper);
        self.rev_pair[upper.0] = Some(lower);
    }

    pub fn remove_pair(&mut self, lower: CellId, upper: CellId) {
        assert_eq!(self.pair[lower.0], Some(upper));
        assert_eq!(self.rev_pair[upper.0], Some(lower));
        self.pair[lower.0] = None;
        self.rev_pair[upper.0] = None;
    }

    /// Critical cell counts and per-dimension id lists.
    pub fn critical_cells(&self, c: &OrientedComplex2) -> (MorseCounts, [Vec<CellId>; 3]) {
        let mut lists: [Vec<CellId>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for raw in 0..self.pair.len() {
            let id = CellId(raw);
            if self.is_critical(id) {
                lists[c.dim(id)].push(id);
            }
        }
        let counts = MorseCounts {
            c: [lists[0].len(), lists[1].len(), lists[2].len()],
        };
        (counts, lists)
    }

    /// Checks that the matching-reoriented Hasse graph is acyclic.
    ///
    /// V-path cycles always stay within one d-(d-1) level, so the levels
    /// are checked independently. On the d level the condensed rule is: a
    /// directed edge runs from d-cell `rho` to d-cell `sigma` whenever some
    /// face of `rho` is matched upward into `sigma`.
    pub fn is_acyclic(&self, c: &OrientedComplex2) -> bool {
        self.level_is_acyclic(c, 2) && self.level_is_acyclic(c, 1)
    }

    fn level_is_acyclic(&self, c: &OrientedComplex2, d: usize) -> bool {
        let n = if d == 2 {
            c.triangle_count()
        } else {
            c.edge_count()
        };
        let to_id = |local: usize| {
            if d == 2 {
                c.triangle_id(local)
            } else {
                c.edge_id(local)
            }
        };
        let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for (rho, succ) in succs.iter_mut().enumerate() {
            let rho_id = to_id(rho);
            for (face, _) in c.faces(rho_id) {
                if let Some(sigma_id) = self.pair[face.0] {
                    if sigma_id != rho_id {
                        let sigma = c.local_index(sigma_id);
                        succ.push(sigma);
                        indeg[sigma] += 1;
                    }
                }
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = queue.pop() {
            seen += 1;
            for &j in &succs[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push(j);
                }
            }
        }
        seen == n
    }

    /// GraphViz DOT of the reoriented Hasse graph: matched pairs point
    /// upward, everything else downward.
    pub fn to_dot(&self, c: &OrientedComplex2) -> String {
        let label = |id: CellId| {
            let vs = c.cell_vertices(id);
            let body = vs
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!("\"{}[{}]\"", ["v", "e", "t"][c.dim(id)], body)
        };
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
        for raw in 0..self.pair.len() {
            let id = CellId(raw);
            for (face, _) in c.faces(id) {
                if self.pair[face.0] == Some(id) {
                    out.push_str(&format!(
                        "  {} -> {} [color=red];\n",
                        label(face),
                        label(id)
                    ));
                } else {
                    out.push_str(&format!("  {} -> {};\n", label(id), label(face)));
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// JSON listing of the critical cells per dimension.
    pub fn critical_cells_json(&self, c: &OrientedComplex2) -> serde_json::Value {
        let (counts, lists) = self.critical_cells(c);
        let per_dim: Vec<serde_json::Value> = lists
            .iter()
            .map(|list| {
                list.iter()
                    .map(|&id| serde_json::json!({ "id": id.0, "vertices": c.cell_vertices(id) }))
                    .collect::<Vec<_>>()
                    .into()
            })
            .collect();
        serde_json::json!({
            "counts": counts.c,
            "critical": per_dim,
        })
    }
}

/// Where an inverse gradient path trace terminated.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PathSource {
    /// The path emanates from this critical 2-cell.
    Critical(CellId),
    /// The path emanates from this boundary 1-cell (matched with its only
    /// coface).
    Boundary(CellId),
}

/// An alternating gradient path with its orientation multiplicity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradientPath {
    /// Alternating sequence starting at the target 1-cell and walking
    /// backward: gamma, t1, e1, t2, ..., excluding the source cell.
    pub cells: Vec<CellId>,
    /// Product of the co-orientation weights along the forward path.
    pub multiplicity: i64,
}

impl GradientPath {
    /// Number of matched 2-cells the path passes through.
    pub fn interior_triangles(&self, c: &OrientedComplex2) -> usize {
        self.cells.iter().filter(|&&id| c.dim(id) == 2).count()
    }
}

/// Traces the unique inverse gradient path from the 1-cell `gamma`
/// backward through `start_coface` to the cell the flow emanates from.
///
/// Manifoldness makes the backward step unique: a matched triangle is
/// entered through its own matched edge, whose other coface is the only
/// possible predecessor.
pub fn trace_inverse_path(
    c: &OrientedComplex2,
    m: &MorseMatching,
    gamma: CellId,
    start_coface: CellId,
) -> Result<(GradientPath, PathSource), FieldError> {
    if c.dim(gamma) != 1 || c.dim(start_coface) != 2 {
        return Err(FieldError::BadQuery(format!(
            "trace expects a 1-cell and a 2-cell coface, got {gamma} and {start_coface}"
        )));
    }
    if m.pair_of(gamma) == Some(start_coface) {
        return Err(FieldError::BadQuery(
            "start coface is matched with gamma itself; no inverse path arrives that way".into(),
        ));
    }
    let mut cells = vec![gamma];
    let mut multiplicity = 1i64;
    let mut entry_edge = gamma;
    let mut tri = start_coface;
    for _ in 0..=c.triangle_count() {
        if m.is_critical(tri) {
            // Forward path starts with <bd tri, exit edge>.
            multiplicity *= c.incidence(tri, entry_edge).unwrap();
            return Ok((
                GradientPath {
                    cells,
                    multiplicity,
                },
                PathSource::Critical(tri),
            ));
        }
        let matched_edge = m
            .rev_pair_of(tri)
            .ok_or_else(|| FieldError::Corrupt(format!("2-cell {tri} matched upward")))?;
        // Regular step weight: -<bd tri, in> * <bd tri, out>.
        multiplicity *=
            -c.incidence(tri, matched_edge).unwrap() * c.incidence(tri, entry_edge).unwrap();
        cells.push(tri);
        let e = c.local_index(matched_edge);
        let prev: Vec<usize> = c
            .edge_triangles(e)
            .iter()
            .copied()
            .filter(|&t| c.triangle_id(t) != tri)
            .collect();
        match prev.as_slice() {
            [] => {
                return Ok((
                    GradientPath {
                        cells,
                        multiplicity,
                    },
                    PathSource::Boundary(matched_edge),
                ))
            }
            [t] => {
                cells.push(matched_edge);
                entry_edge = matched_edge;
                tri = c.triangle_id(*t);
            }
            _ => {
                return Err(FieldError::Corrupt(format!(
                    "edge {matched_edge} has more than two cofaces"
                )))
            }
        }
    }
    Err(FieldError::Corrupt(
        "inverse path exceeded the triangle count".into(),
    ))
}

/// Extracts an injective integer Morse function compatible with the
/// matching: the i-th cell of the ascending topological order gets value
/// i. Gradient pairs are the only local inversions.
pub fn morse_function_from_matching(
    c: &OrientedComplex2,
    m: &MorseMatching,
) -> Result<Vec<usize>, FieldError> {
    let order = crate::morse_boundary::topological_sort_cells(c, m)?;
    let mut values = vec![0usize; c.cell_count()];
    for (i, &cell) in order.iter().enumerate() {
        values[cell.0] = i;
    }
    Ok(values)
}

/// Checks the discrete Morse function conditions N1 <= 1 and N2 <= 1 for
/// every cell, and that the exceptions are exactly the matching's pairs.
pub fn verify_discrete_morse_function(
    c: &OrientedComplex2,
    m: &MorseMatching,
    values: &[usize],
) -> bool {
    for raw in 0..c.cell_count() {
        let id = CellId(raw);
        let n1: Vec<CellId> = c
            .cofaces(id)
            .into_iter()
            .filter(|cf| values[cf.0] <= values[raw])
            .collect();
        let n2: Vec<CellId> = c
            .faces(id)
            .into_iter()
            .map(|(f, _)| f)
            .filter(|f| values[f.0] >= values[raw])
            .collect();
        if n1.len() > 1 || n2.len() > 1 {
            return false;
        }
        match m.pair_of(id) {
            Some(up) => {
                if n1 != vec![up] {
                    return false;
                }
            }
            None => {
                if !n1.is_empty() {
                    return false;
                }
            }
        }
        match m.rev_pair_of(id) {
            Some(down) => {
                if n2 != vec![down] {
                    return false;
                }
            }
            None => {
                if !n2.is_empty() {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn edge_by_vertices(c: &OrientedComplex2, pair: [usize; 2]) -> CellId {
        (0..c.edge_count())
            .find(|&e| c.edge_vertices(e) == pair)
            .map(|e| c.edge_id(e))
            .unwrap()
    }

    #[test]
    fn empty_matching_is_acyclic_and_all_critical() {
        let c = corpus::sphere_tetra();
        let m = MorseMatching::for_complex(&c);
        assert!(m.is_acyclic(&c));
        let (counts, _) = m.critical_cells(&c);
        assert_eq!(counts.c, [4, 6, 4]);
        assert_eq!(counts.euler(), c.euler_characteristic());
    }

    #[test]
    fn head_to_tail_cycle_detected() {
        let c = corpus::single_triangle();
        let mut m = MorseMatching::for_complex(&c);
        // Orient the boundary cycle: each vertex matched into the edge
        // leading to the next vertex.
        m.add_pair(c.vertex_id(1), edge_by_vertices(&c, [0, 1]));
        m.add_pair(c.vertex_id(2), edge_by_vertices(&c, [1, 2]));
        m.add_pair(c.vertex_id(0), edge_by_vertices(&c, [0, 2]));
        assert!(!m.is_acyclic(&c));
    }

    #[test]
    fn single_pair_morse_function() {
        let c = corpus::single_triangle();
        let mut m = MorseMatching::for_complex(&c);
        let e01 = edge_by_vertices(&c, [0, 1]);
        m.add_pair(c.vertex_id(0), e01);
        let values = morse_function_from_matching(&c, &m).unwrap();
        assert!(values[e01.0] <= values[c.vertex_id(0).0]);
        assert!(verify_discrete_morse_function(&c, &m, &values));
    }

    #[test]
    fn empty_matching_morse_function_is_dimension_monotone() {
        let c = corpus::sphere_tetra();
        let m = MorseMatching::for_complex(&c);
        let values = morse_function_from_matching(&c, &m).unwrap();
        for raw in 0..c.cell_count() {
            let id = CellId(raw);
            for (face, _) in c.faces(id) {
                assert!(values[face.0] < values[raw]);
            }
        }
        assert!(verify_discrete_morse_function(&c, &m, &values));
    }

    #[test]
    fn trace_adjacent_critical_pair() {
        let c = corpus::single_triangle();
        let m = MorseMatching::for_complex(&c);
        let gamma = edge_by_vertices(&c, [0, 1]);
        let t = c.triangle_id(0);
        let (path, source) = trace_inverse_path(&c, &m, gamma, t).unwrap();
        assert_eq!(path.cells, vec![gamma]);
        assert_eq!(source, PathSource::Critical(t));
        assert_eq!(path.multiplicity, c.incidence(t, gamma).unwrap());
    }

    #[test]
    fn trace_through_matched_strip() {
        // Strip of triangles [0,1,2], [1,2,3], [2,3,4]; match the middle
        // one into the chain and trace backward across it.
        let c = OrientedComplex2::from_triangles(5, &[[0, 1, 2], [1, 2, 3], [2, 3, 4]]).unwrap();
        let mut m = MorseMatching::for_complex(&c);
        let t0 = c.triangle_id(0);
        let t1 = c.triangle_id(1);
        let t2 = c.triangle_id(2);
        let e12 = edge_by_vertices(&c, [1, 2]);
        let e23 = edge_by_vertices(&c, [2, 3]);
        let e34 = edge_by_vertices(&c, [3, 4]);
        m.add_pair(e12, t1); // flow t0 -> t1
        m.add_pair(e23, t2); // flow t1 -> t2
        let (path, source) = trace_inverse_path(&c, &m, e34, t2).unwrap();
        assert_eq!(source, PathSource::Critical(t0));
        assert_eq!(path.interior_triangles(&c), 2);
        assert_eq!(path.cells, vec![e34, t2, e23, t1, e12]);
    }

    #[test]
    fn torus_critical_edges_trace_to_the_critical_triangle() {
        let c = corpus::torus_7();
        let out = crate::frameflow::main_frame(&c).unwrap();
        let (counts, critical) = out.matching.critical_cells(&c);
        assert_eq!(counts.c, [1, 2, 1]);
        let king = critical[2][0];
        for &gamma in &critical[1] {
            for t in c.cofaces(gamma) {
                let (_, source) = trace_inverse_path(&c, &out.matching, gamma, t).unwrap();
                assert_eq!(source, PathSource::Critical(king));
            }
        }
    }

    #[test]
    fn trace_multiplicities_sum_to_operator_entries() {
        // Every path into a critical edge arrives through one of its two
        // cofaces, and each arrival chain is unique, so the two trace
        // multiplicities add up to the boundary operator entry.
        for c in [
            corpus::projective_plane(),
            corpus::torus_7(),
            corpus::klein_bottle(),
        ] {
            let m = crate::frameflow::main_frame(&c).unwrap().matching;
            let (op, _) = crate::morse_boundary::calc_bdry_op(&c, &m).unwrap();
            let (_, critical) = m.critical_cells(&c);
            for (i, &gamma) in critical[1].iter().enumerate() {
                for (j, &beta) in critical[2].iter().enumerate() {
                    let mut total = 0i64;
                    for t in c.cofaces(gamma) {
                        let (path, source) = trace_inverse_path(&c, &m, gamma, t).unwrap();
                        if source == PathSource::Critical(beta) {
                            total += path.multiplicity;
                        }
                    }
                    assert_eq!(num_bigint::BigInt::from(total), *op.d2.get(i, j));
                }
            }
        }
    }

    #[test]
    fn trace_rejects_matched_coface_start() {
        let c = corpus::single_triangle();
        let mut m = MorseMatching::for_complex(&c);
        let gamma = edge_by_vertices(&c, [0, 1]);
        let t = c.triangle_id(0);
        m.add_pair(gamma, t);
        assert!(trace_inverse_path(&c, &m, gamma, t).is_err());
    }
}
