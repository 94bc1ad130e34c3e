//! The Morse boundary operator.
//!
//! `calc_bdry_op` evaluates the boundary operator of the Morse chain
//! complex by a single dynamic-programming sweep over a topologically
//! sorted cell order: formal sums computed at regular cells are reused by
//! every cell above them, which is what brings the cost down from the
//! exponential path-sum formula to O(upsilon x N).
//!
//! `enumerate_gradient_paths` is the exponential reference: a depth-first
//! enumeration of every gradient path between a pair of critical cells,
//! weighted by co-orientation. It exists to cross-check the dynamic
//! program on small complexes, and to build the oracle boundary operator.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;

use crate::algebra::IntMatrix;
use crate::complex::{CellId, OrientedComplex2};
use crate::dgvf::{FieldError, MorseMatching};

/// Ascending topological order of all cells under the matching-reoriented
/// Hasse graph: for every directed edge, the source appears after the
/// target. Ties broken by cell id, so the order is reproducible.
pub fn topological_sort_cells(
    c: &OrientedComplex2,
    m: &MorseMatching,
) -> Result<Vec<CellId>, FieldError> {
    let n = c.cell_count();
    // preds[u] = cells that must be emitted before u.
    let mut pred_count = vec![0usize; n];
    let mut followers: Vec<Vec<usize>> = vec![Vec::new(); n];
    for raw in 0..n {
        let sigma = CellId(raw);
        for (tau, _) in c.faces(sigma) {
            if m.pair_of(tau) == Some(sigma) {
                // up-edge tau -> sigma: sigma precedes tau
                pred_count[tau.0] += 1;
                followers[sigma.0].push(tau.0);
            } else {
                // down-edge sigma -> tau: tau precedes sigma
                pred_count[raw] += 1;
                followers[tau.0].push(raw);
            }
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&u| pred_count[u] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = ready.pop() {
        order.push(CellId(u));
        for &v in &followers[u] {
            pred_count[v] -= 1;
            if pred_count[v] == 0 {
                ready.push(Reverse(v));
            }
        }
    }
    if order.len() != n {
        return Err(FieldError::CycleDetected);
    }
    Ok(order)
}

/// Coefficient arithmetic for the dynamic program. Only additions and
/// negations occur; machine integers detect overflow and the caller
/// promotes the whole run to arbitrary precision.
pub trait MorseCoeff: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_bigint(&self) -> BigInt;
}

impl MorseCoeff for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        i64::checked_add(*self, *other)
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl MorseCoeff for BigInt {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Sparse formal sum of critical cells; terms sorted by id, no zeros kept.
#[derive(Clone, PartialEq, Debug)]
pub struct FormalSum<C> {
    terms: Vec<(CellId, C)>,
}

impl<C: MorseCoeff> FormalSum<C> {
    pub fn empty() -> FormalSum<C> {
        FormalSum { terms: Vec::new() }
    }

    pub fn singleton(cell: CellId, coeff: C) -> FormalSum<C> {
        if coeff.is_zero() {
            FormalSum::empty()
        } else {
            FormalSum {
                terms: vec![(cell, coeff)],
            }
        }
    }

    pub fn terms(&self) -> &[(CellId, C)] {
        &self.terms
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// self + other * sign, counting merged terms into `ops`.
    fn add_scaled(
        &self,
        other: &FormalSum<C>,
        negate: bool,
        ops: &mut u64,
    ) -> Option<FormalSum<C>> {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            *ops += 1;
            let take_left = j >= other.terms.len()
                || (i < self.terms.len() && self.terms[i].0 <= other.terms[j].0);
            let take_right = i >= self.terms.len()
                || (j < other.terms.len() && other.terms[j].0 <= self.terms[i].0);
            if take_left && take_right {
                let rhs = if negate {
                    other.terms[j].1.neg()
                } else {
                    other.terms[j].1.clone()
                };
                let sum = self.terms[i].1.checked_add(&rhs)?;
                if !sum.is_zero() {
                    out.push((self.terms[i].0, sum));
                }
                i += 1;
                j += 1;
            } else if take_left {
                out.push(self.terms[i].clone());
                i += 1;
            } else {
                let rhs = if negate {
                    other.terms[j].1.neg()
                } else {
                    other.terms[j].1.clone()
                };
                out.push((other.terms[j].0, rhs));
                j += 1;
            }
        }
        Some(FormalSum { terms: out })
    }
}

/// The Morse boundary operator as two integer matrices between the
/// critical chain groups, with the critical cell ids labelling rows and
/// columns.
#[derive(Clone, Debug)]
pub struct MorseBoundaryOperator {
    /// critical 0-cells x critical 1-cells
    pub d1: IntMatrix,
    /// critical 1-cells x critical 2-cells
    pub d2: IntMatrix,
    /// Row/column registries per dimension.
    pub critical: [Vec<CellId>; 3],
}

impl MorseBoundaryOperator {
    /// JSON dump: dense row-major entries with critical-cell id headers.
    pub fn to_json(&self) -> Result<serde_json::Value, FieldError> {
        let matrix_json = |m: &IntMatrix, rows: &[CellId], cols: &[CellId]| {
            let mut entries = Vec::with_capacity(m.rows());
            for i in 0..m.rows() {
                let mut row = Vec::with_capacity(m.cols());
                for j in 0..m.cols() {
                    let v = i64::try_from(m.get(i, j)).map_err(|_| {
                        FieldError::Corrupt("boundary entry exceeds i64 in JSON dump".into())
                    })?;
                    row.push(v);
                }
                entries.push(row);
            }
            Ok::<_, FieldError>(serde_json::json!({
                "rows": rows.iter().map(|c| c.0).collect::<Vec<_>>(),
                "cols": cols.iter().map(|c| c.0).collect::<Vec<_>>(),
                "entries": entries,
            }))
        };
        Ok(serde_json::json!({
            "d1": matrix_json(&self.d1, &self.critical[0], &self.critical[1])?,
            "d2": matrix_json(&self.d2, &self.critical[1], &self.critical[2])?,
        }))
    }
}

/// Evaluates the boundary operator by the three-case recurrence over the
/// ascending cell order, memoizing the formal sum at every cell.
///
/// The formal sum stored at a q-cell lives in the critical q-chain group
/// when the cell is matched upward (it counts flow from the cell to each
/// critical q-cell), and in the critical (q-1)-chain group otherwise (it
/// counts flow leaving through the cell's boundary). The up-step carries
/// the weight -<bd beta, sigma>, matching the co-orientation rule for
/// gradient-path multiplicities.
pub fn calc_bdry_op(
    c: &OrientedComplex2,
    m: &MorseMatching,
) -> Result<(MorseBoundaryOperator, u64), FieldError> {
    let order = topological_sort_cells(c, m)?;
    let mut ops = 0u64;
    match run_dp::<i64>(c, m, &order, &mut ops) {
        Some(op) => Ok((op, ops)),
        None => {
            // Coefficient overflowed machine integers; redo the run over
            // arbitrary precision.
            let mut ops_big = 0u64;
            let op = run_dp::<BigInt>(c, m, &order, &mut ops_big)
                .expect("bigint coefficients cannot overflow");
            Ok((op, ops_big))
        }
    }
}

fn run_dp<C: MorseCoeff>(
    c: &OrientedComplex2,
    m: &MorseMatching,
    order: &[CellId],
    ops: &mut u64,
) -> Option<MorseBoundaryOperator> {
    let n = c.cell_count();
    let mut sums: Vec<FormalSum<C>> = vec![FormalSum::empty(); n];
    for &sigma in order {
        *ops += 1;
        let sum = if c.dim(sigma) == 0 && m.pair_of(sigma).is_none() {
            // Critical vertex: boundary is empty. Applies to the minimum
            // of every connected component.
            FormalSum::empty()
        } else if let Some(beta) = m.pair_of(sigma) {
            // One lower-valued coface: all flow leaves through beta.
            let sign = c.incidence(beta, sigma).expect("pair must be incident");
            let negate = sign > 0; // total factor -<bd beta, sigma>
            FormalSum::empty().add_scaled(&sums[beta.0], negate, ops)?
        } else {
            // Flow leaves through the boundary faces.
            let mut acc = FormalSum::empty();
            for (tau, sign) in c.faces(sigma) {
                *ops += 1;
                if m.is_critical(tau) {
                    let term = FormalSum::singleton(tau, C::one());
                    acc = acc.add_scaled(&term, sign < 0, ops)?;
                } else if matches!(m.pair_of(tau), Some(zeta) if zeta != sigma) {
                    acc = acc.add_scaled(&sums[tau.0], sign < 0, ops)?;
                }
                // Faces matched downward, or matched into sigma itself,
                // carry no outgoing gradient path.
            }
            acc
        };
        sums[sigma.0] = sum;
    }

    let (_, critical) = m.critical_cells(c);
    let index_of = |list: &[CellId]| -> std::collections::HashMap<CellId, usize> {
        list.iter().enumerate().map(|(i, &id)| (id, i)).collect()
    };
    let rows0 = index_of(&critical[0]);
    let rows1 = index_of(&critical[1]);
    let mut d1 = IntMatrix::zeros(critical[0].len(), critical[1].len());
    for (j, &edge) in critical[1].iter().enumerate() {
        for (cell, coeff) in sums[edge.0].terms() {
            d1.set(rows0[cell], j, coeff.to_bigint());
        }
    }
    let mut d2 = IntMatrix::zeros(critical[1].len(), critical[2].len());
    for (j, &tri) in critical[2].iter().enumerate() {
        for (cell, coeff) in sums[tri.0].terms() {
            d2.set(rows1[cell], j, coeff.to_bigint());
        }
    }
    Some(MorseBoundaryOperator { d1, d2, critical })
}

/// Signed count of all gradient paths from the boundary of the critical
/// cell `beta` to the critical cell `alpha` one dimension below, by
/// exhaustive depth-first search. Exponential; test oracle only.
pub fn enumerate_gradient_paths(
    c: &OrientedComplex2,
    m: &MorseMatching,
    beta: CellId,
    alpha: CellId,
) -> i64 {
    assert_eq!(c.dim(beta), c.dim(alpha) + 1, "dimension mismatch");
    assert!(m.is_critical(beta) && m.is_critical(alpha));
    let mut total = 0i64;
    for (sigma, sign) in c.faces(beta) {
        total += sign * dfs_paths(c, m, sigma, alpha);
    }
    total
}

fn dfs_paths(c: &OrientedComplex2, m: &MorseMatching, sigma: CellId, alpha: CellId) -> i64 {
    if sigma == alpha {
        return 1;
    }
    let Some(tau) = m.pair_of(sigma) else {
        return 0;
    };
    let up = c.incidence(tau, sigma).unwrap();
    let mut total = 0i64;
    for (next, down) in c.faces(tau) {
        if next != sigma {
            total += -up * down * dfs_paths(c, m, next, alpha);
        }
    }
    total
}

/// The Morse boundary operator assembled purely from path enumeration.
pub fn boundary_operator_via_paths(
    c: &OrientedComplex2,
    m: &MorseMatching,
) -> MorseBoundaryOperator {
    let (_, critical) = m.critical_cells(c);
    let mut d1 = IntMatrix::zeros(critical[0].len(), critical[1].len());
    for (j, &edge) in critical[1].iter().enumerate() {
        for (i, &v) in critical[0].iter().enumerate() {
            d1.set(i, j, BigInt::from(enumerate_gradient_paths(c, m, edge, v)));
        }
    }
    let mut d2 = IntMatrix::zeros(critical[1].len(), critical[2].len());
    for (j, &tri) in critical[2].iter().enumerate() {
        for (i, &e) in critical[1].iter().enumerate() {
            d2.set(i, j, BigInt::from(enumerate_gradient_paths(c, m, tri, e)));
        }
    }
    MorseBoundaryOperator { d1, d2, critical }
}
