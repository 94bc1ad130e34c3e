//! Brute-force ground truth used by the test suites: homology straight
//! from the full signed chain complex, and Morse homology rebuilt from
//! exhaustive gradient-path enumeration. No part of the fast pipeline is
//! reused here beyond the Smith Normal Form reducer.

use std::fmt;

use crate::algebra::{homology_from_chain, mod_m_rank, HomologyResult, IntMatrix};
use crate::complex::OrientedComplex2;
use crate::dgvf::MorseMatching;
use crate::morse_boundary::boundary_operator_via_paths;

/// Default cell cap for the exponential path enumeration.
pub const DEFAULT_CELL_CAP: usize = 500;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OracleError {
    /// The complex exceeds the enumeration size cap.
    TooLarge { cells: usize, cap: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { cells, cap } => {
                write!(f, "complex with {cells} cells exceeds oracle cap {cap}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// The signed boundary matrices of the whole complex.
#[derive(Clone, Debug)]
pub struct FullChainComplex {
    /// vertices x edges
    pub d1: IntMatrix,
    /// edges x triangles
    pub d2: IntMatrix,
}

impl FullChainComplex {
    pub fn build(c: &OrientedComplex2) -> FullChainComplex {
        let mut d1 = IntMatrix::zeros(c.vertex_count(), c.edge_count());
        for e in 0..c.edge_count() {
            let [a, b] = c.edge_vertices(e);
            d1.set(b, e, 1.into());
            d1.set(a, e, (-1).into());
        }
        let mut d2 = IntMatrix::zeros(c.edge_count(), c.triangle_count());
        for t in 0..c.triangle_count() {
            for (i, &e) in c.triangle_edges(t).iter().enumerate() {
                d2.set(e, t, if i % 2 == 0 { 1 } else { -1 }.into());
            }
        }
        FullChainComplex { d1, d2 }
    }
}

/// Integral homology of the full chain complex; no Morse theory involved.
pub fn oracle_homology(c: &OrientedComplex2) -> HomologyResult {
    let chain = FullChainComplex::build(c);
    homology_from_chain(&chain.d1, &chain.d2).expect("full chain complex must satisfy d1 * d2 = 0")
}

/// Betti numbers over F_p computed directly from mod-p matrix ranks of the
/// full chain complex. Independent of the universal-coefficient route.
pub fn oracle_betti_mod_p(c: &OrientedComplex2, p: u64) -> [usize; 3] {
    let chain = FullChainComplex::build(c);
    let r1 = mod_m_rank(&chain.d1, p);
    let r2 = mod_m_rank(&chain.d2, p);
    [
        c.vertex_count() - r1,
        c.edge_count() - r1 - r2,
        c.triangle_count() - r2,
    ]
}

/// Morse homology where the boundary operator is assembled purely from
/// exhaustive gradient-path enumeration.
pub fn oracle_morse_homology(
    c: &OrientedComplex2,
    matching: &MorseMatching,
    cap: usize,
) -> Result<HomologyResult, OracleError> {
    if c.cell_count() > cap {
        return Err(OracleError::TooLarge {
            cells: c.cell_count(),
            cap,
        });
    }
    let op = boundary_operator_via_paths(c, matching);
    Ok(homology_from_chain(&op.d1, &op.d2).expect("Morse chain complex must satisfy d1 * d2 = 0"))
}
