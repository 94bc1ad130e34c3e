//! One-call pipeline: optimal field, Morse boundary operator, Smith
//! Normal Form reduction, optional coefficient change. Shared by the CLI
//! and the integration tests.

use std::fmt;

use crate::algebra::{
    homology_from_chain, homology_with_coefficients, AbelianGroup, AlgebraError, HomologyResult,
};
use crate::complex::{ManifoldReport, MeshError, OrientedComplex2};
use crate::dgvf::{FieldError, MorseCounts, MorseMatching};
use crate::frameflow::main_frame;
use crate::morse_boundary::{calc_bdry_op, MorseBoundaryOperator};

#[derive(Debug)]
pub enum PipelineError {
    Mesh(MeshError),
    Field(FieldError),
    Algebra(AlgebraError),
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Mesh(e) => write!(f, "{e}"),
            PipelineError::Field(e) => write!(f, "{e}"),
            PipelineError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PipelineError {}

impl From<MeshError> for PipelineError {
    fn from(e: MeshError) -> Self {
        PipelineError::Mesh(e)
    }
}

impl From<FieldError> for PipelineError {
    fn from(e: FieldError) -> Self {
        PipelineError::Field(e)
    }
}

impl From<AlgebraError> for PipelineError {
    fn from(e: AlgebraError) -> Self {
        PipelineError::Algebra(e)
    }
}

/// Everything the homology pipeline produces.
pub struct PipelineRun {
    pub manifold: ManifoldReport,
    pub matching: MorseMatching,
    pub morse_counts: MorseCounts,
    pub operator: MorseBoundaryOperator,
    pub integral: HomologyResult,
    pub homology: HomologyResult,
    /// Hasse-edge visits of the field construction.
    pub frame_ops: u64,
    /// Term operations of the boundary-operator dynamic program.
    pub boundary_ops: u64,
}

/// Runs frame flow, the boundary-operator dynamic program and the SNF
/// reduction on a validated complex.
pub fn compute_homology(
    c: &OrientedComplex2,
    coefficients: &AbelianGroup,
) -> Result<PipelineRun, PipelineError> {
    let manifold = c.validate_manifold()?;
    let field = main_frame(c)?;
    let (morse_counts, _) = field.matching.critical_cells(c);
    let (operator, boundary_ops) = calc_bdry_op(c, &field.matching)?;
    let integral = homology_from_chain(&operator.d1, &operator.d2)?;
    let homology = if *coefficients == AbelianGroup::integers() {
        integral.clone()
    } else {
        homology_with_coefficients(&integral, coefficients)?
    };
    Ok(PipelineRun {
        manifold,
        matching: field.matching,
        morse_counts,
        operator,
        integral,
        homology,
        frame_ops: field.counters.hasse_visits,
        boundary_ops,
    })
}
