//! Homology of triangulated 2-manifolds in near-linear time.
//!
//! The pipeline designs an optimal discrete gradient vector field with
//! expansion frames, evaluates the Morse boundary operator by dynamic
//! programming over a topologically sorted cell order, and reduces the
//! tiny resulting matrices with an exact Smith Normal Form, so torsion
//! comes out along with the Betti numbers.
//!
//! The examples below are compiled and run as doc-tests and are included
//! verbatim in the book under `book/`.
//!
//! ## Quick start
//!
//! ```rust
#![doc = include_str!("../examples/quickstart.rs")]
//! ```
//!
//! ## Torsion and coefficient groups
//!
//! ```rust
#![doc = include_str!("../examples/coefficients.rs")]
//! ```
//!
//! ## Reducing a random field by cancellations
//!
//! ```rust
#![doc = include_str!("../examples/cancellation_demo.rs")]
//! ```

pub mod algebra;
pub mod cancellation;
pub mod complex;
pub mod corpus;
pub mod dgvf;
pub mod frameflow;
pub mod morse_boundary;
pub mod oracle;
pub mod pipeline;

pub use complex::{CellId, ManifoldKind, MeshError, MeshFormat, OrientedComplex2};
pub use dgvf::{MorseCounts, MorseMatching};
