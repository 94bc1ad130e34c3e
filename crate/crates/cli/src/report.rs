//! Serializable report shapes for the CLI commands. The JSON schemas in
//! `schema/` mirror these structs field for field.

use serde::Serialize;

#[derive(Serialize)]
pub struct MeshInfo {
    pub path: String,
    pub format: String,
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub cells: usize,
    pub euler_characteristic: i64,
    pub manifold: String,
    pub components: usize,
}

#[derive(Serialize)]
pub struct MorseInfo {
    pub critical_counts: [usize; 3],
    pub upsilon: usize,
}

#[derive(Serialize)]
pub struct HomologySection {
    pub coefficients: String,
    pub groups: [String; 3],
    pub betti: [usize; 3],
}

#[derive(Serialize)]
pub struct TimingMs {
    pub parse: f64,
    pub field: f64,
    pub boundary: f64,
    pub reduce: f64,
}

#[derive(Serialize)]
pub struct OperationCounts {
    pub frame: u64,
    pub boundary: u64,
}

#[derive(Serialize)]
pub struct HomologyReport {
    pub mesh: MeshInfo,
    pub morse: MorseInfo,
    pub homology: HomologySection,
    pub timing_ms: TimingMs,
    pub operations: OperationCounts,
}

#[derive(Serialize)]
pub struct PseudoRun {
    pub seed: u64,
    pub upsilon_before: usize,
    pub upsilon_after: usize,
    pub cancellations: u64,
    pub counts: [usize; 3],
    pub ok: bool,
}

#[derive(Serialize)]
pub struct PseudoReport {
    pub mesh: MeshInfo,
    pub seeds: u64,
    pub seed0: u64,
    pub expected_counts: [usize; 3],
    pub runs: Vec<PseudoRun>,
    pub passed: u64,
    pub failed: u64,
}

#[derive(Serialize)]
pub struct BenchLevel {
    pub level: u32,
    pub cells: usize,
    pub frame_ops: u64,
    pub boundary_ops: u64,
    pub wall_ms: f64,
    pub cell_ratio: Option<f64>,
    pub op_ratio: Option<f64>,
}

#[derive(Serialize)]
pub struct BenchReport {
    pub mesh: MeshInfo,
    pub levels: Vec<BenchLevel>,
}
