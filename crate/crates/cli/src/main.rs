//! Command-line front end: parse a mesh, run the homology pipeline, run
//! pseudo-optimality experiments, benchmark subdivision scaling, or dump
//! a gradient field.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 property
//! violation.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use morsehom::algebra::{homology_from_chain, homology_with_coefficients, AbelianGroup};
use morsehom::cancellation::{king_flow, random_dgvf, CancelEvent};
use morsehom::complex::{ManifoldKind, MeshFormat, OrientedComplex2};
use morsehom::corpus::subdivide;
use morsehom::frameflow::{main_frame, main_frame_with_trace, ExpansionEvent};
use morsehom::morse_boundary::calc_bdry_op;

use report::*;

#[derive(Parser)]
#[command(
    name = "morsehom",
    version,
    about = "Homology of triangulated 2-manifolds via discrete Morse theory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute homology groups (with torsion) of a mesh
    Homology {
        path: PathBuf,
        /// Input format (off|tri); inferred from the extension by default
        #[arg(long)]
        format: Option<String>,
        /// Coefficient group, e.g. Z, Z_2, Z^2+Z_2+Z_4
        #[arg(long, default_value = "Z")]
        coefficients: String,
        /// Write the JSON report to a file instead of stdout
        #[arg(long)]
        json: Option<PathBuf>,
        /// Log every frame expansion to stderr (JSON lines)
        #[arg(long)]
        trace: bool,
    },
    /// Reduce seeded random gradient fields to optimal ones by
    /// critical-cell cancellations and verify the counts
    Pseudo {
        path: PathBuf,
        #[arg(long)]
        format: Option<String>,
        /// Number of seeds to run
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        /// First seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Log every cancellation to stderr (JSON lines)
        #[arg(long)]
        trace: bool,
    },
    /// Measure field construction and boundary-operator scaling across
    /// 1-to-4 subdivision levels
    Bench {
        path: PathBuf,
        #[arg(long)]
        format: Option<String>,
        /// Subdivision levels to run (level 0 is the input mesh)
        #[arg(long, default_value_t = 4)]
        levels: u32,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Dump a gradient field: reoriented Hasse graph as DOT, critical
    /// cells as JSON
    DgvfDump {
        path: PathBuf,
        #[arg(long)]
        format: Option<String>,
        /// Use a seeded random field instead of the optimal one
        #[arg(long)]
        seed: Option<u64>,
        /// Write DOT here (stdout by default)
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the critical-cell JSON here
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        trace: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn property(message: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Homology {
            path,
            format,
            coefficients,
            json,
            trace,
        } => cmd_homology(
            &path,
            format.as_deref(),
            &coefficients,
            json.as_deref(),
            trace,
        ),
        Command::Pseudo {
            path,
            format,
            seeds,
            seed,
            json,
            trace,
        } => cmd_pseudo(
            &path,
            format.as_deref(),
            seeds,
            seed,
            json.as_deref(),
            trace,
        ),
        Command::Bench {
            path,
            format,
            levels,
            json,
        } => cmd_bench(&path, format.as_deref(), levels, json.as_deref()),
        Command::DgvfDump {
            path,
            format,
            seed,
            dot,
            json,
            trace,
        } => cmd_dgvf_dump(
            &path,
            format.as_deref(),
            seed,
            dot.as_deref(),
            json.as_deref(),
            trace,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn resolve_format(path: &Path, flag: Option<&str>) -> Result<MeshFormat, Failure> {
    if let Some(f) = flag {
        return f.parse().map_err(|e: String| Failure {
            code: 1,
            message: e,
        });
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("off") | Some("OFF") => Ok(MeshFormat::Off),
        Some("tri") | Some("TRI") => Ok(MeshFormat::Tri),
        _ => Err(Failure {
            code: 1,
            message: format!(
                "cannot infer format of `{}`; pass --format off|tri",
                path.display()
            ),
        }),
    }
}

fn load_mesh(path: &Path, format: MeshFormat) -> Result<OrientedComplex2, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    OrientedComplex2::parse(&text, format)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn mesh_info(path: &Path, format: MeshFormat, c: &OrientedComplex2) -> Result<MeshInfo, Failure> {
    let report = c
        .validate_manifold()
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let (_, components) = c.connected_components();
    Ok(MeshInfo {
        path: path.display().to_string(),
        format: match format {
            MeshFormat::Off => "off".into(),
            MeshFormat::Tri => "tri".into(),
        },
        vertices: c.vertex_count(),
        edges: c.edge_count(),
        triangles: c.triangle_count(),
        cells: c.cell_count(),
        euler_characteristic: c.euler_characteristic(),
        manifold: match report.kind {
            ManifoldKind::Closed => "closed".into(),
            ManifoldKind::WithBoundary => "with-boundary".into(),
        },
        components,
    })
}

fn emit_report<T: serde::Serialize>(report: &T, json: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| Failure::input(format!("serializing report: {e}")))?;
    match json {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_homology(
    path: &Path,
    format: Option<&str>,
    coefficients: &str,
    json: Option<&Path>,
    trace: bool,
) -> Result<(), Failure> {
    let format = resolve_format(path, format)?;
    let group = AbelianGroup::parse(coefficients).map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })?;

    let t0 = Instant::now();
    let c = load_mesh(path, format)?;
    let parse_ms = ms_since(t0);
    let mesh = mesh_info(path, format, &c)?;

    let t1 = Instant::now();
    let field = if trace {
        let mut log = |ev: &ExpansionEvent| {
            eprintln!(
                "{}",
                serde_json::json!({
                    "lower": ev.lower.0,
                    "upper": ev.upper.0,
                    "frame_vertices": ev.frame_vertices,
                    "frame_edges": ev.frame_edges,
                })
            );
        };
        main_frame_with_trace(&c, &mut log)
    } else {
        main_frame(&c)
    }
    .map_err(|e| Failure::input(e.to_string()))?;
    let field_ms = ms_since(t1);
    let (counts, _) = field.matching.critical_cells(&c);

    let t2 = Instant::now();
    let (op, boundary_ops) =
        calc_bdry_op(&c, &field.matching).map_err(|e| Failure::input(e.to_string()))?;
    let boundary_ms = ms_since(t2);

    let t3 = Instant::now();
    let integral =
        homology_from_chain(&op.d1, &op.d2).map_err(|e| Failure::input(e.to_string()))?;
    let homology = if group == AbelianGroup::integers() {
        integral
    } else {
        homology_with_coefficients(&integral, &group).map_err(|e| Failure::input(e.to_string()))?
    };
    let reduce_ms = ms_since(t3);

    let betti = if group == AbelianGroup::integers() {
        homology.betti()
    } else {
        homology.summand_counts()
    };
    let report = HomologyReport {
        mesh,
        morse: MorseInfo {
            critical_counts: counts.c,
            upsilon: counts.upsilon(),
        },
        homology: HomologySection {
            coefficients: group.to_string(),
            groups: [0, 1, 2].map(|q| homology.groups[q].to_string()),
            betti,
        },
        timing_ms: TimingMs {
            parse: parse_ms,
            field: field_ms,
            boundary: boundary_ms,
            reduce: reduce_ms,
        },
        operations: OperationCounts {
            frame: field.counters.hasse_visits,
            boundary: boundary_ops,
        },
    };
    emit_report(&report, json)
}

fn cmd_pseudo(
    path: &Path,
    format: Option<&str>,
    seeds: u64,
    seed0: u64,
    json: Option<&Path>,
    trace: bool,
) -> Result<(), Failure> {
    let format = resolve_format(path, format)?;
    let c = load_mesh(path, format)?;
    let mesh = mesh_info(path, format, &c)?;

    // The optimal counts from the frame construction are the reference
    // the reduced fields must reach.
    let optimal = main_frame(&c).map_err(|e| Failure::input(e.to_string()))?;
    let (expected, _) = optimal.matching.critical_cells(&c);

    let mut runs = Vec::with_capacity(seeds as usize);
    let mut passed = 0u64;
    for seed in seed0..seed0 + seeds {
        let m = random_dgvf(&c, seed);
        let mut log = |ev: &CancelEvent| {
            eprintln!(
                "{}",
                serde_json::json!({
                    "seed": seed,
                    "step": ev.step,
                    "lower": ev.lower.0,
                    "upper": ev.upper.0,
                    "upsilon_before": ev.upsilon_before,
                    "upsilon_after": ev.upsilon_after,
                })
            );
        };
        let outcome = king_flow(&c, m, true, trace.then_some(&mut log as &mut dyn FnMut(&_)))
            .map_err(|e| Failure::property(format!("seed {seed}: {e}")))?;
        let (counts, _) = outcome.matching.critical_cells(&c);
        let ok = counts.c == expected.c && outcome.matching.is_acyclic(&c);
        passed += ok as u64;
        runs.push(PseudoRun {
            seed,
            upsilon_before: outcome.upsilon_before,
            upsilon_after: outcome.upsilon_after,
            cancellations: outcome.cancellations,
            counts: counts.c,
            ok,
        });
    }
    let failed = seeds - passed;
    let report = PseudoReport {
        mesh,
        seeds,
        seed0,
        expected_counts: expected.c,
        runs,
        passed,
        failed,
    };
    emit_report(&report, json)?;
    if failed > 0 {
        return Err(Failure::property(format!(
            "{failed}/{seeds} seeds failed to reach optimality"
        )));
    }
    Ok(())
}

fn cmd_bench(
    path: &Path,
    format: Option<&str>,
    levels: u32,
    json: Option<&Path>,
) -> Result<(), Failure> {
    if levels > 6 {
        return Err(Failure {
            code: 1,
            message: "at most 6 subdivision levels".into(),
        });
    }
    let format = resolve_format(path, format)?;
    let mut c = load_mesh(path, format)?;
    let mesh = mesh_info(path, format, &c)?;

    let mut rows: Vec<BenchLevel> = Vec::new();
    for level in 0..=levels {
        let t0 = Instant::now();
        let field = main_frame(&c).map_err(|e| Failure::input(e.to_string()))?;
        let (_, boundary_ops) =
            calc_bdry_op(&c, &field.matching).map_err(|e| Failure::input(e.to_string()))?;
        let wall_ms = ms_since(t0);
        let prev = rows.last();
        let cells = c.cell_count();
        let ops = field.counters.hasse_visits + boundary_ops;
        rows.push(BenchLevel {
            level,
            cells,
            frame_ops: field.counters.hasse_visits,
            boundary_ops,
            wall_ms,
            cell_ratio: prev.map(|p| cells as f64 / p.cells as f64),
            op_ratio: prev.map(|p| ops as f64 / (p.frame_ops + p.boundary_ops) as f64),
        });
        if level < levels {
            c = subdivide(&c);
        }
    }
    for row in &rows {
        println!(
            "level {}: cells {:>8}  frame_ops {:>9}  boundary_ops {:>9}  wall {:>9.3} ms  cell_ratio {}  op_ratio {}",
            row.level,
            row.cells,
            row.frame_ops,
            row.boundary_ops,
            row.wall_ms,
            row.cell_ratio.map_or("-".into(), |r| format!("{r:.3}")),
            row.op_ratio.map_or("-".into(), |r| format!("{r:.3}")),
        );
    }
    let report = BenchReport { mesh, levels: rows };
    if json.is_some() {
        emit_report(&report, json)?;
    }
    Ok(())
}

fn cmd_dgvf_dump(
    path: &Path,
    format: Option<&str>,
    seed: Option<u64>,
    dot: Option<&Path>,
    json: Option<&Path>,
    trace: bool,
) -> Result<(), Failure> {
    let format = resolve_format(path, format)?;
    let c = load_mesh(path, format)?;
    mesh_info(path, format, &c)?;
    let matching = match seed {
        Some(s) => random_dgvf(&c, s),
        None => {
            let field = if trace {
                let mut log = |ev: &ExpansionEvent| {
                    eprintln!(
                        "{}",
                        serde_json::json!({
                            "lower": ev.lower.0,
                            "upper": ev.upper.0,
                            "frame_vertices": ev.frame_vertices,
                            "frame_edges": ev.frame_edges,
                        })
                    );
                };
                main_frame_with_trace(&c, &mut log)
            } else {
                main_frame(&c)
            }
            .map_err(|e| Failure::input(e.to_string()))?;
            field.matching
        }
    };
    let dot_text = matching.to_dot(&c);
    match dot {
        Some(p) => std::fs::write(p, dot_text)
            .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        None => print!("{dot_text}"),
    }
    if let Some(p) = json {
        let value = matching.critical_cells_json(&c);
        let text = serde_json::to_string_pretty(&value)
            .map_err(|e| Failure::input(format!("serializing: {e}")))?;
        std::fs::write(p, text + "\n")
            .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}
