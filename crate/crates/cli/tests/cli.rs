//! End-to-end tests of the binary: real processes over the shipped mesh
//! files, checking reports, traces, exit codes and schema conformance.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_morsehom"))
}

fn meshes() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../meshes")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn klein_bottle_integral_homology() {
    let mesh = meshes().join("klein.tri");
    let report = stdout_json(&run(&["homology", mesh.to_str().unwrap()]));
    assert_eq!(report["homology"]["groups"][1], "Z + Z_2");
    assert_eq!(
        report["morse"]["critical_counts"],
        serde_json::json!([1, 2, 1])
    );
    assert_eq!(report["homology"]["betti"], serde_json::json!([1, 1, 0]));
}

#[test]
fn klein_bottle_mod_two() {
    let mesh = meshes().join("klein.tri");
    let report = stdout_json(&run(&[
        "homology",
        mesh.to_str().unwrap(),
        "--coefficients",
        "Z_2",
    ]));
    assert_eq!(report["homology"]["betti"], serde_json::json!([1, 2, 1]));
}

#[test]
fn sphere_off_homology() {
    let mesh = meshes().join("sphere.off");
    let report = stdout_json(&run(&["homology", mesh.to_str().unwrap()]));
    assert_eq!(
        report["homology"]["groups"],
        serde_json::json!(["Z", "0", "Z"])
    );
    assert_eq!(
        report["morse"]["critical_counts"],
        serde_json::json!([1, 0, 1])
    );
    assert_eq!(report["mesh"]["manifold"], "closed");
}

#[test]
fn projective_plane_mod_three_kills_torsion() {
    let mesh = meshes().join("rp2.tri");
    let report = stdout_json(&run(&[
        "homology",
        mesh.to_str().unwrap(),
        "--coefficients",
        "Z_3",
    ]));
    assert_eq!(report["homology"]["groups"][1], "0");
}

#[test]
fn report_matches_published_schema_shape() {
    // Light-weight conformance: every required key of the published
    // schema is present with the right JSON type.
    let mesh = meshes().join("torus.tri");
    let report = stdout_json(&run(&["homology", mesh.to_str().unwrap()]));
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../schema/homology.schema.json")).unwrap();
    check_required(&schema, &schema, &report);
}

fn check_required(root: &serde_json::Value, schema: &serde_json::Value, value: &serde_json::Value) {
    if let Some(reference) = schema["$ref"].as_str() {
        let path = reference.trim_start_matches("#/").split('/');
        let mut target = root;
        for seg in path {
            target = &target[seg];
        }
        return check_required(root, target, value);
    }
    if let Some(required) = schema["required"].as_array() {
        for key in required {
            let key = key.as_str().unwrap();
            assert!(!value[key].is_null(), "missing required key {key}");
            let subschema = &schema["properties"][key];
            if !subschema.is_null() {
                check_required(root, subschema, &value[key]);
            }
        }
    }
}

#[test]
fn pseudo_runs_all_seeds() {
    let mesh = meshes().join("torus.tri");
    let out = run(&["pseudo", mesh.to_str().unwrap(), "--seeds", "5"]);
    let report = stdout_json(&out);
    assert_eq!(report["passed"], 5);
    assert_eq!(report["failed"], 0);
    assert_eq!(report["expected_counts"], serde_json::json!([1, 2, 1]));
}

#[test]
fn pseudo_trace_emits_cancellation_lines() {
    // Seed 8 gives a suboptimal field on the genus-2 mesh, so king flow
    // has something to cancel and trace.
    let mesh = meshes().join("genus2.tri");
    let out = run(&[
        "pseudo",
        mesh.to_str().unwrap(),
        "--seeds",
        "3",
        "--seed",
        "7",
        "--trace",
    ]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    let mut saw_cancellation = false;
    for line in stderr.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("trace line is JSON");
        assert!(v["upsilon_before"].as_u64() >= v["upsilon_after"].as_u64());
        saw_cancellation = true;
    }
    assert!(saw_cancellation);
}

#[test]
fn bench_scales_linearly() {
    let mesh = meshes().join("tetra.off");
    let tmp = std::env::temp_dir().join("morsehom-bench-test.json");
    let out = run(&[
        "bench",
        mesh.to_str().unwrap(),
        "--levels",
        "3",
        "--json",
        tmp.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&tmp).unwrap()).unwrap();
    let levels = report["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    for row in &levels[1..] {
        let cell_ratio = row["cell_ratio"].as_f64().unwrap();
        let op_ratio = row["op_ratio"].as_f64().unwrap();
        assert!(op_ratio <= 2.0 * cell_ratio);
    }
    std::fs::remove_file(&tmp).ok();
}

#[test]
fn dgvf_dump_writes_dot() {
    let mesh = meshes().join("triangle.tri");
    let out = run(&["dgvf-dump", mesh.to_str().unwrap()]);
    let dot = String::from_utf8_lossy(&out.stdout);
    assert!(dot.starts_with("digraph hasse {"));
    assert!(dot.contains("->"));
}

#[test]
fn dgvf_dump_seeded_json() {
    let mesh = meshes().join("torus.tri");
    let tmp = std::env::temp_dir().join("morsehom-critical.json");
    let out = run(&[
        "dgvf-dump",
        mesh.to_str().unwrap(),
        "--seed",
        "3",
        "--json",
        tmp.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&tmp).unwrap()).unwrap();
    let counts: Vec<u64> = v["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_u64().unwrap())
        .collect();
    // Euler identity on the reported counts.
    assert_eq!(counts[0] as i64 - counts[1] as i64 + counts[2] as i64, 0);
    assert_eq!(v["critical"].as_array().unwrap().len(), 3);
    std::fs::remove_file(&tmp).ok();
}

#[test]
fn exit_codes() {
    // Usage error: unknown subcommand.
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));

    // Usage error: bad coefficient spec.
    let mesh = meshes().join("torus.tri");
    let out = run(&["homology", mesh.to_str().unwrap(), "--coefficients", "Q"]);
    assert_eq!(out.status.code(), Some(1));

    // Input error: missing file.
    let out = run(&["homology", "no-such-file.tri"]);
    assert_eq!(out.status.code(), Some(2));

    // Input error: non-manifold mesh rejected before any work.
    let tmp = std::env::temp_dir().join("morsehom-nonmanifold.tri");
    std::fs::write(&tmp, "0 1 2\n0 1 3\n0 1 4\n").unwrap();
    let out = run(&["pseudo", tmp.to_str().unwrap(), "--seeds", "1"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(&tmp).ok();
}
