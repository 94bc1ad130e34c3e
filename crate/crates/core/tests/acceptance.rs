//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Run with `cargo test -p morsehom --test acceptance -- --nocapture`.

use std::time::Instant;

use morsehom::algebra::{
    homology_from_chain, homology_with_coefficients, mod_m_rank, smith_normal_form, AbelianGroup,
    IntMatrix,
};
use morsehom::cancellation::{king_flow, random_dgvf, CancelEvent, SplitMix64};
use morsehom::complex::OrientedComplex2;
use morsehom::corpus;
use morsehom::dgvf::MorseMatching;
use morsehom::frameflow::main_frame;
use morsehom::morse_boundary::{boundary_operator_via_paths, calc_bdry_op};
use morsehom::oracle::{oracle_betti_mod_p, oracle_homology, oracle_morse_homology};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn pass(n: usize, name: &str) {
    println!("ACCEPTANCE {n} ({name}): PASS");
}

/// Criterion 1: the frame-based field is optimal on the whole corpus,
/// with critical counts matching the oracle Betti numbers exactly, in
/// under a second total.
#[test]
fn criterion_1_optimality() {
    let corpus = corpus::corpus();
    let expected: Vec<[usize; 3]> = corpus
        .iter()
        .map(|(_, c)| oracle_betti_mod_p(c, 2))
        .collect();
    let t0 = Instant::now();
    let mut results = Vec::new();
    for (_, c) in &corpus {
        let out = main_frame(c).unwrap();
        let (counts, _) = out.matching.critical_cells(c);
        results.push(counts.c);
    }
    let elapsed = t0.elapsed();
    for (((name, _), counts), betti) in corpus.iter().zip(&results).zip(&expected) {
        assert_eq!(
            counts, betti,
            "{name}: critical counts differ from Betti numbers"
        );
    }
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "corpus optimality took {elapsed:?}"
    );
    pass(1, "optimality");
}

/// Criterion 2: torsion of the Klein bottle and projective plane, via
/// the Morse pipeline, the full-complex oracle, universal coefficients,
/// and mod-m matrix ranks.
#[test]
fn criterion_2_torsion() {
    let klein = corpus::klein_bottle();
    let run = morsehom::pipeline::compute_homology(&klein, &AbelianGroup::integers()).unwrap();
    assert_eq!(run.homology.groups[1].to_string(), "Z + Z_2");
    assert_eq!(oracle_homology(&klein).groups, run.homology.groups);
    let mod2 = homology_with_coefficients(&run.integral, &AbelianGroup::cyclic(2)).unwrap();
    assert_eq!(mod2.summand_counts(), [1, 2, 1]);
    assert_eq!(oracle_betti_mod_p(&klein, 2), [1, 2, 1]);

    let rp2 = corpus::projective_plane();
    let run = morsehom::pipeline::compute_homology(&rp2, &AbelianGroup::integers()).unwrap();
    assert_eq!(run.homology.groups[1].to_string(), "Z_2");
    assert_eq!(oracle_homology(&rp2).groups, run.homology.groups);
    let mod3 = homology_with_coefficients(&run.integral, &AbelianGroup::cyclic(3)).unwrap();
    assert!(mod3.groups[1].is_trivial());
    assert_eq!(oracle_betti_mod_p(&rp2, 3), [1, 0, 0]);
    pass(2, "torsion");
}

fn fields_under_test(c: &OrientedComplex2, seeds: u64) -> Vec<MorseMatching> {
    let mut fields = vec![main_frame(c).unwrap().matching];
    for seed in 0..seeds {
        fields.push(random_dgvf(c, seed));
    }
    fields
}

/// Criterion 3: Morse homology equals simplicial homology for the
/// frame-based field and 20 random fields on every corpus mesh.
#[test]
fn criterion_3_morse_equals_simplicial() {
    for (name, c) in corpus::corpus() {
        let reference = oracle_homology(&c);
        for (i, m) in fields_under_test(&c, 20).into_iter().enumerate() {
            let (op, _) = calc_bdry_op(&c, &m).unwrap();
            let h = homology_from_chain(&op.d1, &op.d2).unwrap();
            assert_eq!(h.groups, reference.groups, "{name}, field {i}");
        }
    }
    pass(3, "morse homology equals simplicial homology");
}

/// Criterion 4: the dynamic program agrees entry by entry with the
/// exhaustive gradient-path enumeration.
#[test]
fn criterion_4_boundary_operator_equivalence() {
    for (name, c) in corpus::corpus() {
        assert!(c.cell_count() <= 500);
        for (i, m) in fields_under_test(&c, 10).into_iter().enumerate() {
            let (op, _) = calc_bdry_op(&c, &m).unwrap();
            let by_paths = boundary_operator_via_paths(&c, &m);
            assert_eq!(op.d1, by_paths.d1, "{name}, field {i}, dimension 1");
            assert_eq!(op.d2, by_paths.d2, "{name}, field {i}, dimension 2");
        }
    }
    pass(4, "boundary operator equivalence");
}

/// Criterion 5: the Morse chain law d1 * d2 = 0 for every constructed
/// field, including king-flow outputs.
#[test]
fn criterion_5_chain_law() {
    for (name, c) in corpus::corpus() {
        let mut fields = fields_under_test(&c, 20);
        for seed in 0..5 {
            let m = random_dgvf(&c, seed);
            fields.push(king_flow(&c, m, false, None).unwrap().matching);
        }
        for (i, m) in fields.into_iter().enumerate() {
            let (op, _) = calc_bdry_op(&c, &m).unwrap();
            assert!(op.d1.mul(&op.d2).is_zero(), "{name}, field {i}");
        }
    }
    pass(5, "chain law");
}

/// Criterion 6: 100 seeded random fields per corpus manifold reduce to
/// the optimal counts under king flow with acyclicity checked after
/// every cancellation. Failures replay: the panic names the mesh and
/// seed and dumps the cancellation trace.
#[test]
fn criterion_6_pseudo_optimality() {
    for (name, c) in corpus::corpus() {
        let expected = oracle_betti_mod_p(&c, 2);
        for seed in 0..100u64 {
            let m = random_dgvf(&c, seed);
            let mut trace: Vec<CancelEvent> = Vec::new();
            let mut log = |ev: &CancelEvent| trace.push(*ev);
            let outcome = match king_flow(&c, m, true, Some(&mut log)) {
                Ok(o) => o,
                Err(e) => panic!("{name}, seed {seed}: {e}\ntrace: {trace:?}"),
            };
            let (counts, _) = outcome.matching.critical_cells(&c);
            assert!(
                counts.c == expected && outcome.matching.is_acyclic(&c),
                "{name}, seed {seed}: reached {:?}, expected {expected:?}\ntrace: {trace:?}",
                counts.c,
            );
        }
    }
    pass(6, "pseudo-optimality 100/100");
}

/// Criterion 7: instrumented operation counts for the field construction
/// plus the boundary-operator program grow linearly (within a factor 2)
/// in the cell count over five subdivision levels of the sphere and the
/// torus, well under the time budget.
#[test]
fn criterion_7_near_linearity() {
    let t0 = Instant::now();
    for (name, base) in [
        ("sphere", corpus::sphere_icosa()),
        ("torus", corpus::torus_7()),
    ] {
        let mut mesh = base;
        let mut prev: Option<(usize, u64)> = None;
        for level in 0..=5 {
            let out = main_frame(&mesh).unwrap();
            let (_, dp_ops) = calc_bdry_op(&mesh, &out.matching).unwrap();
            let ops = out.counters.hasse_visits + dp_ops;
            let cells = mesh.cell_count();
            if let Some((prev_cells, prev_ops)) = prev {
                let cell_ratio = cells as f64 / prev_cells as f64;
                let op_ratio = ops as f64 / prev_ops as f64;
                assert!(
                    op_ratio <= 2.0 * cell_ratio,
                    "{name} level {level}: op ratio {op_ratio:.3} vs cell ratio {cell_ratio:.3}"
                );
            }
            prev = Some((cells, ops));
            if level < 5 {
                mesh = corpus::subdivide(&mesh);
            }
        }
        assert!(prev.unwrap().0 > 40_000, "{name} should reach ~1e5 cells");
    }
    let elapsed = t0.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "near-linearity run took {elapsed:?}"
    );
    pass(7, "near-linearity");
}

/// Criterion 8: Smith Normal Form soundness on 1,000 random matrices:
/// U*A*V = S with unimodular transforms, the divisibility chain holds,
/// and the diagonal products match the determinantal divisors computed
/// by an independent minor-gcd oracle.
#[test]
fn criterion_8_snf_soundness() {
    let mut rng = SplitMix64::new(0x5eed);
    for case in 0..1000 {
        let rows = 1 + rng.below(8);
        let cols = 1 + rng.below(8);
        let mut m = IntMatrix::zeros(rows, cols);
        let mut raw = vec![vec![0i64; cols]; rows];
        for (i, row) in raw.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = rng.below(19) as i64 - 9;
                m.set(i, j, BigInt::from(*x));
            }
        }
        let snf = smith_normal_form(&m);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.s, "case {case}: U*A*V != S");
        assert_eq!(
            snf.u.determinant().abs(),
            BigInt::one(),
            "case {case}: U not unimodular"
        );
        assert_eq!(
            snf.v.determinant().abs(),
            BigInt::one(),
            "case {case}: V not unimodular"
        );
        for w in snf.diagonal.windows(2) {
            assert!(
                (&w[1] % &w[0]).is_zero(),
                "case {case}: divisibility chain broken"
            );
        }
        // d1 * ... * dk equals the gcd of all k x k minors.
        let mut product = BigInt::one();
        for (k, d) in snf.diagonal.iter().enumerate() {
            product *= d;
            let divisor = determinantal_divisor(&raw, k + 1);
            assert_eq!(product, divisor, "case {case}: determinantal divisor {k}");
        }
        if snf.rank < rows.min(cols) {
            assert!(
                determinantal_divisor(&raw, snf.rank + 1).is_zero(),
                "case {case}: rank too small"
            );
        }
    }
    pass(8, "snf soundness");
}

/// gcd of all k x k minors, by brute-force enumeration over an i128
/// fraction-free elimination. Independent of the SNF code path.
fn determinantal_divisor(m: &[Vec<i64>], k: usize) -> BigInt {
    let rows = m.len();
    let cols = m[0].len();
    if k > rows.min(cols) {
        return BigInt::zero();
    }
    let mut gcd = 0i128;
    let row_sets = combinations(rows, k);
    let col_sets = combinations(cols, k);
    'outer: for rs in &row_sets {
        for cs in &col_sets {
            let mut sub = vec![vec![0i128; k]; k];
            for (a, &i) in rs.iter().enumerate() {
                for (b, &j) in cs.iter().enumerate() {
                    sub[a][b] = m[i][j] as i128;
                }
            }
            gcd = gcd_i128(gcd, naive_det(&mut sub));
            if gcd == 1 {
                break 'outer;
            }
        }
    }
    BigInt::from(gcd.abs())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn naive_det(m: &mut [Vec<i128>]) -> i128 {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Sanity net around the oracle itself: the path-enumerated Morse
/// homology matches the plain simplicial one for random fields.
#[test]
fn oracle_morse_homology_consistency() {
    for (name, c) in corpus::corpus() {
        let reference = oracle_homology(&c);
        for seed in 0..3u64 {
            let m = random_dgvf(&c, seed);
            let h = oracle_morse_homology(&c, &m, 500).unwrap();
            assert_eq!(h.groups, reference.groups, "{name} seed {seed}");
        }
    }
}
