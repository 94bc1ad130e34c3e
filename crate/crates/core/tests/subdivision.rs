//! The 1-to-4 subdivision preserves topology, so every pipeline answer
//! must be invariant under it — checked against the oracle at the
//! refined scale, where the cell ids, fields and operators are all
//! completely different from the base mesh's.

use morsehom::algebra::homology_from_chain;
use morsehom::cancellation::{king_flow, random_dgvf};
use morsehom::corpus;
use morsehom::frameflow::main_frame;
use morsehom::morse_boundary::calc_bdry_op;
use morsehom::oracle::{oracle_betti_mod_p, oracle_homology};

#[test]
fn pipeline_is_subdivision_invariant() {
    for (name, base) in corpus::corpus() {
        let refined = corpus::subdivide(&base);
        let reference = oracle_homology(&base);
        assert_eq!(
            oracle_homology(&refined).groups,
            reference.groups,
            "{name}: oracle"
        );

        let field = main_frame(&refined).unwrap();
        let (counts, _) = field.matching.critical_cells(&refined);
        assert_eq!(counts.c, oracle_betti_mod_p(&refined, 2), "{name}: counts");

        let (op, _) = calc_bdry_op(&refined, &field.matching).unwrap();
        let h = homology_from_chain(&op.d1, &op.d2).unwrap();
        assert_eq!(h.groups, reference.groups, "{name}: Morse homology");
    }
}

#[test]
fn king_flow_at_refined_scale() {
    for (name, base) in [
        ("klein-bottle", corpus::klein_bottle()),
        ("projective-plane", corpus::projective_plane()),
        ("genus-2", corpus::genus_2()),
        ("mobius-band", corpus::mobius_band(5)),
    ] {
        let refined = corpus::subdivide(&base);
        let expected = oracle_betti_mod_p(&refined, 2);
        for seed in 0..5u64 {
            let m = random_dgvf(&refined, seed);
            let out = king_flow(&refined, m, true, None)
                .unwrap_or_else(|e| panic!("{name} seed {seed}: {e}"));
            let (counts, _) = out.matching.critical_cells(&refined);
            assert_eq!(counts.c, expected, "{name} seed {seed}");
        }
    }
}
