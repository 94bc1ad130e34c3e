use morsehom::algebra::{homology_with_coefficients, AbelianGroup};
use morsehom::corpus::{klein_bottle, projective_plane};
use morsehom::pipeline::compute_homology;

fn main() {
    let complex = klein_bottle();
    let run = compute_homology(&complex, &AbelianGroup::integers()).unwrap();

    // Integral homology sees the torsion class.
    assert_eq!(run.integral.groups[1].to_string(), "Z + Z_2");
    assert_eq!(run.integral.betti(), [1, 1, 0]);

    // Over Z_2 the torsion contributes in two dimensions.
    let mod2 = homology_with_coefficients(&run.integral, &AbelianGroup::cyclic(2)).unwrap();
    assert_eq!(mod2.summand_counts(), [1, 2, 1]);

    // The projective plane's H1 is pure 2-torsion, so a coprime modulus
    // wipes it out.
    let rp2 = compute_homology(&projective_plane(), &AbelianGroup::integers()).unwrap();
    assert_eq!(rp2.integral.groups[1].to_string(), "Z_2");
    let mod3 = homology_with_coefficients(&rp2.integral, &AbelianGroup::cyclic(3)).unwrap();
    assert!(mod3.groups[1].is_trivial());

    // Any finitely generated group in canonical form works.
    let mixed = AbelianGroup::parse("Z^2+Z_2+Z_4").unwrap();
    let over_mixed = homology_with_coefficients(&run.integral, &mixed).unwrap();
    println!(
        "Klein bottle H1 with mixed coefficients: {}",
        over_mixed.groups[1]
    );
}
