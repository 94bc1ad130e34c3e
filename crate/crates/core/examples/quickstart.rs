use morsehom::algebra::AbelianGroup;
use morsehom::complex::{MeshFormat, OrientedComplex2};
use morsehom::pipeline::compute_homology;

fn main() {
    // The 7-vertex torus, one triangle per line.
    let mesh = "\
        0 1 3\n0 2 3\n1 2 4\n1 3 4\n2 3 5\n2 4 5\n3 4 6\n\
        3 5 6\n4 5 0\n4 6 0\n5 6 1\n5 0 1\n6 0 2\n6 1 2\n";
    let complex = OrientedComplex2::parse(mesh, MeshFormat::Tri).unwrap();

    let run = compute_homology(&complex, &AbelianGroup::integers()).unwrap();
    assert_eq!(run.morse_counts.c, [1, 2, 1]);
    assert_eq!(run.homology.groups[1].to_string(), "Z^2");
    println!(
        "H0 = {}, H1 = {}, H2 = {}",
        run.homology.groups[0], run.homology.groups[1], run.homology.groups[2]
    );
}
