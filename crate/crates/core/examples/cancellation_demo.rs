use morsehom::cancellation::{king_flow, random_dgvf};
use morsehom::corpus::genus_2;

fn main() {
    let complex = genus_2();

    // Seed 8 happens to produce a suboptimal field on this surface.
    let field = random_dgvf(&complex, 8);
    let (before, _) = field.critical_cells(&complex);
    assert!(before.upsilon() > 6);

    // Critical-cell cancellations alone reduce it to the optimum.
    let outcome = king_flow(&complex, field, true, None).unwrap();
    let (after, _) = outcome.matching.critical_cells(&complex);
    assert_eq!(after.c, [1, 4, 1]);
    assert!(outcome.matching.is_acyclic(&complex));
    println!(
        "upsilon {} -> {} in {} cancellations",
        outcome.upsilon_before, outcome.upsilon_after, outcome.cancellations
    );
}
