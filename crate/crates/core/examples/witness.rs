// Build the witness operator for an entangled state and reuse it on a
// one-parameter family.
//
// `cargo run --example witness`

use separability::criteria::{self, TuplePreset};
use separability::states;
use separability::witness;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let singlet = states::singlet();
    let (a, b) = TuplePreset::Vicente.tuples(2, 2)?;
    let w = witness::build_witness(&singlet, &a, &b)?;
    let report = criteria::theorem1_check(&singlet, &a, &b)?;
    println!("kappa = {:.4}, ||C|| = {:.4}", w.kappa, report.statistic);
    println!("Tr[W rho_singlet] = {:.4}", w.expectation(&singlet)?);
    println!("optimal observables: {} pairs", w.optimal_a.len());

    // The singlet-side Werner states are detected exactly for phi < 0.
    println!("\n  phi    Tr[W rho]");
    for i in 0..=8 {
        let phi = -1.0 + 0.25 * i as f64;
        let value = w.expectation(&states::werner(2, phi)?)?;
        println!("{phi:>5.2}  {value:>9.4}{}", if value < 0.0 { "  detected" } else { "" });
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
