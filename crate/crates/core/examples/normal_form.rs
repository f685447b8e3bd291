// Bring a random state to its filter normal form and compare criteria
// before and after filtering.
//
// `cargo run --example normal_form`

use separability::criteria;
use separability::lft;
use separability::states;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let state = states::random_hs(3, 3, 20240601, 4);
    let nf = lft::normal_form_default(&state)?;
    println!("converged in {} iterations, residual {:.2e}", nf.iterations, nf.residual);
    println!("reduced state A after filtering:\n{:.4}", nf.rho_tilde.reduced_a().map(|z| z.re));

    let before = criteria::observation1_check(&state, 0.0, 0.0)?;
    let after = lft::observation3_from_normal_form(&nf, 0.0, 0.0)?;
    println!("unfiltered:  {:.4} vs bound {:.4} -> {}", before.statistic, before.bound, before.verdict);
    println!("filtered:    {:.4} vs bound {:.4} -> {}", after.statistic, after.bound, after.verdict);

    let (ra, rb) = lft::local_ranks(&states::werner(3, -0.5)?)?;
    println!("werner local ranks: ({ra}, {rb})");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
