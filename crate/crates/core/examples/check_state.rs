// Evaluate several criteria on a few well-known states.
//
// `cargo run --example check_state`

use separability::criteria::Criterion;
use separability::states::{self, BipartiteState};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let zoo: Vec<(&str, BipartiteState)> = vec![
        ("bell", states::max_entangled(2)?),
        ("werner(3, -0.5)", states::werner(3, -0.5)?),
        ("werner(3, 0.2)", states::werner(3, 0.2)?),
        ("horodecki(0.5, 1)", states::horodecki(0.5, 1.0)?),
        ("upb tiles", states::upb_tiles(1.0)?),
    ];
    let criteria: Vec<Criterion> = ["vicente", "ccnr", "esic", "obs3", "ppt"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_, _>>()?;

    println!("{:<20} {:<16} {:>10} {:>10}  verdict", "state", "criterion", "statistic", "bound");
    for (name, state) in &zoo {
        for c in &criteria {
            let r = c.evaluate(state)?;
            println!(
                "{:<20} {:<16} {:>10.5} {:>10.5}  {}",
                name,
                c.to_string(),
                r.statistic,
                r.bound,
                r.verdict
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
