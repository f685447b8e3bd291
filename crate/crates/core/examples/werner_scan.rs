// Sweep Werner states and write the scan as CSV to stdout.
//
// `cargo run --example werner_scan`

use separability::scan::{self, Experiment, Grid, ScanConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = ScanConfig::new(Experiment::Werner);
    config.dims = vec![2, 3];
    config.phi_grid = Grid::new(-1.0, 1.0, 9)?;
    config.ts = vec![1.0];
    print!("{}", scan::run_scan(&config)?);

    let rows = scan::werner_scan(&config)?;
    let flagged = rows.iter().filter(|r| r.verdict.is_entangled()).count();
    println!("# {flagged} of {} rows flagged", rows.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
