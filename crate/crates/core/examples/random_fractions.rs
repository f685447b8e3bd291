// Fraction of random Hilbert–Schmidt states detected by two criteria
// families as their free parameter grows.
//
// `cargo run --release --example random_fractions`

use separability::scan::{self, Experiment, ScanConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = ScanConfig::new(Experiment::Random);
    config.dims = vec![2, 3];
    config.ts = vec![0.0, 1.0, 5.0];
    config.hs = vec![0.0, 1.0, 5.0];
    config.samples = 300;
    println!("{:>3} {:>9} {:>6} {:>8}", "d", "family", "param", "fraction");
    for row in scan::random_scan(&config)? {
        println!("{:>3} {:>9?} {:>6} {:>8.3}", row.dim, row.criterion, row.param, row.fraction);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
