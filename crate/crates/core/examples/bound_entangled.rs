// PPT entangled families: noise thresholds for the UPB state, Horodecki
// detection counts, and chessboard detection rates.
//
// `cargo run --example bound_entangled`

use separability::scan::{self, Experiment, Grid, ScanConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ts = vec![3f64.sqrt() / 2.0, 1.2, 1.5, 3f64.sqrt()];

    println!("UPB tiles mixed with white noise, smallest detected weight:");
    for t in &ts {
        let row = scan::upb_threshold(*t)?;
        match row.p_star {
            Some(p) => println!("  t = {t:.4}: p* = {p:.6}"),
            None => println!("  t = {t:.4}: not detected"),
        }
    }

    let mut horodecki = ScanConfig::new(Experiment::Horodecki);
    horodecki.ts = ts.clone();
    horodecki.s_grid = Grid::new(0.0, 1.0, 21)?;
    horodecki.p_grid = Grid::new(0.99, 1.0, 21)?;
    let rows = scan::horodecki_scan(&horodecki)?;
    println!("Horodecki states, detected grid points per t:");
    for (t, count) in scan::horodecki_counts(&horodecki, &rows) {
        println!("  t = {t:.4}: {count}");
    }

    let mut chess = ScanConfig::new(Experiment::Chessboard);
    chess.ts = ts;
    chess.samples = 500;
    println!("Random chessboard states:");
    for row in scan::chessboard_scan(&chess)? {
        println!("  t = {:.4}: {}/{} detected", row.t, row.detected, row.samples);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
