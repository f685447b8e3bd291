// Write a state to the JSON file format, read it back, and check it with a
// hand-built measurement tuple.
//
// `cargo run --example state_files`

use separability::criteria;
use separability::io;
use separability::linalg::{c64, ComplexMatrix};
use separability::observables::MeasurementTuple;
use separability::states;

fn pauli() -> Vec<ComplexMatrix> {
    let (o, l, i) = (c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0));
    vec![
        ComplexMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        ComplexMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        ComplexMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    ]
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::temp_dir().join("separability-example-state.json");
    io::write_state(&path, &states::werner(2, -0.6)?)?;
    let state = io::read_state(&path)?;
    println!("read {}x{} state from {}", state.da(), state.db(), path.display());

    let tuple = MeasurementTuple::from_observables(&pauli())?;
    let report = criteria::theorem1_check(&state, &tuple, &tuple)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    std::fs::remove_file(&path)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
