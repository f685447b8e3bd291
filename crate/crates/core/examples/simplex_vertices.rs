// Regular simplex vertices used to build simplex measurement tuples.
//
// `cargo run --example simplex_vertices`

use separability::observables::{simplex_vertices, MeasurementTuple};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let v = simplex_vertices(3)?;
    println!("tetrahedron vertices (columns):\n{:.4}", v);
    println!("Gram matrix:\n{:.4}", v.transpose() * &v);

    let tuple = MeasurementTuple::simplex(2, 1.0)?;
    println!("d = 2 simplex tuple: {} observables, balanced: {}", tuple.len(), tuple.is_balanced());
    println!("frame operator:\n{:.4}", tuple.frame_operator());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
