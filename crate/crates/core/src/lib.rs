//! One-sided entanglement detection for bipartite states through
//! correlation matrices of observable tuples.

pub mod bloch;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod io;
pub mod lft;
pub mod linalg;
pub mod observables;
pub mod rng;
pub mod scan;
pub mod states;
pub mod witness;

pub use criteria::{Criterion, CriterionReport, Verdict};
pub use error::{Error, Result};
pub use observables::MeasurementTuple;
pub use states::BipartiteState;
