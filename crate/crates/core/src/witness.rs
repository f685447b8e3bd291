//! Witness operators from the SVD-optimal rotation of a correlation matrix.
//!
//! With `C = P Σ Qᵀ`, the rotated tuples `A' = PᵀA`, `B' = QᵀB` make the
//! correlation matrix diagonal with entries `σ_μ`, and
//! `W = κ 𝟙 − Σ_{μ≤r} A'_μ ⊗ B'_μ` has `Tr[Wρ] = κ − ‖C‖_tr`.

use nalgebra::DVector;

use crate::criteria::{self, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::observables::{beta_bound, MeasurementTuple};
use crate::states::BipartiteState;

/// Singular values at or below this are treated as zero when counting `r`.
pub const RANK_TOL: f64 = 1e-12;

/// Largest imaginary part tolerated in `Tr[Wρ]`.
pub const EXPECTATION_IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct OptimalObservables {
    /// `A'_μ = Σ_ν P_{νμ} A_ν` for `μ < r`.
    pub a: MeasurementTuple,
    pub b: MeasurementTuple,
    /// Diagonal of the rotated correlation matrix.
    pub singular_values: DVector<f64>,
}

impl OptimalObservables {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }
}

pub fn optimal_observables(c: &CorrelationMatrix<'_>) -> Result<OptimalObservables> {
    let svd = linalg::svd_real(&c.c)?;
    let r = svd.singular_values.iter().filter(|&&s| s > RANK_TOL).count();
    if r == 0 {
        return Err(Error::InvalidState("correlation matrix vanishes".into()));
    }
    let p = svd.u.columns(0, r).transpose();
    let q = svd.v.columns(0, r).transpose();
    Ok(OptimalObservables {
        a: c.a.mixed(&p)?,
        b: c.b.mixed(&q)?,
        singular_values: svd.singular_values.rows(0, r).into_owned(),
    })
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub w: ComplexMatrix,
    pub kappa: f64,
    pub optimal_a: Vec<ComplexMatrix>,
    pub optimal_b: Vec<ComplexMatrix>,
    pub da: usize,
    pub db: usize,
}

impl Witness {
    pub fn expectation(&self, state: &BipartiteState) -> Result<f64> {
        witness_expectation(&self.w, state)
    }
}

/// `W = κ_A κ_B 𝟙 − Σ_μ A'_μ ⊗ B'_μ` for the given state and tuples.
pub fn build_witness(state: &BipartiteState, a: &MeasurementTuple, b: &MeasurementTuple) -> Result<Witness> {
    let kappa = beta_bound(a)?.kappa * beta_bound(b)?.kappa;
    let c = criteria::correlation_matrix(state, a, b)?;
    let (da, db) = state.dims();
    let (optimal_a, optimal_b) = match optimal_observables(&c) {
        Ok(opt) => (opt.a.observables(), opt.b.observables()),
        // No correlations at all: the witness is just κ𝟙.
        Err(Error::InvalidState(_)) => (Vec::new(), Vec::new()),
        Err(e) => return Err(e),
    };
    let mut w = linalg::identity(da * db).scale(kappa);
    for (x, y) in optimal_a.iter().zip(&optimal_b) {
        w -= linalg::kron(x, y);
    }
    Ok(Witness {
        w,
        kappa,
        optimal_a,
        optimal_b,
        da,
        db,
    })
}

/// `Tr[Wρ]`, which must be real.
pub fn witness_expectation(w: &ComplexMatrix, state: &BipartiteState) -> Result<f64> {
    let n = state.da() * state.db();
    if w.nrows() != n || w.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} witness for a {}x{} state",
            w.nrows(),
            w.ncols(),
            state.da(),
            state.db()
        )));
    }
    let value = linalg::trace_of_product(w, state.rho());
    if value.im.abs() >= EXPECTATION_IMAG_TOL {
        return Err(Error::NotHermitian { asymmetry: value.im.abs() });
    }
    Ok(value.re)
}
