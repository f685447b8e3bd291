//! Generalized Gell-Mann bases and Bloch coordinates.
//!
//! Conventions: states carry `r_μ = Tr[ρ π_μ]` so that `ρ = 𝟙/d + r·π/2`,
//! observables carry `t = Tr[A]` and `a_μ = Tr[A π_μ]/2` so that
//! `A = (t/d)𝟙 + a·π`. Bipartite coefficients use the extended basis
//! `Π_0 = √(2/d)𝟙, Π_μ = π_μ`, with `χ_{μν} = Tr[ρ Π_μ⊗Π_ν]`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{self, c64, identity, ComplexMatrix, RealMatrix, HERMITIAN_TOL};
use crate::states::BipartiteState;

/// The `d² − 1` generators of su(d), ordered: symmetric pairs `(j,k)`,
/// `j < k` lexicographic; antisymmetric pairs in the same order; diagonal
/// generators `l = 1..d−1`.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<ComplexMatrix>,
}

impl GeneratorBasis {
    fn build(d: usize) -> Self {
        let mut generators = Vec::with_capacity(d * d - 1);
        let pairs: Vec<(usize, usize)> = (0..d)
            .flat_map(|j| (j + 1..d).map(move |k| (j, k)))
            .collect();
        for &(j, k) in &pairs {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = c64(1.0, 0.0);
            m[(k, j)] = c64(1.0, 0.0);
            generators.push(m);
        }
        for &(j, k) in &pairs {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = c64(0.0, -1.0);
            m[(k, j)] = c64(0.0, 1.0);
            generators.push(m);
        }
        for l in 1..d {
            let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
            let mut m = ComplexMatrix::zeros(d, d);
            let mut sum = 0.0;
            for j in 0..l {
                m[(j, j)] = c64(norm, 0.0);
                sum += norm;
            }
            // accumulated in trace order so the trace is exactly zero
            m[(l, l)] = c64(-sum, 0.0);
            generators.push(m);
        }
        Self { dim: d, generators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn get(&self, mu: usize) -> &ComplexMatrix {
        &self.generators[mu]
    }

    /// `Π_0 = √(2/d)𝟙` followed by the generators.
    pub fn extended(&self) -> Vec<ComplexMatrix> {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(identity(self.dim).scale((2.0 / self.dim as f64).sqrt()));
        out.extend(self.generators.iter().cloned());
        out
    }
}

fn cache() -> &'static RwLock<HashMap<usize, Arc<GeneratorBasis>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GeneratorBasis>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Memoized su(d) basis.
pub fn su_generators(d: usize) -> Result<Arc<GeneratorBasis>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if let Some(basis) = cache().read().expect("cache poisoned").get(&d) {
        return Ok(Arc::clone(basis));
    }
    let basis = Arc::new(GeneratorBasis::build(d));
    let mut guard = cache().write().expect("cache poisoned");
    Ok(Arc::clone(guard.entry(d).or_insert(basis)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlochState {
    pub dim: usize,
    pub r: DVector<f64>,
}

impl BlochState {
    /// Radius of the Bloch ball, reached by pure states: `√(2(d−1)/d)`.
    pub fn max_norm(d: usize) -> f64 {
        (2.0 * (d as f64 - 1.0) / d as f64).sqrt()
    }
}

fn check_square_dim(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() < 2 {
        return Err(Error::InvalidDimension(m.nrows()));
    }
    Ok(m.nrows())
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let asymmetry = linalg::max_asymmetry(m);
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    Ok(())
}

pub fn state_to_bloch(rho: &ComplexMatrix) -> Result<BlochState> {
    let d = check_square_dim(rho)?;
    check_hermitian(rho)?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::InvalidState(format!("trace {tr}")));
    }
    let basis = su_generators(d)?;
    let r = DVector::from_iterator(
        basis.len(),
        basis.generators().iter().map(|p| linalg::trace_of_product(rho, p).re),
    );
    Ok(BlochState { dim: d, r })
}

/// `𝟙/d + r·π/2`. No positivity check: arbitrary `r` gives a unit-trace
/// Hermitian operator.
pub fn bloch_to_state(r: &DVector<f64>, d: usize) -> Result<ComplexMatrix> {
    let basis = su_generators(d)?;
    if r.len() != basis.len() {
        return Err(Error::DimensionMismatch(format!(
            "Bloch vector of length {} for d = {d}",
            r.len()
        )));
    }
    let mut rho = identity(d).unscale(d as f64);
    for (p, &x) in basis.generators().iter().zip(r.iter()) {
        rho += p.scale(0.5 * x);
    }
    Ok(rho)
}

/// Returns `(t, a)` with `A = (t/d)𝟙 + a·π`.
pub fn observable_to_bloch(a: &ComplexMatrix) -> Result<(f64, DVector<f64>)> {
    let d = check_square_dim(a)?;
    check_hermitian(a)?;
    let basis = su_generators(d)?;
    let t = a.trace().re;
    let coeffs = DVector::from_iterator(
        basis.len(),
        basis
            .generators()
            .iter()
            .map(|p| 0.5 * linalg::trace_of_product(a, p).re),
    );
    Ok((t, coeffs))
}

pub fn bloch_to_observable(t: f64, a: &DVector<f64>, d: usize) -> Result<ComplexMatrix> {
    let basis = su_generators(d)?;
    if a.len() != basis.len() {
        return Err(Error::DimensionMismatch(format!(
            "observable coefficients of length {} for d = {d}",
            a.len()
        )));
    }
    let mut m = identity(d).scale(t / d as f64);
    for (p, &x) in basis.generators().iter().zip(a.iter()) {
        m += p.scale(x);
    }
    Ok(m)
}

/// Bloch coefficients of a bipartite state.
#[derive(Debug, Clone)]
pub struct BipartiteBloch {
    pub da: usize,
    pub db: usize,
    /// `d_a² × d_b²`, `χ_{μν} = Tr[ρ Π_μ^A ⊗ Π_ν^B]`.
    pub chi: RealMatrix,
    /// Local Bloch vector of A, `a_μ = Tr[ρ π_μ ⊗ 𝟙]`.
    pub a: DVector<f64>,
    /// Local Bloch vector of B.
    pub b: DVector<f64>,
    /// Correlation block `T_{μν} = Tr[ρ π_μ ⊗ π_ν]`.
    pub t: RealMatrix,
}

impl BipartiteBloch {
    /// `ρ = ¼ Σ χ_{μν} Π_μ ⊗ Π_ν`.
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        let pa = su_generators(self.da)?.extended();
        let pb = su_generators(self.db)?.extended();
        let n = self.da * self.db;
        let mut rho = ComplexMatrix::zeros(n, n);
        for (mu, x) in pa.iter().enumerate() {
            for (nu, y) in pb.iter().enumerate() {
                let coeff = self.chi[(mu, nu)];
                if coeff != 0.0 {
                    rho += linalg::kron(x, y).scale(0.25 * coeff);
                }
            }
        }
        Ok(rho)
    }
}

/// `Tr_B[ρ (𝟙 ⊗ Y)]` as a `d_a × d_a` operator.
fn contract_b(rho: &ComplexMatrix, da: usize, db: usize, y: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(da, da, |i, j| {
        let mut acc = c64(0.0, 0.0);
        for k in 0..db {
            for l in 0..db {
                let ylk = y[(l, k)];
                if ylk.re != 0.0 || ylk.im != 0.0 {
                    acc += rho[(i * db + k, j * db + l)] * ylk;
                }
            }
        }
        acc
    })
}

pub fn decompose_bipartite(state: &BipartiteState) -> Result<BipartiteBloch> {
    let (da, db) = state.dims();
    let pa = su_generators(da)?.extended();
    let pb = su_generators(db)?.extended();
    let rho = state.rho();
    let mut chi = RealMatrix::zeros(pa.len(), pb.len());
    for (nu, y) in pb.iter().enumerate() {
        let reduced = contract_b(rho, da, db, y);
        for (mu, x) in pa.iter().enumerate() {
            chi[(mu, nu)] = linalg::trace_of_product(&reduced, x).re;
        }
    }
    let na = pa.len();
    let nb = pb.len();
    let t = chi.view((1, 1), (na - 1, nb - 1)).into_owned();
    let a = chi.view((1, 0), (na - 1, 1)).column(0).unscale((2.0 / db as f64).sqrt());
    let b = chi.view((0, 1), (1, nb - 1)).row(0).transpose().unscale((2.0 / da as f64).sqrt());
    Ok(BipartiteBloch { da, db, chi, a, b, t })
}
