//! Bipartite density matrices and the families used to exercise the criteria.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    self, c64, hermitian_eigenvalues, identity, kron, projector, ComplexMatrix, Side,
};
use crate::rng::{SampleRng, STREAM_CHESSBOARD, STREAM_HILBERT_SCHMIDT, STREAM_SEPARABLE};

/// Tolerance on trace, Hermiticity and positivity of a density matrix.
pub const STATE_TOL: f64 = 1e-10;

/// Chessboard parameters `m`, `n` closer to zero than this are resampled.
pub const CHESSBOARD_MIN_DENOMINATOR: f64 = 1e-6;

/// A density matrix on `C^{d_a} ⊗ C^{d_b}`, composite index `i_a * d_b + i_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    da: usize,
    db: usize,
    rho: ComplexMatrix,
}

impl BipartiteState {
    /// Validates trace, Hermiticity and positivity, then stores `(ρ + ρ†)/2`.
    pub fn new(da: usize, db: usize, rho: ComplexMatrix) -> Result<Self> {
        if da == 0 || db == 0 {
            return Err(Error::InvalidState(format!("dimensions {da}x{db}")));
        }
        let n = da * db;
        if rho.nrows() != n || rho.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{da}x{db} state needs a {n}x{n} matrix, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let rho = linalg::symmetrized(&rho).map_err(|e| Error::InvalidState(e.to_string()))?;
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {trace}")));
        }
        let min = hermitian_eigenvalues(&rho)?[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { da, db, rho })
    }

    /// Normalizes a nonzero PSD matrix to unit trace before validating.
    pub fn from_unnormalized(da: usize, db: usize, m: ComplexMatrix) -> Result<Self> {
        let trace = m.trace().re;
        if trace.is_nan() || trace <= 0.0 {
            return Err(Error::InvalidState(format!("non-positive trace {trace}")));
        }
        Self::new(da, db, m.unscale(trace))
    }

    pub fn from_pure(da: usize, db: usize, psi: &DVector<Complex64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(da, db, projector(&psi.unscale(norm)))
    }

    pub fn product(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<Self> {
        Self::new(rho_a.nrows(), rho_b.nrows(), kron(rho_a, rho_b))
    }

    pub fn maximally_mixed(da: usize, db: usize) -> Self {
        let n = da * db;
        Self {
            da,
            db,
            rho: identity(n).unscale(n as f64),
        }
    }

    pub fn da(&self) -> usize {
        self.da
    }

    pub fn db(&self) -> usize {
        self.db
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.da, self.db)
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_rho(self) -> ComplexMatrix {
        self.rho
    }

    /// Reduced state on subsystem A.
    pub fn reduced_a(&self) -> ComplexMatrix {
        linalg::partial_trace(&self.rho, self.da, self.db, Side::B).expect("dims checked")
    }

    /// Reduced state on subsystem B.
    pub fn reduced_b(&self) -> ComplexMatrix {
        linalg::partial_trace(&self.rho, self.da, self.db, Side::A).expect("dims checked")
    }

    pub fn partial_transpose_b(&self) -> ComplexMatrix {
        linalg::partial_transpose(&self.rho, self.da, self.db, Side::B).expect("dims checked")
    }

    /// `Tr[ρ X]` for an operator on the full space.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<Complex64> {
        if op.shape() != self.rho.shape() {
            return Err(Error::DimensionMismatch(format!(
                "operator {:?} vs state {:?}",
                op.shape(),
                self.rho.shape()
            )));
        }
        Ok(linalg::trace_of_product(&self.rho, op))
    }

    pub fn purity(&self) -> f64 {
        linalg::trace_of_product(&self.rho, &self.rho).re
    }
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if !(lo..=hi).contains(&value) {
        return Err(Error::ParameterOutOfRange { name, value, range });
    }
    Ok(())
}

fn with_white_noise(rho: ComplexMatrix, p: f64) -> ComplexMatrix {
    let n = rho.nrows();
    rho.scale(p) + identity(n).scale((1.0 - p) / n as f64)
}

/// Werner state with `φ = Tr[ρ F]`, `F` the swap:
/// `ρ = 𝟙/d² + (dφ−1)/(2d(d²−1)) Σ_μ π_μ⊗π_μ`. Separable iff `φ ≥ 0`.
pub fn werner(d: usize, phi: f64) -> Result<BipartiteState> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    check_range("phi", phi, -1.0, 1.0, "[-1, 1]")?;
    let df = d as f64;
    let denom = df * df * df - df;
    let n = d * d;
    let mut rho = identity(n).scale((df - phi) / denom);
    let swap_coeff = (df * phi - 1.0) / denom;
    for i in 0..d {
        for j in 0..d {
            rho[(i * d + j, j * d + i)] += c64(swap_coeff, 0.0);
        }
    }
    BipartiteState::new(d, d, rho)
}

/// `(1/√d) Σ_i |ii⟩`.
pub fn max_entangled(d: usize) -> Result<BipartiteState> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut psi = DVector::zeros(d * d);
    for i in 0..d {
        psi[i * d + i] = c64(1.0, 0.0);
    }
    BipartiteState::from_pure(d, d, &psi)
}

/// `(|01⟩ − |10⟩)/√2`, equal to `werner(2, -1)`.
pub fn singlet() -> BipartiteState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = DVector::from_vec(vec![c64(0., 0.), c64(s, 0.), c64(-s, 0.), c64(0., 0.)]);
    BipartiteState::from_pure(2, 2, &psi).expect("valid")
}

/// Horodecki's 3×3 PPT entangled family mixed with white noise:
/// `p ρ_H(s) + (1 − p) 𝟙/9`.
pub fn horodecki(s: f64, p: f64) -> Result<BipartiteState> {
    check_range("s", s, 0.0, 1.0, "[0, 1]")?;
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let mut m = ComplexMatrix::zeros(9, 9);
    for i in 0..8 {
        m[(i, i)] = c64(s, 0.0);
    }
    for &i in &[0usize, 4, 8] {
        for &j in &[0usize, 4, 8] {
            m[(i, j)] = c64(s, 0.0);
        }
    }
    let corner = 0.5 * (1.0 - s * s).sqrt();
    m[(6, 6)] = c64(0.5 * (1.0 + s), 0.0);
    m[(8, 8)] = c64(0.5 * (1.0 + s), 0.0);
    m[(6, 8)] = c64(corner, 0.0);
    m[(8, 6)] = c64(corner, 0.0);
    let rho_h = m.unscale(8.0 * s + 1.0);
    BipartiteState::new(3, 3, with_white_noise(rho_h, p))
}

fn ket3(a: [f64; 3], b: [f64; 3]) -> DVector<Complex64> {
    DVector::from_iterator(9, (0..9).map(|k| c64(a[k / 3] * b[k % 3], 0.0)))
}

/// The five orthonormal product vectors of the "tiles" UPB.
pub fn upb_tile_vectors() -> [DVector<Complex64>; 5] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let t = 1.0 / 3.0_f64.sqrt();
    [
        ket3([1., 0., 0.], [s, -s, 0.]),
        ket3([s, -s, 0.], [0., 0., 1.]),
        ket3([0., 0., 1.], [0., s, -s]),
        ket3([0., s, -s], [1., 0., 0.]),
        ket3([t, t, t], [t, t, t]),
    ]
}

/// `p (𝟙 − Σ|ψ_i⟩⟨ψ_i|)/4 + (1 − p) 𝟙/9` built from the tiles UPB.
pub fn upb_tiles(p: f64) -> Result<BipartiteState> {
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let mut m = identity(9);
    for psi in upb_tile_vectors() {
        m -= projector(&psi);
    }
    BipartiteState::new(3, 3, with_white_noise(m.unscale(4.0), p))
}

/// Chessboard state `𝒩 Σ_{i=1}^4 |V_i⟩⟨V_i|` with real parameters; the
/// kets' nine components are read in the A-major composite order.
pub fn chessboard(m: f64, n: f64, a: f64, b: f64, c: f64, d: f64) -> Result<BipartiteState> {
    if m == 0.0 {
        return Err(Error::ZeroDenominator("chessboard parameter m"));
    }
    if n == 0.0 {
        return Err(Error::ZeroDenominator("chessboard parameter n"));
    }
    let vectors = [
        [m, 0.0, a * c / n, 0.0, n, 0.0, 0.0, 0.0, 0.0],
        [0.0, a, 0.0, b, 0.0, c, 0.0, 0.0, 0.0],
        [n, 0.0, 0.0, 0.0, -m, 0.0, a * d / m, 0.0, 0.0],
        [0.0, b, 0.0, -a, 0.0, 0.0, 0.0, d, 0.0],
    ];
    let mut sum = ComplexMatrix::zeros(9, 9);
    for v in &vectors {
        let ket = DVector::from_iterator(9, v.iter().map(|&x| c64(x, 0.0)));
        sum += projector(&ket);
    }
    BipartiteState::from_unnormalized(3, 3, sum)
}

/// Chessboard state with the six parameters drawn from the standard normal
/// distribution; `m` and `n` are redrawn while `|·| < 1e-6`.
pub fn random_chessboard(seed: u64, index: u64) -> BipartiteState {
    let mut rng = SampleRng::new(seed, STREAM_CHESSBOARD, index);
    let draw_nonzero = |rng: &mut SampleRng| loop {
        let x = rng.standard_normal();
        if x.abs() >= CHESSBOARD_MIN_DENOMINATOR {
            return x;
        }
    };
    let m = draw_nonzero(&mut rng);
    let n = draw_nonzero(&mut rng);
    let a = rng.standard_normal();
    let b = rng.standard_normal();
    let c = rng.standard_normal();
    let d = rng.standard_normal();
    chessboard(m, n, a, b, c, d).expect("nonzero denominators and nonzero V_1")
}

/// Hilbert–Schmidt random state `GG†/Tr[GG†]`, `G` a square Ginibre matrix.
pub fn random_hs(da: usize, db: usize, seed: u64, index: u64) -> BipartiteState {
    let n = da * db;
    let mut rng = SampleRng::new(seed, STREAM_HILBERT_SCHMIDT, index);
    let g = ComplexMatrix::from_fn(n, n, |_, _| rng.complex_normal());
    BipartiteState::from_unnormalized(da, db, &g * g.adjoint()).expect("Wishart matrix is PSD")
}

/// Haar-random unit vector in `C^d`.
pub fn haar_pure_vector(d: usize, rng: &mut SampleRng) -> DVector<Complex64> {
    let v = DVector::from_fn(d, |_, _| rng.complex_normal());
    let norm = v.norm();
    v.unscale(norm)
}

/// `Σ_i q_i |a_i⟩⟨a_i| ⊗ |b_i⟩⟨b_i|` with flat-Dirichlet weights and Haar
/// random pure factors.
pub fn random_separable(da: usize, db: usize, k: usize, seed: u64, index: u64) -> Result<BipartiteState> {
    if k == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "k",
            value: 0.0,
            range: ">= 1",
        });
    }
    let mut rng = SampleRng::new(seed, STREAM_SEPARABLE, index);
    let weights: Vec<f64> = (0..k).map(|_| rng.exponential()).collect();
    let total: f64 = weights.iter().sum();
    let n = da * db;
    let mut rho = ComplexMatrix::zeros(n, n);
    for w in weights {
        let a = haar_pure_vector(da, &mut rng);
        let b = haar_pure_vector(db, &mut rng);
        let ket = a.kronecker(&b);
        rho += projector(&ket).scale(w / total);
    }
    BipartiteState::new(da, db, rho)
}
