//! Dense numerical kernel shared by the rest of the crate.
//!
//! Matrices are `nalgebra` dynamic matrices. Composite bipartite indices are
//! always A-major: row `i_a * d_b + i_b`.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type RealMatrix = DMatrix<f64>;

/// Largest tolerated `max |H - H†|` before an operator is rejected as non-Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as zero.
pub const PSD_CLAMP: f64 = 1e-10;

/// Reconstruction and orthonormality slack accepted from an SVD.
const SVD_CHECK_TOL: f64 = 1e-10;

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: DVector<f64>,
    /// Column `i` is the eigenvector for `eigenvalues[i]`.
    pub eigenvectors: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct RealSvd {
    /// `rows x k` with orthonormal columns, `k = min(rows, cols)`.
    pub u: RealMatrix,
    /// Descending, nonnegative.
    pub singular_values: DVector<f64>,
    /// `cols x k` with orthonormal columns.
    pub v: RealMatrix,
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(m: &RealMatrix) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `max |H - H†|` entrywise.
pub fn max_asymmetry(h: &ComplexMatrix) -> f64 {
    let n = h.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_square(rows: usize, cols: usize) -> Result<()> {
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    Ok(())
}

/// Checks the Hermiticity contract and returns `(H + H†) / 2`.
pub fn symmetrized(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square(h.nrows(), h.ncols())?;
    if !is_finite(h) {
        return Err(Error::NonFinite);
    }
    let asymmetry = max_asymmetry(h);
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    Ok((h + h.adjoint()).scale(0.5))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let sym = symmetrized(h)?;
    let n = sym.nrows();
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<DVector<f64>> {
    let sym = symmetrized(h)?;
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(DVector::from_vec(values))
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
pub fn symmetric_eig_real(m: &RealMatrix) -> Result<(DVector<f64>, RealMatrix)> {
    check_square(m.nrows(), m.ncols())?;
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = m.nrows();
    let eig = SymmetricEigen::new((m + m.transpose()).scale(0.5));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = RealMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Thin SVD `M = U diag(s) Vᵀ` with singular values sorted descending.
pub fn svd_real(m: &RealMatrix) -> Result<RealSvd> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return Ok(RealSvd {
            u: RealMatrix::zeros(rows, 0),
            singular_values: DVector::zeros(0),
            v: RealMatrix::zeros(cols, 0),
        });
    }
    let mut svd = SVD::new(m.clone(), true, true);
    svd.sort_by_singular_values();
    let direct = RealSvd {
        u: svd.u.expect("u requested"),
        singular_values: svd.singular_values,
        v: svd.v_t.expect("v_t requested").transpose(),
    };
    if is_valid_svd(m, &direct) {
        return Ok(direct);
    }
    // nalgebra's bidiagonal SVD occasionally returns factors that do not
    // reproduce rank-deficient inputs; rebuild from the augmented eigenproblem.
    let augmented = svd_from_augmented(m);
    if is_valid_svd(m, &augmented) {
        Ok(augmented)
    } else {
        Err(Error::Numerical("SVD failed to reconstruct its input".into()))
    }
}

fn is_valid_svd(m: &RealMatrix, s: &RealSvd) -> bool {
    let k = s.singular_values.len();
    let scale = max_abs_real(m).max(1.0);
    let rebuilt = &s.u * RealMatrix::from_diagonal(&s.singular_values) * s.v.transpose();
    let eye = RealMatrix::identity(k, k);
    max_abs_real(&(rebuilt - m)) <= SVD_CHECK_TOL * scale
        && max_abs_real(&(s.u.transpose() * &s.u - &eye)) <= SVD_CHECK_TOL
        && max_abs_real(&(s.v.transpose() * &s.v - &eye)) <= SVD_CHECK_TOL
        && s.singular_values.as_slice().windows(2).all(|w| w[0] >= w[1])
}

/// Thin SVD from the eigenpairs `(σ, (u, v)/√2)` of `[[0, M], [Mᵀ, 0]]`.
///
/// Near-zero singular values pair up with their negatives and give mixed
/// eigenvectors, so those columns are filled by orthonormal completion.
fn svd_from_augmented(m: &RealMatrix) -> RealSvd {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    let n = rows + cols;
    let mut h = RealMatrix::zeros(n, n);
    h.view_mut((0, rows), (rows, cols)).copy_from(m);
    h.view_mut((rows, 0), (cols, rows)).copy_from(&m.transpose());
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let top = eig.eigenvalues[order[0]].max(0.0);
    let cutoff = (n as f64) * f64::EPSILON * top.max(f64::MIN_POSITIVE) * 16.0;

    let mut u = RealMatrix::zeros(rows, k);
    let mut v = RealMatrix::zeros(cols, k);
    let mut sigma = DVector::zeros(k);
    let mut filled = 0;
    for &idx in order.iter().take(k) {
        let lambda = eig.eigenvalues[idx];
        if lambda <= cutoff {
            break;
        }
        let x = eig.eigenvectors.view((0, idx), (rows, 1)).into_owned();
        let y = eig.eigenvectors.view((rows, idx), (cols, 1)).into_owned();
        u.set_column(filled, &(x.column(0) / x.norm()));
        v.set_column(filled, &(y.column(0) / y.norm()));
        sigma[filled] = lambda;
        filled += 1;
    }
    complete_orthonormal(&mut u, filled);
    complete_orthonormal(&mut v, filled);
    RealSvd {
        u,
        singular_values: sigma,
        v,
    }
}

/// Fill columns `from..` of `q` so that all its columns are orthonormal.
fn complete_orthonormal(q: &mut RealMatrix, from: usize) {
    let n = q.nrows();
    let mut col = from;
    for e in 0..n {
        if col == q.ncols() {
            break;
        }
        let mut candidate = DVector::<f64>::zeros(n);
        candidate[e] = 1.0;
        for _ in 0..2 {
            for j in 0..col {
                let qj = q.column(j).into_owned();
                let overlap = qj.dot(&candidate);
                candidate -= qj * overlap;
            }
        }
        let norm = candidate.norm();
        if norm > 1e-6 {
            q.set_column(col, &(candidate / norm));
            col += 1;
        }
    }
}

/// Sum of singular values. Non-finite input yields NaN.
pub fn trace_norm(m: &RealMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    if m.iter().any(|x| !x.is_finite()) {
        return f64::NAN;
    }
    m.singular_values().sum()
}

fn clamped_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let mut eig = hermitian_eig(h)?;
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -PSD_CLAMP {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    eig.eigenvalues.apply(|x| *x = x.max(0.0));
    Ok(eig)
}

fn spectral_map(eig: &HermitianEigen, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let s = f(lambda);
        scaled.column_mut(j).scale_mut(s);
    }
    &scaled * v.adjoint()
}

/// Principal square root of a PSD matrix.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = clamped_eig(h)?;
    Ok(spectral_map(&eig, f64::sqrt))
}

/// `H^{-1/2}` for a positive definite `H`; every eigenvalue must exceed `cutoff`.
pub fn psd_inv_sqrt(h: &ComplexMatrix, cutoff: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= cutoff {
        return Err(Error::SingularBelowCutoff {
            min_eigenvalue: min,
            cutoff,
        });
    }
    Ok(spectral_map(&eig, |x| 1.0 / x.sqrt()))
}

/// Square root of a real symmetric PSD matrix.
pub fn sym_sqrt_real(m: &RealMatrix) -> Result<RealMatrix> {
    let (values, vectors) = symmetric_eig_real(m)?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -PSD_CLAMP * (1.0 + max_abs_real(m)) {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(lambda.max(0.0).sqrt());
    }
    Ok(&scaled * vectors.transpose())
}

/// Moore–Penrose inverse of a real symmetric matrix; eigenvalues with
/// `|λ| <= cutoff` are treated as zero.
pub fn pinv_symmetric(m: &RealMatrix, cutoff: f64) -> Result<RealMatrix> {
    let (values, vectors) = symmetric_eig_real(m)?;
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let inv = if lambda.abs() > cutoff { 1.0 / lambda } else { 0.0 };
        scaled.column_mut(j).scale_mut(inv);
    }
    Ok(&scaled * vectors.transpose())
}

pub fn kron(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    x.kronecker(y)
}

fn check_bipartite(rho: &ComplexMatrix, da: usize, db: usize) -> Result<()> {
    let n = da * db;
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n}x{n} for {da}x{db}, got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    Ok(())
}

/// Traces out `side`, returning the reduced operator on the other factor.
pub fn partial_trace(rho: &ComplexMatrix, da: usize, db: usize, side: Side) -> Result<ComplexMatrix> {
    check_bipartite(rho, da, db)?;
    Ok(match side {
        Side::B => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| rho[(i * db + k, j * db + k)]).sum()
        }),
        Side::A => ComplexMatrix::from_fn(db, db, |k, l| {
            (0..da).map(|i| rho[(i * db + k, i * db + l)]).sum()
        }),
    })
}

/// Transposes the `side` factor.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    da: usize,
    db: usize,
    side: Side,
) -> Result<ComplexMatrix> {
    check_bipartite(rho, da, db)?;
    let n = da * db;
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (c / db, c % db);
        match side {
            Side::B => rho[(i * db + l, j * db + k)],
            Side::A => rho[(j * db + k, i * db + l)],
        }
    }))
}

/// `Tr[X Y]` without forming the product.
pub fn trace_of_product(x: &ComplexMatrix, y: &ComplexMatrix) -> Complex64 {
    let n = x.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..x.ncols() {
            acc += x[(i, k)] * y[(k, i)];
        }
    }
    acc
}

/// `|ψ⟩⟨ψ|` for a column vector.
pub fn projector(psi: &DVector<Complex64>) -> ComplexMatrix {
    psi * psi.adjoint()
}
