//! Reference computations for the integration tests, written without the
//! library's linear algebra so that the two sides can disagree.

#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;
use separability::linalg::{ComplexMatrix, RealMatrix};

type Dense = Vec<Vec<Complex64>>;

fn to_dense(m: &ComplexMatrix) -> Dense {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn off_diagonal_norm(a: &Dense) -> f64 {
    let n = a.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i][j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// ascending.
pub fn jacobi_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let mut a = to_dense(h);
    let n = a.len();
    let scale: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..100 {
        if off_diagonal_norm(&a) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                let beta = apq.norm();
                if beta <= 1e-300 {
                    continue;
                }
                let phase = apq / beta;
                let alpha = a[p][p].re;
                let gamma = a[q][q].re;
                let theta = (gamma - alpha) / (2.0 * beta);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // Rotation acting on columns p, q: diag(1, conj(phase)) then a real Givens step.
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                for row in a.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * jpp + xq * jqp;
                    row[q] = xp * jpq + xq * jqq;
                }
                for k in 0..n {
                    let (xp, xq) = (a[p][k], a[q][k]);
                    a[p][k] = jpp.conj() * xp + jqp.conj() * xq;
                    a[q][k] = jpq.conj() * xp + jqq.conj() * xq;
                }
            }
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[i][i].re).collect();
    values.sort_by(f64::total_cmp);
    values
}

fn gram_trace_norm(gram: &ComplexMatrix) -> f64 {
    jacobi_eigenvalues(gram).iter().map(|&x| x.max(0.0).sqrt()).sum()
}

/// `Σ σ_i` from the eigenvalues of the smaller Gram matrix.
pub fn trace_norm_complex(m: &ComplexMatrix) -> f64 {
    if m.nrows() <= m.ncols() {
        gram_trace_norm(&(m * m.adjoint()))
    } else {
        gram_trace_norm(&(m.adjoint() * m))
    }
}

pub fn trace_norm_real(m: &RealMatrix) -> f64 {
    trace_norm_complex(&m.map(|x| Complex64::new(x, 0.0)))
}

/// Realignment `R_{(i j),(k l)} = ρ_{(i k),(j l)}` of a `d_a d_b` square matrix.
pub fn realign(rho: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(da * da, db * db, |r, c| {
        let (i, j) = (r / da, r % da);
        let (k, l) = (c / db, c % db);
        rho[(i * db + k, j * db + l)]
    })
}

pub fn reduced_a(rho: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(da, da, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..db {
            acc += rho[(i * db + k, j * db + k)];
        }
        acc
    })
}

pub fn reduced_b(rho: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(db, db, |k, l| {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..da {
            acc += rho[(i * db + k, i * db + l)];
        }
        acc
    })
}

/// `max(‖ρ_A − 𝟙/d_A‖_max, ‖ρ_B − 𝟙/d_B‖_max)`.
pub fn marginal_deviation(rho: &ComplexMatrix, da: usize, db: usize) -> f64 {
    let dev = |m: ComplexMatrix, d: usize| {
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 / d as f64 } else { 0.0 };
                worst = worst.max((m[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    };
    dev(reduced_a(rho, da, db), da).max(dev(reduced_b(rho, da, db), db))
}
