//! Measurement tuples in Bloch form and the scale of their measurement-induced
//! Bloch space.
//!
//! An `m`-tuple of observables on `C^d` is stored as its trace vector `t`
//! and a `(d²−1) × m` matrix whose columns are the traceless parts `a_μ`.
//! The tuple's `β` is `sup_ρ Σ_μ (r·a_μ)²` and `κ = √(|t|²/d² + β)`.

use nalgebra::DVector;
use serde::Serialize;

use crate::bloch;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, RealMatrix};

/// Tolerance on `|Σ_μ t_μ a_μ|` for a tuple to count as balanced.
pub const BALANCE_TOL: f64 = 1e-10;

/// Eigenvalue cutoff for the Moore–Penrose inverse of `Ω`.
pub const PINV_CUTOFF: f64 = 1e-12;

/// Which construction produced a tuple; decides whether `β` is known exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TupleKind {
    /// `t = 0`, `a_1 = 0`, `a_μ = e_{μ−1}`.
    Vicente,
    /// As `Vicente` with `t_1 = √(2d)·h`.
    Sarbicki { h: f64 },
    /// Equal traces `t`, traceless parts on a regular `(d²−1)`-simplex.
    Simplex { t: f64 },
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementTuple {
    dim: usize,
    traces: DVector<f64>,
    abloch: RealMatrix,
    kind: TupleKind,
}

/// Trace giving the CCNR member of the simplex family: `√(2d/(d²−1))`.
pub fn ccnr_trace(d: usize) -> f64 {
    let d = d as f64;
    (2.0 * d / (d * d - 1.0)).sqrt()
}

/// Trace giving the ESIC member of the simplex family: `√(2d/(d−1))`.
pub fn esic_trace(d: usize) -> f64 {
    let d = d as f64;
    (2.0 * d / (d - 1.0)).sqrt()
}

/// `n × (n+1)` matrix whose unit-norm columns are the vertices of a regular
/// simplex centred at the origin, Gram entries `((n+1)δ − 1)/n`.
pub fn simplex_vertices(n: usize) -> Result<RealMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let nf = n as f64;
    let diag = |k: usize| {
        let k = k as f64;
        ((nf + 1.0) * (nf - k + 1.0)).sqrt() / (nf * (nf - k + 2.0)).sqrt()
    };
    let below = |k: usize| {
        let k = k as f64;
        -(nf + 1.0).sqrt() / (nf * (nf - k + 1.0) * (nf - k + 2.0)).sqrt()
    };
    // 1-based vertex k has entries below(i) for rows i < k and diag(k) at row k.
    Ok(RealMatrix::from_fn(n, n + 1, |row, col| {
        let (i, k) = (row + 1, col + 1);
        match i.cmp(&k) {
            std::cmp::Ordering::Less => below(i),
            std::cmp::Ordering::Equal => diag(k),
            std::cmp::Ordering::Greater => 0.0,
        }
    }))
}

impl MeasurementTuple {
    pub fn new(dim: usize, traces: DVector<f64>, abloch: RealMatrix) -> Result<Self> {
        Self::with_kind(dim, traces, abloch, TupleKind::Custom)
    }

    fn with_kind(dim: usize, traces: DVector<f64>, abloch: RealMatrix, kind: TupleKind) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if abloch.nrows() != dim * dim - 1 || abloch.ncols() != traces.len() {
            return Err(Error::DimensionMismatch(format!(
                "tuple of {} traces with {}x{} Bloch block for d = {dim}",
                traces.len(),
                abloch.nrows(),
                abloch.ncols()
            )));
        }
        if traces.iter().chain(abloch.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            dim,
            traces,
            abloch,
            kind,
        })
    }

    /// Bloch form of explicit Hermitian observables, all on the same space.
    pub fn from_observables(observables: &[ComplexMatrix]) -> Result<Self> {
        let first = observables
            .first()
            .ok_or_else(|| Error::InvalidConfig("empty observable tuple".into()))?;
        let d = first.nrows();
        let n = d * d - 1;
        let mut traces = DVector::zeros(observables.len());
        let mut abloch = RealMatrix::zeros(n, observables.len());
        for (mu, obs) in observables.iter().enumerate() {
            if obs.nrows() != d {
                return Err(Error::DimensionMismatch(format!(
                    "observable {mu} is {}x{}, expected {d}x{d}",
                    obs.nrows(),
                    obs.ncols()
                )));
            }
            let (t, a) = bloch::observable_to_bloch(obs)?;
            traces[mu] = t;
            abloch.set_column(mu, &a);
        }
        Self::new(d, traces, abloch)
    }

    pub fn vicente(d: usize) -> Result<Self> {
        Self::sarbicki(d, 0.0).map(|mut t| {
            t.kind = TupleKind::Vicente;
            t
        })
    }

    pub fn sarbicki(d: usize, h: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let n = d * d - 1;
        let mut traces = DVector::zeros(n + 1);
        traces[0] = (2.0 * d as f64).sqrt() * h;
        let mut abloch = RealMatrix::zeros(n, n + 1);
        abloch.view_mut((0, 1), (n, n)).fill_with_identity();
        Self::with_kind(d, traces, abloch, TupleKind::Sarbicki { h })
    }

    pub fn simplex(d: usize, t: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let n = d * d - 1;
        let vertices = simplex_vertices(n)?;
        Self::with_kind(d, DVector::from_element(n + 1, t), vertices, TupleKind::Simplex { t })
    }

    pub fn ccnr(d: usize) -> Result<Self> {
        Self::simplex(d, ccnr_trace(d))
    }

    pub fn esic(d: usize) -> Result<Self> {
        Self::simplex(d, esic_trace(d))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn kind(&self) -> TupleKind {
        self.kind
    }

    pub fn traces(&self) -> &DVector<f64> {
        &self.traces
    }

    /// Columns are the traceless parts `a_μ`.
    pub fn abloch(&self) -> &RealMatrix {
        &self.abloch
    }

    /// `M = [t_μ/√(2d); a_μ]`, the `d² × m` Bloch matrix of the tuple.
    pub fn bloch_matrix(&self) -> RealMatrix {
        let d = self.dim;
        let m = self.len();
        let mut out = RealMatrix::zeros(d * d, m);
        let scale = (2.0 * d as f64).sqrt();
        for mu in 0..m {
            out[(0, mu)] = self.traces[mu] / scale;
        }
        out.view_mut((1, 0), (d * d - 1, m)).copy_from(&self.abloch);
        out
    }

    /// `|Σ_μ t_μ a_μ|`.
    pub fn balance_residual(&self) -> f64 {
        (&self.abloch * &self.traces).norm()
    }

    pub fn is_balanced(&self) -> bool {
        self.balance_residual() <= BALANCE_TOL
    }

    pub fn ensure_balanced(&self) -> Result<()> {
        let residual = self.balance_residual();
        if residual > BALANCE_TOL {
            return Err(Error::NotBalanced { residual });
        }
        Ok(())
    }

    /// `|t|`, Euclidean norm of the trace vector.
    pub fn trace_norm(&self) -> f64 {
        self.traces.norm()
    }

    /// `𝒜 = Σ_μ a_μ a_μᵀ`.
    pub fn frame_operator(&self) -> RealMatrix {
        &self.abloch * self.abloch.transpose()
    }

    pub fn observables(&self) -> Vec<ComplexMatrix> {
        (0..self.len())
            .map(|mu| {
                bloch::bloch_to_observable(self.traces[mu], &self.abloch.column(mu).into_owned(), self.dim)
                    .expect("dimensions validated at construction")
            })
            .collect()
    }

    /// Tuple `A'_μ = Σ_ν O_{μν} A_ν` for a `k × m` mixing matrix `O`.
    pub fn mixed(&self, o: &RealMatrix) -> Result<Self> {
        if o.ncols() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "mixing matrix has {} columns for a {}-tuple",
                o.ncols(),
                self.len()
            )));
        }
        Self::new(self.dim, o * &self.traces, &self.abloch * o.transpose())
    }
}

/// `Ω_{μν} = 2 a_μ·a_ν`.
pub fn omega_matrix(tuple: &MeasurementTuple) -> RealMatrix {
    (tuple.abloch.transpose() * &tuple.abloch).scale(2.0)
}

/// Moore–Penrose inverse of `Ω`.
pub fn omega_pinv(tuple: &MeasurementTuple) -> Result<RealMatrix> {
    linalg::pinv_symmetric(&omega_matrix(tuple), PINV_CUTOFF)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MibsScale {
    /// Exact `β` when known, otherwise an upper bound.
    pub beta: f64,
    pub beta_is_exact: bool,
    /// `√(|t|²/d² + β)`.
    pub kappa: f64,
}

/// `β` and `κ` for a balanced tuple.
///
/// Preset tuples get their exact values (`2(d−1)/d` for the generator-based
/// tuples, `2d/(d+1)` for simplex tuples). Anything else falls back to the
/// ellipsoid bound `(d−1)/d · λ_max(Ω)`, which over-estimates `β` and so
/// keeps the separability bound valid.
pub fn beta_bound(tuple: &MeasurementTuple) -> Result<MibsScale> {
    tuple.ensure_balanced()?;
    let d = tuple.dim as f64;
    let (beta, exact) = match tuple.kind {
        TupleKind::Vicente | TupleKind::Sarbicki { .. } => (2.0 * (d - 1.0) / d, true),
        TupleKind::Simplex { .. } => (2.0 * d / (d + 1.0), true),
        TupleKind::Custom => {
            let (values, _) = linalg::symmetric_eig_real(&omega_matrix(tuple))?;
            let lambda_max = values.iter().copied().fold(0.0, f64::max);
            ((d - 1.0) / d * lambda_max, false)
        }
    };
    let t2 = tuple.traces.norm_squared();
    Ok(MibsScale {
        beta,
        beta_is_exact: exact,
        kappa: (t2 / (d * d) + beta).sqrt(),
    })
}

/// Measurement-induced Bloch vector `α_μ = Tr[ρ Ā_μ] = r·a_μ`.
pub fn mibv(rho: &ComplexMatrix, tuple: &MeasurementTuple) -> Result<DVector<f64>> {
    if rho.nrows() != tuple.dim {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional state for a d = {} tuple",
            rho.nrows(),
            tuple.dim
        )));
    }
    let r = bloch::state_to_bloch(rho)?.r;
    Ok(tuple.abloch.transpose() * r)
}

/// Whether `α` lies in the ellipsoid `d/(d·purity − 1) · αᵀ Ω⁻ α ≤ 1`
/// that contains every MIBV of states with the given purity.
pub fn in_mibs_ellipsoid(tuple: &MeasurementTuple, alpha: &DVector<f64>, purity: f64) -> Result<bool> {
    let d = tuple.dim as f64;
    let pinv = omega_pinv(tuple)?;
    let quad = (alpha.transpose() * &pinv * alpha)[(0, 0)];
    let radius2 = (d * purity - 1.0) / d;
    Ok(quad <= radius2 * (1.0 + 1e-9) + 1e-12)
}
