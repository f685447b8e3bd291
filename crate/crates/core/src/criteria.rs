//! Correlation-matrix separability criteria.
//!
//! For balanced tuples `A`, `B` every separable state satisfies
//! `‖C‖_tr ≤ κ_A κ_B` with `C_{μν} = ⟨A_μ ⊗ B_ν⟩`. Violations certify
//! entanglement; everything else is reported as inconclusive.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bloch::{self, BipartiteBloch};
use crate::error::{Error, Result};
use crate::linalg::{self, RealMatrix};
use crate::lft;
use crate::observables::{beta_bound, ccnr_trace, esic_trace, MeasurementTuple, TupleKind};
use crate::states::BipartiteState;

/// A criterion flags a state only when its margin exceeds this.
pub const VERDICT_TOL: f64 = 1e-9;

/// Minimum eigenvalue of `ρ^{T_B}` below `-PPT_TOL` counts as NPT.
pub const PPT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Entangled,
    Inconclusive,
}

impl Verdict {
    pub fn is_entangled(self) -> bool {
        self == Verdict::Entangled
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Entangled => "Entangled",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub statistic: f64,
    pub bound: f64,
    /// Positive when the separable-side inequality is violated.
    pub margin: f64,
    pub verdict: Verdict,
    /// Individual inequalities of a compound criterion.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<CriterionReport>,
}

impl CriterionReport {
    fn from_margin(criterion: String, statistic: f64, bound: f64, margin: f64) -> Self {
        let verdict = if margin > VERDICT_TOL {
            Verdict::Entangled
        } else {
            Verdict::Inconclusive
        };
        Self {
            criterion,
            statistic,
            bound,
            margin,
            verdict,
            components: Vec::new(),
        }
    }

    /// Separable states satisfy `statistic ≤ bound`.
    pub fn upper(criterion: impl Into<String>, statistic: f64, bound: f64) -> Self {
        Self::from_margin(criterion.into(), statistic, bound, statistic - bound)
    }

    /// Separable states satisfy `statistic ≥ bound`.
    pub fn lower(criterion: impl Into<String>, statistic: f64, bound: f64) -> Self {
        Self::from_margin(criterion.into(), statistic, bound, bound - statistic)
    }

    /// Flags if any component flags; headline numbers come from the
    /// component with the largest margin.
    pub fn combined(criterion: impl Into<String>, components: Vec<CriterionReport>) -> Self {
        let best = components
            .iter()
            .max_by(|a, b| a.margin.total_cmp(&b.margin))
            .expect("at least one component")
            .clone();
        Self {
            criterion: criterion.into(),
            statistic: best.statistic,
            bound: best.bound,
            margin: best.margin,
            verdict: best.verdict,
            components,
        }
    }

    pub fn is_entangled(&self) -> bool {
        self.verdict.is_entangled()
    }

    pub(crate) fn relabel(mut self, criterion: impl Into<String>) -> Self {
        self.criterion = criterion.into();
        self
    }
}

/// `C_{μν} = Tr[ρ A_μ ⊗ B_ν]` together with the tuples it was built from.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix<'a> {
    pub c: RealMatrix,
    pub a: &'a MeasurementTuple,
    pub b: &'a MeasurementTuple,
}

fn check_tuple_dims(state: &BipartiteState, a: &MeasurementTuple, b: &MeasurementTuple) -> Result<()> {
    if a.dim() != state.da() || b.dim() != state.db() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} state with d = {} and d = {} tuples",
            state.da(),
            state.db(),
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// `C = M_Aᵀ χ M_B` from precomputed Bloch coefficients.
pub fn correlation_from_bloch(bb: &BipartiteBloch, a: &MeasurementTuple, b: &MeasurementTuple) -> RealMatrix {
    a.bloch_matrix().transpose() * &bb.chi * b.bloch_matrix()
}

pub fn correlation_matrix<'a>(
    state: &BipartiteState,
    a: &'a MeasurementTuple,
    b: &'a MeasurementTuple,
) -> Result<CorrelationMatrix<'a>> {
    check_tuple_dims(state, a, b)?;
    let bb = bloch::decompose_bipartite(state)?;
    Ok(CorrelationMatrix {
        c: correlation_from_bloch(&bb, a, b),
        a,
        b,
    })
}

/// Entry-by-entry `Tr[ρ (A_μ ⊗ B_ν)]` from explicit observables.
pub fn correlation_matrix_direct(
    state: &BipartiteState,
    a: &MeasurementTuple,
    b: &MeasurementTuple,
) -> Result<RealMatrix> {
    check_tuple_dims(state, a, b)?;
    let obs_a = a.observables();
    let obs_b = b.observables();
    let mut c = RealMatrix::zeros(obs_a.len(), obs_b.len());
    for (mu, x) in obs_a.iter().enumerate() {
        for (nu, y) in obs_b.iter().enumerate() {
            c[(mu, nu)] = state.expectation(&linalg::kron(x, y))?.re;
        }
    }
    Ok(c)
}

fn fmt_param(x: f64) -> String {
    format!("{x}")
}

/// Human-readable label for a pair of tuples.
pub fn tuple_pair_label(a: &MeasurementTuple, b: &MeasurementTuple) -> String {
    match (a.kind(), b.kind()) {
        (TupleKind::Vicente, TupleKind::Vicente) => "vicente".into(),
        (TupleKind::Sarbicki { h: ha }, TupleKind::Sarbicki { h: hb }) => {
            format!("sarbicki:hA={},hB={}", fmt_param(ha), fmt_param(hb))
        }
        (TupleKind::Simplex { t: ta }, TupleKind::Simplex { t: tb }) => {
            format!("simplex:tA={},tB={}", fmt_param(ta), fmt_param(tb))
        }
        _ => "custom".into(),
    }
}

/// `‖C‖_tr ≤ κ_A κ_B` for arbitrary balanced tuples.
pub fn theorem1_check(state: &BipartiteState, a: &MeasurementTuple, b: &MeasurementTuple) -> Result<CriterionReport> {
    check_tuple_dims(state, a, b)?;
    let bb = bloch::decompose_bipartite(state)?;
    theorem1_from_bloch(&bb, a, b)
}

pub fn theorem1_from_bloch(bb: &BipartiteBloch, a: &MeasurementTuple, b: &MeasurementTuple) -> Result<CriterionReport> {
    let ka = beta_bound(a)?.kappa;
    let kb = beta_bound(b)?.kappa;
    let c = correlation_from_bloch(bb, a, b);
    Ok(CriterionReport::upper(tuple_pair_label(a, b), linalg::trace_norm(&c), ka * kb))
}

pub fn vicente_check(state: &BipartiteState) -> Result<CriterionReport> {
    let a = MeasurementTuple::vicente(state.da())?;
    let b = MeasurementTuple::vicente(state.db())?;
    theorem1_check(state, &a, &b)
}

/// Generator tuples with `t_1 = √(2d)·h`.
pub fn sarbicki_check(state: &BipartiteState, ha: f64, hb: f64) -> Result<CriterionReport> {
    let a = MeasurementTuple::sarbicki(state.da(), ha)?;
    let b = MeasurementTuple::sarbicki(state.db(), hb)?;
    theorem1_check(state, &a, &b)
}

/// Regular-simplex tuples with equal traces `t_A`, `t_B`:
/// `‖C‖_tr ≤ √(t_A² + 2d_A/(d_A+1)) √(t_B² + 2d_B/(d_B+1))`.
pub fn observation1_check(state: &BipartiteState, ta: f64, tb: f64) -> Result<CriterionReport> {
    let a = MeasurementTuple::simplex(state.da(), ta)?;
    let b = MeasurementTuple::simplex(state.db(), tb)?;
    theorem1_check(state, &a, &b)
}

pub fn ccnr_check(state: &BipartiteState) -> Result<CriterionReport> {
    observation1_check(state, ccnr_trace(state.da()), ccnr_trace(state.db())).map(|r| r.relabel("ccnr"))
}

pub fn esic_check(state: &BipartiteState) -> Result<CriterionReport> {
    observation1_check(state, esic_trace(state.da()), esic_trace(state.db())).map(|r| r.relabel("esic"))
}

/// Bound of the simplex family, `√(t_A² + 2d_A/(d_A+1)) √(t_B² + 2d_B/(d_B+1))`.
pub fn simplex_bound(da: usize, db: usize, ta: f64, tb: f64) -> f64 {
    let k = |d: usize, t: f64| (t * t + 2.0 * d as f64 / (d as f64 + 1.0)).sqrt();
    k(da, ta) * k(db, tb)
}

/// Equal-dimension simplex criterion with `A = B`: both
/// `‖C‖_tr ≤ t² + 2d/(d+1)` and `Tr[C] ≥ t² − 2d/(d²−1)`.
pub fn observation2_check(state: &BipartiteState, t: f64) -> Result<CriterionReport> {
    let (da, db) = state.dims();
    if da != db {
        return Err(Error::DimensionMismatch(format!(
            "equal subsystem dimensions required, got {da}x{db}"
        )));
    }
    let tuple = MeasurementTuple::simplex(da, t)?;
    let bb = bloch::decompose_bipartite(state)?;
    Ok(observation2_from_bloch(&bb, &tuple))
}

pub(crate) fn observation2_from_bloch(bb: &BipartiteBloch, tuple: &MeasurementTuple) -> CriterionReport {
    let d = bb.da as f64;
    let t = match tuple.kind() {
        TupleKind::Simplex { t } => t,
        _ => unreachable!("observation 2 uses simplex tuples"),
    };
    let c = correlation_from_bloch(bb, tuple, tuple);
    let norm = CriterionReport::upper(
        format!("obs2-norm:t={}", fmt_param(t)),
        linalg::trace_norm(&c),
        t * t + 2.0 * d / (d + 1.0),
    );
    let trace = CriterionReport::lower(
        format!("obs2-trace:t={}", fmt_param(t)),
        c.trace(),
        t * t - 2.0 * d / (d * d - 1.0),
    );
    CriterionReport::combined(format!("obs2:t={}", fmt_param(t)), vec![norm, trace])
}

/// Minimum eigenvalue of `ρ^{T_B}`.
pub fn min_partial_transpose_eigenvalue(state: &BipartiteState) -> Result<f64> {
    Ok(linalg::hermitian_eigenvalues(&state.partial_transpose_b())?[0])
}

/// Peres–Horodecki test; a baseline, not one of the correlation criteria.
pub fn ppt_check(state: &BipartiteState) -> Result<Verdict> {
    Ok(if min_partial_transpose_eigenvalue(state)? < -PPT_TOL {
        Verdict::Entangled
    } else {
        Verdict::Inconclusive
    })
}

/// PPT as a report: statistic `−λ_min(ρ^{T_B})`, bound 0. The verdict uses
/// the PPT eigenvalue tolerance rather than `VERDICT_TOL`.
pub fn ppt_report(state: &BipartiteState) -> Result<CriterionReport> {
    let lambda = min_partial_transpose_eigenvalue(state)?;
    let mut report = CriterionReport::upper("ppt", -lambda, 0.0);
    report.verdict = if lambda < -PPT_TOL {
        Verdict::Entangled
    } else {
        Verdict::Inconclusive
    };
    Ok(report)
}

/// Observable-tuple presets usable on any dimension pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TuplePreset {
    Vicente,
    Sarbicki { ha: f64, hb: f64 },
    Simplex { ta: f64, tb: f64 },
    Ccnr,
    Esic,
}

impl TuplePreset {
    pub fn tuples(&self, da: usize, db: usize) -> Result<(MeasurementTuple, MeasurementTuple)> {
        Ok(match *self {
            TuplePreset::Vicente => (MeasurementTuple::vicente(da)?, MeasurementTuple::vicente(db)?),
            TuplePreset::Sarbicki { ha, hb } => {
                (MeasurementTuple::sarbicki(da, ha)?, MeasurementTuple::sarbicki(db, hb)?)
            }
            TuplePreset::Simplex { ta, tb } => {
                (MeasurementTuple::simplex(da, ta)?, MeasurementTuple::simplex(db, tb)?)
            }
            TuplePreset::Ccnr => (MeasurementTuple::ccnr(da)?, MeasurementTuple::ccnr(db)?),
            TuplePreset::Esic => (MeasurementTuple::esic(da)?, MeasurementTuple::esic(db)?),
        })
    }
}

/// Every criterion the command line can name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    Tuples(TuplePreset),
    Observation2 { t: f64 },
    /// Filter normal form followed by the simplex bound `κ(t_A, t_B)`.
    Observation3 { ta: f64, tb: f64 },
    /// Filter normal form followed by the general post-filter bound.
    Theorem2(TuplePreset),
    Ppt,
}

impl Criterion {
    pub fn evaluate(&self, state: &BipartiteState) -> Result<CriterionReport> {
        match *self {
            Criterion::Tuples(TuplePreset::Ccnr) => ccnr_check(state),
            Criterion::Tuples(TuplePreset::Esic) => esic_check(state),
            Criterion::Tuples(preset) => {
                let (a, b) = preset.tuples(state.da(), state.db())?;
                theorem1_check(state, &a, &b)
            }
            Criterion::Observation2 { t } => observation2_check(state, t),
            Criterion::Observation3 { .. } | Criterion::Theorem2(_) => {
                lft::pipeline(state, &self.post_filter().expect("post-filter criterion"))
            }
            Criterion::Ppt => ppt_report(state),
        }
        .map(|r| r.relabel(self.to_string()))
    }

    /// The criterion applied after local filtering, if this is one.
    pub fn post_filter(&self) -> Option<lft::PostFilterCriterion> {
        match *self {
            Criterion::Observation3 { ta, tb } => Some(lft::PostFilterCriterion::Observation3 { ta, tb }),
            Criterion::Theorem2(preset) => Some(lft::PostFilterCriterion::Theorem2(preset)),
            _ => None,
        }
    }

    pub fn tuple_preset(&self) -> Option<TuplePreset> {
        match *self {
            Criterion::Tuples(p) | Criterion::Theorem2(p) => Some(p),
            _ => None,
        }
    }
}

fn parse_params(name: &str, body: &str, allowed: &[&str]) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    if body.is_empty() {
        return Ok(out);
    }
    for part in body.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{name}: expected key=value, got {part:?}")))?;
        let key = key.trim();
        if !allowed.contains(&key) {
            return Err(Error::Parse(format!("{name}: unknown parameter {key:?}")));
        }
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{name}: {key} is not a number: {value:?}")))?;
        if !value.is_finite() {
            return Err(Error::Parse(format!("{name}: {key} must be finite")));
        }
        out.push((key.to_string(), value));
    }
    Ok(out)
}

fn lookup(params: &[(String, f64)], key: &str) -> Option<f64> {
    params.iter().rev().find(|(k, _)| k == key).map(|(_, v)| *v)
}

/// Pair parameters `<p>A`, `<p>B`, with a bare `<p>` setting both.
fn pair(params: &[(String, f64)], stem: &str, default: f64) -> (f64, f64) {
    let both = lookup(params, stem).unwrap_or(default);
    (
        lookup(params, &format!("{stem}A")).unwrap_or(both),
        lookup(params, &format!("{stem}B")).unwrap_or(both),
    )
}

fn parse_preset(name: &str, body: &str) -> Result<Option<TuplePreset>> {
    Ok(Some(match name {
        "vicente" => {
            parse_params(name, body, &[])?;
            TuplePreset::Vicente
        }
        "ccnr" => {
            parse_params(name, body, &[])?;
            TuplePreset::Ccnr
        }
        "esic" => {
            parse_params(name, body, &[])?;
            TuplePreset::Esic
        }
        "sarbicki" => {
            let p = parse_params(name, body, &["h", "hA", "hB"])?;
            let (ha, hb) = pair(&p, "h", 0.0);
            TuplePreset::Sarbicki { ha, hb }
        }
        "simplex" | "obs1" => {
            let p = parse_params(name, body, &["t", "tA", "tB"])?;
            if lookup(&p, "t").is_none() && (lookup(&p, "tA").is_none() || lookup(&p, "tB").is_none()) {
                return Err(Error::Parse(format!("{name}: needs t or both tA and tB")));
            }
            let (ta, tb) = pair(&p, "t", 0.0);
            TuplePreset::Simplex { ta, tb }
        }
        _ => return Ok(None),
    }))
}

impl FromStr for Criterion {
    type Err = Error;

    /// `vicente`, `sarbicki:hA=..,hB=..`, `simplex:tA=..,tB=..`, `ccnr`,
    /// `esic`, `obs2:t=..`, `obs3:tA=..,tB=..`, `thm2:<preset>`, `ppt`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, body) = s.split_once(':').unwrap_or((s, ""));
        if let Some(preset) = parse_preset(name, body)? {
            return Ok(Criterion::Tuples(preset));
        }
        match name {
            "obs2" => {
                let p = parse_params(name, body, &["t"])?;
                let t = lookup(&p, "t").ok_or_else(|| Error::Parse("obs2: needs t".into()))?;
                Ok(Criterion::Observation2 { t })
            }
            "obs3" => {
                let p = parse_params(name, body, &["t", "tA", "tB"])?;
                let (ta, tb) = pair(&p, "t", 0.0);
                Ok(Criterion::Observation3 { ta, tb })
            }
            "thm2" => {
                let (inner, inner_body) = body.split_once(':').unwrap_or((body, ""));
                parse_preset(inner, inner_body)?
                    .map(Criterion::Theorem2)
                    .ok_or_else(|| Error::Parse(format!("thm2: unknown tuple preset {inner:?}")))
            }
            "ppt" => {
                parse_params(name, body, &[])?;
                Ok(Criterion::Ppt)
            }
            other => Err(Error::Parse(format!("unknown criterion {other:?}"))),
        }
    }
}

impl fmt::Display for TuplePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TuplePreset::Vicente => f.write_str("vicente"),
            TuplePreset::Sarbicki { ha, hb } => write!(f, "sarbicki:hA={ha},hB={hb}"),
            TuplePreset::Simplex { ta, tb } => write!(f, "simplex:tA={ta},tB={tb}"),
            TuplePreset::Ccnr => f.write_str("ccnr"),
            TuplePreset::Esic => f.write_str("esic"),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Tuples(p) => write!(f, "{p}"),
            Criterion::Observation2 { t } => write!(f, "obs2:t={t}"),
            Criterion::Observation3 { ta, tb } => write!(f, "obs3:tA={ta},tB={tb}"),
            Criterion::Theorem2(p) => write!(f, "thm2:{p}"),
            Criterion::Ppt => f.write_str("ppt"),
        }
    }
}
