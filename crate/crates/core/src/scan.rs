//! Parameter scans over the state families, emitted as CSV.
//!
//! Every scan is a pure function of its config: per-cell work is fanned
//! out with rayon and gathered back in grid order, so identical configs
//! give byte-identical output at any thread count.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{self, BipartiteBloch};
use crate::criteria::{self, Verdict, VERDICT_TOL};
use crate::error::{Error, Result};
use crate::observables::MeasurementTuple;
use crate::states::{self, BipartiteState};

pub const DEFAULT_SEED: u64 = 20240601;
pub const DEFAULT_SAMPLES: usize = 2000;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "ED_THREADS";

/// Inclusive linear grid `start:end:points`.
///
/// Config files may give it as that string or as a table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr")]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, end: f64, points: usize) -> Result<Self> {
        let grid = Self { start, end, points };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::InvalidConfig("grid needs at least one point".into()));
        }
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(Error::InvalidConfig("grid endpoints must be finite".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.end } else { self.start + step * i as f64 })
            .collect()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GridRepr {
    Text(String),
    Table { start: f64, end: f64, points: usize },
}

impl TryFrom<GridRepr> for Grid {
    type Error = Error;

    fn try_from(repr: GridRepr) -> Result<Self> {
        match repr {
            GridRepr::Text(s) => s.parse(),
            GridRepr::Table { start, end, points } => Grid::new(start, end, points),
        }
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Parse(format!("grid must be start:end:points, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].trim().parse().map_err(|_| bad())?;
        let end = parts[1].trim().parse().map_err(|_| bad())?;
        let points = parts[2].trim().parse().map_err(|_| bad())?;
        Grid::new(start, end, points)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Horodecki,
    Random,
    Werner,
    Upb,
    Chessboard,
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "horodecki" => Experiment::Horodecki,
            "random" => Experiment::Random,
            "werner" => Experiment::Werner,
            "upb" => Experiment::Upb,
            "chessboard" => Experiment::Chessboard,
            other => return Err(Error::Parse(format!("unknown experiment {other:?}"))),
        })
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Horodecki => "horodecki",
            Experiment::Random => "random",
            Experiment::Werner => "werner",
            Experiment::Upb => "upb",
            Experiment::Chessboard => "chessboard",
        })
    }
}

/// Settings for one scan. Fields a given experiment does not use are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub experiment: Experiment,
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default = "default_unit_grid")]
    pub s_grid: Grid,
    #[serde(default = "default_p_grid")]
    pub p_grid: Grid,
    #[serde(default = "default_phi_grid")]
    pub phi_grid: Grid,
    #[serde(default = "default_ts")]
    pub ts: Vec<f64>,
    #[serde(default)]
    pub hs: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_dims() -> Vec<usize> {
    vec![3]
}
fn default_unit_grid() -> Grid {
    Grid { start: 0.0, end: 1.0, points: 101 }
}
/// Detection in the noisy Horodecki family only happens close to `p = 1`.
fn default_p_grid() -> Grid {
    Grid { start: 0.99, end: 1.0, points: 101 }
}
fn default_phi_grid() -> Grid {
    Grid { start: -1.0, end: 1.0, points: 201 }
}
fn default_ts() -> Vec<f64> {
    let r3 = 3f64.sqrt();
    vec![r3 / 2.0, 1.2, 1.5, r3]
}
fn default_samples() -> usize {
    DEFAULT_SAMPLES
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl ScanConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            dims: default_dims(),
            s_grid: default_unit_grid(),
            p_grid: default_p_grid(),
            phi_grid: default_phi_grid(),
            ts: default_ts(),
            hs: Vec::new(),
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            out: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        for grid in [&self.s_grid, &self.p_grid, &self.phi_grid] {
            grid.validate()?;
        }
        if self.samples == 0 {
            return Err(Error::InvalidConfig("sample count must be at least 1".into()));
        }
        if self.ts.iter().chain(&self.hs).any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig("t and h values must be finite".into()));
        }
        match self.experiment {
            Experiment::Horodecki | Experiment::Upb | Experiment::Chessboard => {
                if self.ts.is_empty() {
                    return Err(Error::InvalidConfig("t list is empty".into()));
                }
                let in_unit = |g: &Grid| (0.0..=1.0).contains(&g.start) && (0.0..=1.0).contains(&g.end);
                if self.experiment == Experiment::Horodecki && !(in_unit(&self.s_grid) && in_unit(&self.p_grid)) {
                    return Err(Error::InvalidConfig("s and p grids must lie in [0, 1]".into()));
                }
            }
            Experiment::Random | Experiment::Werner => {
                if self.ts.is_empty() && self.hs.is_empty() {
                    return Err(Error::InvalidConfig("need at least one t or h value".into()));
                }
                if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
                    return Err(Error::InvalidConfig("dimensions must be at least 2".into()));
                }
                if self.experiment == Experiment::Werner
                    && (self.phi_grid.start < -1.0 || self.phi_grid.end > 1.0)
                {
                    return Err(Error::InvalidConfig("phi grid must lie in [-1, 1]".into()));
                }
            }
        }
        Ok(())
    }

    fn metadata(&self) -> Vec<String> {
        let list = |xs: &[f64]| xs.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        let mut lines = vec![
            format!("experiment={}", self.experiment),
            format!("version={}", env!("CARGO_PKG_VERSION")),
            format!("seed={}", self.seed),
        ];
        match self.experiment {
            Experiment::Horodecki => {
                lines.push(format!("s_grid={} p_grid={} t=[{}]", self.s_grid, self.p_grid, list(&self.ts)));
            }
            Experiment::Random => lines.push(format!(
                "dims={:?} samples={} t=[{}] h=[{}]",
                self.dims,
                self.samples,
                list(&self.ts),
                list(&self.hs)
            )),
            Experiment::Werner => lines.push(format!(
                "dims={:?} phi_grid={} t=[{}] h=[{}]",
                self.dims,
                self.phi_grid,
                list(&self.ts),
                list(&self.hs)
            )),
            Experiment::Upb => lines.push(format!("t=[{}]", list(&self.ts))),
            Experiment::Chessboard => lines.push(format!("samples={} t=[{}]", self.samples, list(&self.ts))),
        }
        lines
    }
}

/// Runs `f` on a pool sized by `ED_THREADS` when set, else rayon's default.
pub fn with_thread_limit<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match std::env::var(THREADS_ENV) {
        Ok(value) => {
            let n: usize = value
                .trim()
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::InvalidConfig(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

fn simplex_pair(da: usize, db: usize, t: f64) -> Result<(MeasurementTuple, MeasurementTuple)> {
    Ok((MeasurementTuple::simplex(da, t)?, MeasurementTuple::simplex(db, t)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HorodeckiRow {
    pub s: f64,
    pub p: f64,
    pub t: f64,
    pub statistic: f64,
    pub bound: f64,
    pub detected: bool,
}

/// Simplex criterion with equal traces `t` on the noisy Horodecki family.
pub fn horodecki_scan(config: &ScanConfig) -> Result<Vec<HorodeckiRow>> {
    config.validate()?;
    let tuples: Vec<_> = config.ts.iter().map(|&t| simplex_pair(3, 3, t)).collect::<Result<_>>()?;
    let cells: Vec<(f64, f64)> = config
        .s_grid
        .values()
        .into_iter()
        .flat_map(|s| config.p_grid.values().into_iter().map(move |p| (s, p)))
        .collect();
    let per_cell: Vec<Vec<HorodeckiRow>> = cells
        .par_iter()
        .map(|&(s, p)| {
            let bb = bloch::decompose_bipartite(&states::horodecki(s, p)?)?;
            config
                .ts
                .iter()
                .zip(&tuples)
                .map(|(&t, (a, b))| {
                    let r = criteria::theorem1_from_bloch(&bb, a, b)?;
                    Ok(HorodeckiRow {
                        s,
                        p,
                        t,
                        statistic: r.statistic,
                        bound: r.bound,
                        detected: r.is_entangled(),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}

/// Detected-cell count per `t`, in the order of `config.ts`.
pub fn horodecki_counts(config: &ScanConfig, rows: &[HorodeckiRow]) -> Vec<(f64, usize)> {
    config
        .ts
        .iter()
        .map(|&t| (t, rows.iter().filter(|r| r.t == t && r.detected).count()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Simplex tuples with equal traces on both sides.
    Obs1,
    Sarbicki,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomRow {
    pub dim: usize,
    pub samples: usize,
    pub param: f64,
    pub criterion: Family,
    pub fraction: f64,
}

fn detected_from_bloch(bb: &BipartiteBloch, a: &MeasurementTuple, b: &MeasurementTuple) -> Result<bool> {
    Ok(criteria::theorem1_from_bloch(bb, a, b)?.is_entangled())
}

/// Fraction of Hilbert–Schmidt random `d×d` states flagged by the simplex
/// family at each `t` and by the generator family at each `h`.
pub fn random_scan(config: &ScanConfig) -> Result<Vec<RandomRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &d in &config.dims {
        let mut settings: Vec<(Family, f64, MeasurementTuple)> = Vec::new();
        for &t in &config.ts {
            settings.push((Family::Obs1, t, MeasurementTuple::simplex(d, t)?));
        }
        for &h in &config.hs {
            settings.push((Family::Sarbicki, h, MeasurementTuple::sarbicki(d, h)?));
        }
        let flags: Vec<Vec<bool>> = (0..config.samples as u64)
            .into_par_iter()
            .map(|i| {
                let bb = bloch::decompose_bipartite(&states::random_hs(d, d, config.seed, i))?;
                settings
                    .iter()
                    .map(|(_, _, tuple)| detected_from_bloch(&bb, tuple, tuple))
                    .collect()
            })
            .collect::<Result<_>>()?;
        for (k, (family, param, _)) in settings.iter().enumerate() {
            let hits = flags.iter().filter(|f| f[k]).count();
            rows.push(RandomRow {
                dim: d,
                samples: config.samples,
                param: *param,
                criterion: *family,
                fraction: hits as f64 / config.samples as f64,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WernerRow {
    pub d: usize,
    pub phi: f64,
    pub criterion: String,
    pub param: f64,
    pub statistic: f64,
    pub bound: f64,
    pub verdict: Verdict,
}

/// Verdicts of the generator family (each `h`), the simplex family and the
/// equal-dimension simplex pair (each `t`) along the Werner line.
pub fn werner_scan(config: &ScanConfig) -> Result<Vec<WernerRow>> {
    config.validate()?;
    let cells: Vec<(usize, f64)> = config
        .dims
        .iter()
        .flat_map(|&d| config.phi_grid.values().into_iter().map(move |phi| (d, phi)))
        .collect();
    let per_cell: Vec<Vec<WernerRow>> = cells
        .par_iter()
        .map(|&(d, phi)| {
            let bb = bloch::decompose_bipartite(&states::werner(d, phi)?)?;
            let mut out = Vec::new();
            let mut push = |criterion: &str, param: f64, r: criteria::CriterionReport| {
                out.push(WernerRow {
                    d,
                    phi,
                    criterion: criterion.into(),
                    param,
                    statistic: r.statistic,
                    bound: r.bound,
                    verdict: r.verdict,
                })
            };
            for &h in &config.hs {
                let tuple = MeasurementTuple::sarbicki(d, h)?;
                push("sarbicki", h, criteria::theorem1_from_bloch(&bb, &tuple, &tuple)?);
            }
            for &t in &config.ts {
                let tuple = MeasurementTuple::simplex(d, t)?;
                push("obs1", t, criteria::theorem1_from_bloch(&bb, &tuple, &tuple)?);
                push("obs2", t, criteria::observation2_from_bloch(&bb, &tuple));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpbRow {
    pub t: f64,
    /// Smallest noise weight `p` at which the simplex criterion flags the
    /// noisy UPB state; absent when even `p = 1` is not flagged.
    pub p_star: Option<f64>,
    pub statistic_at_one: f64,
    pub bound: f64,
}

/// The statistic is convex in `p` and not above the bound at `p = 0`, so
/// the detected set is an interval `(p*, 1]`, located by bisection.
pub fn upb_threshold(t: f64) -> Result<UpbRow> {
    let (a, b) = simplex_pair(3, 3, t)?;
    let margin = |p: f64| -> Result<(f64, f64, f64)> {
        let r = criteria::theorem1_check(&states::upb_tiles(p)?, &a, &b)?;
        Ok((r.margin, r.statistic, r.bound))
    };
    let (m1, statistic_at_one, bound) = margin(1.0)?;
    if m1 <= VERDICT_TOL {
        return Ok(UpbRow { t, p_star: None, statistic_at_one, bound });
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if margin(mid)?.0 > VERDICT_TOL {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(UpbRow { t, p_star: Some(hi), statistic_at_one, bound })
}

pub fn upb_scan(config: &ScanConfig) -> Result<Vec<UpbRow>> {
    config.validate()?;
    config.ts.par_iter().map(|&t| upb_threshold(t)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChessboardRow {
    pub t: f64,
    pub samples: usize,
    pub detected: usize,
    pub fraction: f64,
}

/// Detection counts of the simplex family on seeded random chessboard states.
pub fn chessboard_scan(config: &ScanConfig) -> Result<Vec<ChessboardRow>> {
    config.validate()?;
    let tuples: Vec<_> = config.ts.iter().map(|&t| simplex_pair(3, 3, t)).collect::<Result<_>>()?;
    let flags: Vec<Vec<bool>> = (0..config.samples as u64)
        .into_par_iter()
        .map(|i| {
            let bb = bloch::decompose_bipartite(&states::random_chessboard(config.seed, i))?;
            tuples.iter().map(|(a, b)| detected_from_bloch(&bb, a, b)).collect()
        })
        .collect::<Result<_>>()?;
    Ok(config
        .ts
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let detected = flags.iter().filter(|f| f[k]).count();
            ChessboardRow {
                t,
                samples: config.samples,
                detected,
                fraction: detected as f64 / config.samples as f64,
            }
        })
        .collect())
}

/// Writes `#`-prefixed metadata lines, then a header row and the records.
pub fn write_csv<W: Write, R: Serialize>(out: &mut W, metadata: &[String], rows: &[R]) -> Result<()> {
    for line in metadata {
        writeln!(out, "# {line}")?;
    }
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_string<R: Serialize>(config: &ScanConfig, rows: &[R]) -> Result<String> {
    let mut buffer = Vec::new();
    write_csv(&mut buffer, &config.metadata(), rows)?;
    String::from_utf8(buffer).map_err(|e| Error::Parse(e.to_string()))
}

/// Runs the configured experiment and renders its CSV.
pub fn run_scan(config: &ScanConfig) -> Result<String> {
    with_thread_limit(|| match config.experiment {
        Experiment::Horodecki => csv_string(config, &horodecki_scan(config)?),
        Experiment::Random => csv_string(config, &random_scan(config)?),
        Experiment::Werner => csv_string(config, &werner_scan(config)?),
        Experiment::Upb => csv_string(config, &upb_scan(config)?),
        Experiment::Chessboard => csv_string(config, &chessboard_scan(config)?),
    })?
}

/// States used by a scan that are PPT; any detection on them beats PPT.
pub fn is_ppt(state: &BipartiteState) -> Result<bool> {
    Ok(criteria::ppt_check(state)? == Verdict::Inconclusive)
}
