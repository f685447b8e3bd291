//! Acceptance suite: nine end-to-end checks, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines are always visible:
//! `cargo test --test acceptance`.

// Negated comparisons keep NaN on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod support;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::Value;

use separability::criteria::{self, Criterion, TuplePreset};
use separability::lft;
use separability::observables::{beta_bound, ccnr_trace, esic_trace, simplex_vertices, MeasurementTuple};
use separability::scan::{self, Experiment, Grid, ScanConfig};
use separability::states::{self, BipartiteState};
use separability::witness;
use separability::Error;

type Check = fn(&Value) -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn golden() -> Value {
    let text = include_str!("golden/regression.json");
    serde_json::from_str(text).expect("golden file parses")
}

fn golden_f64s(g: &Value, key: &str) -> Vec<f64> {
    g[key].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect()
}

fn golden_usizes(g: &Value, key: &str) -> Vec<usize> {
    g[key].as_array().unwrap().iter().map(|v| v.as_u64().unwrap() as usize).collect()
}

fn seed(g: &Value) -> u64 {
    g["seed"].as_u64().unwrap()
}

fn nondecreasing<T: PartialOrd>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] <= w[1])
}

// 1 ------------------------------------------------------------------------

fn simplex_exactness(_: &Value) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for n in [3usize, 8, 15, 24, 35, 63] {
        let v = simplex_vertices(n).map_err(|e| e.to_string())?;
        let g = v.transpose() * &v;
        for i in 0..=n {
            for j in 0..=n {
                let expect = if i == j { 1.0 } else { -1.0 / n as f64 };
                worst = worst.max((g[(i, j)] - expect).abs());
            }
        }
    }
    ensure!(worst < 1e-12, "Gram deviation {worst:e}");

    let r7 = 7f64.sqrt();
    let rows: [[f64; 9]; 8] = {
        let b = |x: f64| [x; 9];
        let mut m = [b(0.0); 8];
        let diag = [
            1.0,
            3.0 * r7 / 8.0,
            1.5 * (3.0f64 / 7.0).sqrt(),
            15f64.sqrt() / 4.0,
            3.0 / 10f64.sqrt(),
            0.75 * 1.5f64.sqrt(),
            3f64.sqrt() / 2.0,
            0.75,
        ];
        let tail = [
            -1.0 / 8.0,
            -3.0 / (8.0 * r7),
            -0.25 * (3.0f64 / 7.0).sqrt(),
            -0.25 * (3.0f64 / 5.0).sqrt(),
            -3.0 / (4.0 * 10f64.sqrt()),
            -0.25 * 1.5f64.sqrt(),
            -3f64.sqrt() / 4.0,
            -0.75,
        ];
        for (r, row) in m.iter_mut().enumerate() {
            row[r] = diag[r];
            for x in row.iter_mut().skip(r + 1) {
                *x = tail[r];
            }
        }
        m
    };
    let v = simplex_vertices(8).map_err(|e| e.to_string())?;
    let mut table_dev: f64 = 0.0;
    for (r, row) in rows.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            table_dev = table_dev.max((v[(r, c)] - x).abs());
        }
    }
    ensure!(table_dev < 1e-12, "n = 8 table deviation {table_dev:e}");
    Ok(format!("max Gram deviation {worst:.1e}, n = 8 table deviation {table_dev:.1e}"))
}

// 2 ------------------------------------------------------------------------

fn reduction_identities(_: &Value) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for da in 2..=5usize {
        for db in 2..=5usize {
            let (a, b) = (da as f64, db as f64);
            let root = ((a * a - 1.0) * (b * b - 1.0)).sqrt();
            let (ha, hb) = (0.7, 1.3);
            let cases = [
                (TuplePreset::Vicente, (4.0 * (a - 1.0) * (b - 1.0) / (a * b)).sqrt()),
                (
                    TuplePreset::Sarbicki { ha, hb },
                    (4.0 * (a - 1.0 + ha * ha) * (b - 1.0 + hb * hb) / (a * b)).sqrt(),
                ),
                (TuplePreset::Ccnr, 2.0 * a * b / root),
                (TuplePreset::Esic, 4.0 * a * b / root),
                (
                    TuplePreset::Simplex { ta: 0.4, tb: 2.2 },
                    (0.16 + 2.0 * a / (a + 1.0)).sqrt() * (4.84 + 2.0 * b / (b + 1.0)).sqrt(),
                ),
            ];
            let mixed = BipartiteState::maximally_mixed(da, db);
            for (preset, expect) in cases {
                let (ta, tb) = preset.tuples(da, db).map_err(|e| e.to_string())?;
                let kappa = beta_bound(&ta).unwrap().kappa * beta_bound(&tb).unwrap().kappa;
                let report = Criterion::Tuples(preset).evaluate(&mixed).map_err(|e| e.to_string())?;
                worst = worst.max((kappa - expect).abs()).max((report.bound - expect).abs());
                count += 1;
            }
        }
    }
    ensure!(worst < 1e-12, "bound deviation {worst:e}");
    let mixed = BipartiteState::maximally_mixed(3, 3);
    let ccnr = criteria::ccnr_check(&mixed).unwrap().bound;
    let esic = criteria::esic_check(&mixed).unwrap().bound;
    ensure!((ccnr - 2.25).abs() < 1e-12 && (esic - 4.5).abs() < 1e-12, "3x3 bounds {ccnr} {esic}");
    Ok(format!("{count} preset bounds, max deviation {worst:.1e}; 3x3 CCNR {ccnr:.12}, ESIC {esic:.12}"))
}

// 3 ------------------------------------------------------------------------

fn ccnr_equivalence(g: &Value) -> Result<String, String> {
    let mut flagged = 0;
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let s = states::random_hs(3, 3, seed(g), i);
        let report = criteria::ccnr_check(&s).map_err(|e| e.to_string())?;
        // ‖χ‖_tr = 2‖R(ρ)‖_tr for the realigned matrix.
        let chi_norm = 2.0 * support::trace_norm_complex(&support::realign(s.rho(), 3, 3));
        let direct_flag = chi_norm > 2.0;
        ensure!(
            report.is_entangled() == direct_flag,
            "state {i}: criterion {} vs ‖χ‖ = {chi_norm}",
            report.verdict
        );
        let direct_margin = 9.0 / 8.0 * (chi_norm - 2.0);
        worst = worst.max((report.margin - direct_margin).abs());
        flagged += direct_flag as usize;
    }
    ensure!(worst < 1e-9, "margin deviation {worst:e}");
    Ok(format!("{flagged}/100 flagged by both routes, max margin deviation {worst:.1e}"))
}

// 4 ------------------------------------------------------------------------

fn werner_exactness(_: &Value) -> Result<String, String> {
    let grid = Grid::new(-1.0, 1.0, 201).unwrap().values();
    let step = 0.01;
    let mut notes = Vec::new();
    for d in [2usize, 3, 5, 8] {
        let mut sarbicki_flagged = Vec::new();
        for &phi in &grid {
            let s = states::werner(d, phi).map_err(|e| e.to_string())?;
            for t in [0.5, 1.0, 2.0] {
                let r = criteria::observation2_check(&s, t).map_err(|e| e.to_string())?;
                ensure!(r.is_entangled() == (phi < 0.0), "obs2 d={d} t={t} phi={phi}: {}", r.verdict);
            }
            if criteria::sarbicki_check(&s, 0.0, 0.0).map_err(|e| e.to_string())?.is_entangled() {
                sarbicki_flagged.push(phi);
            }
        }
        let threshold = -((d as f64) - 2.0) / d as f64;
        for &phi in &grid {
            let flagged = sarbicki_flagged.contains(&phi);
            if phi < threshold - step {
                ensure!(flagged, "sarbicki d={d} misses phi={phi}");
            }
            if phi >= threshold + step {
                ensure!(!flagged, "sarbicki d={d} flags phi={phi}");
            }
        }
        let edge = sarbicki_flagged.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        notes.push(format!("d={d}: edge {edge:.2} vs {threshold:.3}"));
    }
    Ok(format!("obs2 exact on 4x201x3 cells; sarbicki {}", notes.join(", ")))
}

// 5 ------------------------------------------------------------------------

fn bound_entangled(g: &Value) -> Result<String, String> {
    let ts = golden_f64s(g, "horodecki_t");
    let mut config = ScanConfig::new(Experiment::Horodecki);
    config.ts = ts.clone();
    config.seed = seed(g);

    config.p_grid = Grid::new(0.0, 1.0, 101).unwrap();
    let rows = scan::horodecki_scan(&config).map_err(|e| e.to_string())?;
    let unit: Vec<usize> = scan::horodecki_counts(&config, &rows).iter().map(|c| c.1).collect();
    ensure!(nondecreasing(&unit), "unit-grid counts not monotone: {unit:?}");
    ensure!(unit == golden_usizes(g, "horodecki_unit_grid_counts"), "unit-grid counts changed: {unit:?}");
    for row in rows.iter().filter(|r| r.t == ts[0]) {
        let ccnr = criteria::ccnr_check(&states::horodecki(row.s, row.p).unwrap()).unwrap();
        ensure!(ccnr.is_entangled() == row.detected, "t=√3/2 row differs from CCNR at {row:?}");
    }

    config.p_grid = Grid::new(0.99, 1.0, 101).unwrap();
    let rows = scan::horodecki_scan(&config).map_err(|e| e.to_string())?;
    let zoom: Vec<usize> = scan::horodecki_counts(&config, &rows).iter().map(|c| c.1).collect();
    ensure!(nondecreasing(&zoom), "zoomed counts not monotone: {zoom:?}");
    ensure!(zoom == golden_usizes(g, "horodecki_zoom_grid_counts"), "zoomed counts changed: {zoom:?}");

    let mut upb = ScanConfig::new(Experiment::Upb);
    upb.ts = ts.clone();
    let thresholds = scan::upb_scan(&upb).map_err(|e| e.to_string())?;
    let p_star: Vec<f64> = thresholds.iter().map(|r| r.p_star.unwrap_or(f64::INFINITY)).collect();
    ensure!(p_star[3] <= p_star[0], "p*(ESIC) {} > p*(CCNR) {}", p_star[3], p_star[0]);
    for (got, want) in p_star.iter().zip(golden_f64s(g, "upb_p_star")) {
        ensure!((got - want).abs() < 1e-9, "UPB threshold changed: {p_star:?}");
    }

    let mut chess = ScanConfig::new(Experiment::Chessboard);
    chess.ts = ts;
    chess.samples = 5000;
    chess.seed = seed(g);
    let detected: Vec<usize> = scan::chessboard_scan(&chess)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|r| r.detected)
        .collect();
    ensure!(nondecreasing(&detected), "chessboard counts not monotone: {detected:?}");
    ensure!(detected == golden_usizes(g, "chessboard_detected"), "chessboard counts changed: {detected:?}");

    Ok(format!(
        "Horodecki unit grid {unit:?}, p∈[0.99,1] {zoom:?}; UPB p* CCNR {:.6} ESIC {:.6}; chessboard {detected:?}/5000",
        p_star[0], p_star[3]
    ))
}

// 6 ------------------------------------------------------------------------

fn flagged_corpus(g: &Value) -> Vec<(String, BipartiteState, TuplePreset)> {
    let s = seed(g);
    let mut corpus: Vec<(String, BipartiteState, TuplePreset)> = vec![
        ("bell".into(), states::max_entangled(2).unwrap(), TuplePreset::Vicente),
        ("singlet".into(), states::singlet(), TuplePreset::Vicente),
        ("werner3".into(), states::werner(3, -1.0).unwrap(), TuplePreset::Vicente),
        ("werner5".into(), states::werner(5, -0.9).unwrap(), TuplePreset::Sarbicki { ha: 0.0, hb: 0.0 }),
        ("max3".into(), states::max_entangled(3).unwrap(), TuplePreset::Esic),
        ("upb".into(), states::upb_tiles(1.0).unwrap(), TuplePreset::Esic),
        ("horodecki".into(), states::horodecki(0.5, 1.0).unwrap(), TuplePreset::Simplex { ta: 1.5, tb: 1.5 }),
    ];
    for i in 0..40 {
        corpus.push((format!("chessboard{i}"), states::random_chessboard(s, i), TuplePreset::Esic));
    }
    for i in 0..60 {
        corpus.push((format!("hs33-{i}"), states::random_hs(3, 3, s, i), TuplePreset::Ccnr));
        corpus.push((format!("hs22-{i}"), states::random_hs(2, 2, s, i), TuplePreset::Sarbicki { ha: 1.0, hb: 0.5 }));
    }
    for i in 0..400 {
        corpus.push((format!("hs23-{i}"), states::random_hs(2, 3, s, i), TuplePreset::Ccnr));
    }
    corpus
}

fn witness_consistency(g: &Value) -> Result<String, String> {
    let mut flagged = 0;
    let mut worst: f64 = 0.0;
    let mut witnesses: Vec<((usize, usize), witness::Witness)> = Vec::new();
    for (name, state, preset) in flagged_corpus(g) {
        let (a, b) = preset.tuples(state.da(), state.db()).unwrap();
        let report = criteria::theorem1_check(&state, &a, &b).map_err(|e| e.to_string())?;
        if !report.is_entangled() {
            continue;
        }
        flagged += 1;
        let w = witness::build_witness(&state, &a, &b).map_err(|e| e.to_string())?;
        let value = w.expectation(&state).map_err(|e| e.to_string())?;
        worst = worst.max((value - (report.bound - report.statistic)).abs());
        ensure!(value < 0.0, "{name}: witness value {value} not negative");
        let dims = state.dims();
        if witnesses.iter().filter(|(d, _)| *d == dims).count() < 10 {
            witnesses.push((dims, w));
        }
    }
    ensure!(worst < 1e-9, "Tr[Wρ] deviates from κ − ‖C‖ by {worst:e}");

    let s = seed(g);
    let mut min_value = f64::INFINITY;
    let mut evaluations = 0usize;
    for dims in [(2usize, 2usize), (2, 3), (3, 3)] {
        let ws: Vec<&witness::Witness> = witnesses.iter().filter(|(d, _)| *d == dims).map(|(_, w)| w).collect();
        ensure!(ws.len() == 10, "only {} witnesses for {dims:?}", ws.len());
        let mins: Vec<f64> = (0..10_000u64)
            .into_par_iter()
            .map(|i| {
                let k = 1 + (i as usize) % (dims.0 * dims.1 + 3);
                let sep = states::random_separable(dims.0, dims.1, k, s, i).unwrap();
                ws.iter().map(|w| w.expectation(&sep).unwrap()).fold(f64::INFINITY, f64::min)
            })
            .collect();
        evaluations += mins.len() * ws.len();
        min_value = mins.into_iter().fold(min_value, f64::min);
    }
    ensure!(min_value >= -1e-9, "separable expectation {min_value}");
    Ok(format!(
        "{flagged} flagged states, max |Tr[Wρ] − (κ − ‖C‖)| {worst:.1e}; {evaluations} separable evaluations, min {min_value:.4}"
    ))
}

// 7 ------------------------------------------------------------------------

fn normal_form_contract(g: &Value) -> Result<String, String> {
    let s = seed(g);
    let jobs: Vec<(usize, usize, u64)> = (0..500u64)
        .map(|i| match i % 3 {
            0 => (2, 2, i),
            1 => (2, 3, i),
            _ => (3, 3, i),
        })
        .collect();
    let results: Vec<Result<(usize, f64), String>> = jobs
        .par_iter()
        .map(|&(da, db, i)| {
            let state = states::random_hs(da, db, s, i);
            let nf = lft::normal_form_default(&state).map_err(|e| format!("{da}x{db} #{i}: {e}"))?;
            let residual = support::marginal_deviation(nf.rho_tilde.rho(), da, db);
            if residual >= 1e-10 || nf.iterations > 1000 {
                return Err(format!("{da}x{db} #{i}: residual {residual:e} after {}", nf.iterations));
            }
            let mut worst: f64 = 0.0;
            let pairs = [
                (MeasurementTuple::ccnr(da).unwrap(), MeasurementTuple::esic(db).unwrap()),
                (MeasurementTuple::simplex(da, 0.9).unwrap(), MeasurementTuple::simplex(db, 2.5).unwrap()),
            ];
            for (a, b) in &pairs {
                let c = criteria::correlation_matrix_direct(&nf.rho_tilde, a, b).map_err(|e| e.to_string())?;
                let lhs = support::trace_norm_real(&c);
                let stat = lft::theorem2_from_normal_form(&nf, a, b).map_err(|e| e.to_string())?.statistic;
                let rhs = a.trace_norm() * b.trace_norm() / (da * db) as f64 + stat;
                worst = worst.max((lhs - rhs).abs());
            }
            if worst >= 1e-8 {
                return Err(format!("{da}x{db} #{i}: block identity off by {worst:e}"));
            }
            Ok((nf.iterations, worst))
        })
        .collect();
    let mut max_iter = 0;
    let mut worst: f64 = 0.0;
    for r in results {
        let (it, w) = r?;
        max_iter = max_iter.max(it);
        worst = worst.max(w);
    }

    let mut pairs = 0;
    for da in 2..=8usize {
        for db in 2..=8usize {
            let ccnr = lft::simplex_kappa(da, db, ccnr_trace(da), ccnr_trace(db));
            let esic = lft::simplex_kappa(da, db, esic_trace(da), esic_trace(db));
            ensure!((ccnr - lft::ccnr_kappa(da, db)).abs() < 1e-12, "CCNR κ closed form at {da}x{db}");
            ensure!((esic - lft::esic_kappa(da, db)).abs() < 1e-12, "ESIC κ closed form at {da}x{db}");
            ensure!(esic <= ccnr + 1e-12, "ESIC κ {esic} > CCNR κ {ccnr} at {da}x{db}");
            let equal = (ccnr - esic).abs() <= 1e-12;
            ensure!(equal == (da == db), "equality pattern broken at {da}x{db}: {ccnr} vs {esic}");
            pairs += 1;
        }
    }
    Ok(format!(
        "500 normal forms, max {max_iter} iterations, block identity within {worst:.1e}; ESIC ≤ CCNR on {pairs} dimension pairs"
    ))
}

// 8 ------------------------------------------------------------------------

fn family_convergence(g: &Value) -> Result<String, String> {
    let mut config = ScanConfig::new(Experiment::Random);
    config.dims = vec![2, 3, 5];
    config.ts = vec![5.0];
    config.hs = vec![5.0];
    config.samples = 2000;
    config.seed = seed(g);
    let rows = scan::random_scan(&config).map_err(|e| e.to_string())?;
    let fraction = |d: usize, family: scan::Family| {
        rows.iter().find(|r| r.dim == d && r.criterion == family).unwrap().fraction
    };
    let (o2, o3, o5) = (
        fraction(2, scan::Family::Obs1),
        fraction(3, scan::Family::Obs1),
        fraction(5, scan::Family::Obs1),
    );
    let (s2, s3, s5) = (
        fraction(2, scan::Family::Sarbicki),
        fraction(3, scan::Family::Sarbicki),
        fraction(5, scan::Family::Sarbicki),
    );
    ensure!((o3 - s3).abs() < 0.02, "3x3 fractions differ: obs1 {o3} sarbicki {s3}");
    ensure!(o3 > o2 && o3 > o5, "obs1 fractions not peaked at 3: {o2} {o3} {o5}");
    ensure!(s3 > s2 && s3 > s5, "sarbicki fractions not peaked at 3: {s2} {s3} {s5}");
    let frozen = &g["random_fractions"];
    for (d, o, s) in [(2, o2, s2), (3, o3, s3), (5, o5, s5)] {
        let key = d.to_string();
        ensure!(
            frozen["obs1_t5"][&key].as_f64() == Some(o) && frozen["sarbicki_h5"][&key].as_f64() == Some(s),
            "fractions at {d}x{d} changed: {o} {s}"
        );
    }
    Ok(format!("obs1(t=5) 2/3/5: {o2}/{o3}/{o5}; sarbicki(h=5): {s2}/{s3}/{s5}"))
}

// 9 ------------------------------------------------------------------------

fn one_sidedness(g: &Value) -> Result<String, String> {
    let s = seed(g);
    let r3 = 3f64.sqrt();
    let mut list: Vec<Criterion> = vec![
        Criterion::Tuples(TuplePreset::Vicente),
        Criterion::Tuples(TuplePreset::Ccnr),
        Criterion::Tuples(TuplePreset::Esic),
        Criterion::Ppt,
        Criterion::Observation3 { ta: 0.0, tb: 0.0 },
        Criterion::Observation3 { ta: 1.0, tb: r3 },
        Criterion::Theorem2(TuplePreset::Ccnr),
        Criterion::Theorem2(TuplePreset::Esic),
        Criterion::Theorem2(TuplePreset::Sarbicki { ha: 1.0, hb: 1.0 }),
    ];
    for h in [0.0, 1.0, 5.0] {
        list.push(Criterion::Tuples(TuplePreset::Sarbicki { ha: h, hb: h }));
    }
    for t in [0.0, 1.0, 5.0] {
        list.push(Criterion::Tuples(TuplePreset::Simplex { ta: t, tb: t }));
    }
    let equal_dims: Vec<Criterion> = [0.5, 1.0, 2.0].iter().map(|&t| Criterion::Observation2 { t }).collect();

    let jobs: Vec<(usize, usize, u64)> = (0..10_000u64)
        .map(|i| match i % 3 {
            0 => (2, 2, i),
            1 => (2, 3, i),
            _ => (3, 3, i),
        })
        .collect();
    // Mixtures of exactly d_A + d_B − 2 products sit on the boundary of the
    // set that admits a normal form; whitening still converges there, only
    // sublinearly. Those runs are re-evaluated with a larger budget.
    let extended_budget = 200_000;
    let outcomes: Vec<Result<(usize, usize), String>> = jobs
        .par_iter()
        .map(|&(da, db, i)| {
            let k = 1 + (i as usize / 3) % (da * db + 3);
            let state = states::random_separable(da, db, k, s, i).map_err(|e| e.to_string())?;
            let extra = if da == db { &equal_dims[..] } else { &[][..] };
            let mut evaluated = 0;
            let mut extended = 0;
            for c in list.iter().chain(extra) {
                let r = match c.evaluate(&state) {
                    Err(Error::NoConvergence { .. }) => {
                        extended += 1;
                        let post = c.post_filter().expect("only filtering criteria iterate");
                        lft::pipeline_with(&state, &post, lft::NORMAL_FORM_TOL, extended_budget)
                    }
                    other => other,
                }
                .map_err(|e| format!("{c} on {da}x{db} #{i} (k={k}): {e}"))?;
                if r.is_entangled() {
                    return Err(format!("{c} flagged separable {da}x{db} #{i} (k={k}), margin {}", r.margin));
                }
                evaluated += 1;
            }
            Ok((evaluated, extended))
        })
        .collect();
    let (mut total, mut extended) = (0, 0);
    for o in outcomes {
        let (t, e) = o?;
        total += t;
        extended += e;
    }
    Ok(format!(
        "10000 separable mixtures, {total} criterion evaluations, none Entangled; \
         {extended} filtering runs needed more than {} iterations",
        lft::NORMAL_FORM_MAX_ITER
    ))
}

// ------------------------------------------------------------------------

fn main() {
    let checks: [(&str, Check, Duration); 9] = [
        ("simplex exactness", simplex_exactness, Duration::from_secs(1)),
        ("criterion-reduction identities", reduction_identities, Duration::from_secs(1)),
        ("CCNR equivalence", ccnr_equivalence, Duration::from_secs(10)),
        ("Werner exactness", werner_exactness, Duration::from_secs(30)),
        ("bound-entangled detection", bound_entangled, Duration::from_secs(300)),
        ("witness consistency", witness_consistency, Duration::from_secs(120)),
        ("normal-form contract", normal_form_contract, Duration::from_secs(120)),
        ("criteria-family convergence", family_convergence, Duration::from_secs(180)),
        ("one-sidedness", one_sidedness, Duration::from_secs(180)),
    ];
    let g = golden();
    let mut failures = 0;
    for (i, (name, check, budget)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| check(&g)))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())))));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *budget => Err(format!("{detail} (over the {budget:?} budget)")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => {
                failures += 1;
                ("FAIL", e.clone())
            }
        };
        println!("{tag} A{} {name} [{:.2}s]: {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
