//! Command-line front end.
//!
//! Exit codes: 0 ran (no entanglement certified), 3 some criterion flagged
//! the state, 2 invalid input, 1 a computation failed to converge.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::criteria::{Criterion, CriterionReport, TuplePreset};
use crate::error::{Error, Result};
use crate::io::{self, NormalFormOutput, WitnessOutput};
use crate::lft;
use crate::observables::simplex_vertices;
use crate::scan::{self, Experiment, Grid, ScanConfig};
use crate::states::{self, BipartiteState};
use crate::witness;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ENTANGLED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "separability", version, about = "Correlation-matrix entanglement criteria")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one or more criteria on a state file.
    Check {
        #[arg(long)]
        state: PathBuf,
        /// e.g. vicente, sarbicki:hA=1,hB=1, simplex:t=1.5, ccnr, esic,
        /// obs2:t=1, obs3, thm2:esic, ppt. Repeatable.
        #[arg(long, default_value = "vicente")]
        criterion: Vec<String>,
    },
    /// Build the witness for a state and a tuple preset.
    Witness {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value = "vicente")]
        criterion: String,
    },
    /// Filter a state to its normal form.
    NormalForm {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = lft::NORMAL_FORM_TOL)]
        tol: f64,
        #[arg(long, default_value_t = lft::NORMAL_FORM_MAX_ITER)]
        max_iter: usize,
    },
    /// Write a state from one of the built-in families.
    Gen(GenArgs),
    /// Vertices of the regular n-simplex as CSV, one column per vertex.
    Simplex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameter scans, CSV output.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyName {
    Werner,
    MaxEntangled,
    Singlet,
    MaximallyMixed,
    Horodecki,
    Upb,
    Chessboard,
    RandomChessboard,
    RandomHs,
    Separable,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long = "dA")]
    pub da: Option<usize>,
    #[arg(long = "dB")]
    pub db: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Chessboard parameters m,n,a,b,c,d.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub params: Option<Vec<f64>>,
    #[arg(long, default_value_t = scan::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub index: u64,
    /// Number of product terms for `separable`.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(value_parser = parse_experiment)]
    pub experiment: Experiment,
    /// TOML file with any `ScanConfig` fields; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid for the swept criterion parameter (t or h), `a:b:n`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Which family the sweep grid feeds: `obs1` (t), `sarbicki` (h) or `both`.
    #[arg(long, default_value = "obs1")]
    pub criterion: String,
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    #[arg(long)]
    pub s_grid: Option<String>,
    #[arg(long)]
    pub p_grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi_grid: Option<String>,
}

fn parse_experiment(s: &str) -> std::result::Result<Experiment, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_grid(s: &str) -> Result<Grid> {
    s.parse()
}

fn required<T>(value: Option<T>, flag: &str, family: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidConfig(format!("--{flag} is required for {family}")))
}

pub fn generate(args: &GenArgs) -> Result<BipartiteState> {
    let name = format!("{:?}", args.family);
    let pair = || -> Result<(usize, usize)> {
        match (args.da, args.db, args.d) {
            (Some(a), Some(b), _) => Ok((a, b)),
            (None, None, Some(d)) => Ok((d, d)),
            _ => Err(Error::InvalidConfig(format!("{name} needs --dA and --dB, or --d"))),
        }
    };
    match args.family {
        FamilyName::Werner => states::werner(required(args.d, "d", &name)?, required(args.phi, "phi", &name)?),
        FamilyName::MaxEntangled => states::max_entangled(required(args.d, "d", &name)?),
        FamilyName::Singlet => Ok(states::singlet()),
        FamilyName::MaximallyMixed => {
            let (a, b) = pair()?;
            if a == 0 || b == 0 {
                return Err(Error::InvalidDimension(0));
            }
            Ok(BipartiteState::maximally_mixed(a, b))
        }
        FamilyName::Horodecki => states::horodecki(required(args.s, "s", &name)?, required(args.p, "p", &name)?),
        FamilyName::Upb => states::upb_tiles(required(args.p, "p", &name)?),
        FamilyName::Chessboard => {
            let p = required(args.params.as_ref(), "params", &name)?;
            if p.len() != 6 {
                return Err(Error::InvalidConfig("--params needs m,n,a,b,c,d".into()));
            }
            states::chessboard(p[0], p[1], p[2], p[3], p[4], p[5])
        }
        FamilyName::RandomChessboard => Ok(states::random_chessboard(args.seed, args.index)),
        FamilyName::RandomHs => {
            let (a, b) = pair()?;
            if a == 0 || b == 0 {
                return Err(Error::InvalidDimension(0));
            }
            Ok(states::random_hs(a, b, args.seed, args.index))
        }
        FamilyName::Separable => {
            let (a, b) = pair()?;
            states::random_separable(a, b, args.k, args.seed, args.index)
        }
    }
}

pub fn simplex_csv(n: usize) -> Result<String> {
    let v = simplex_vertices(n)?;
    let mut out = String::new();
    let header: Vec<String> = (1..=v.ncols()).map(|j| format!("v{j}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in v.row_iter() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn scan_config(args: &ScanArgs) -> Result<ScanConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let config = ScanConfig::from_toml(&fs::read_to_string(path)?)?;
            if config.experiment != args.experiment {
                return Err(Error::InvalidConfig(format!(
                    "config is for {}, command asked for {}",
                    config.experiment, args.experiment
                )));
            }
            config
        }
        None => ScanConfig::new(args.experiment),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(samples) = args.samples {
        config.samples = samples;
    }
    if let Some(out) = &args.out {
        config.out = Some(out.clone());
    }
    if let Some(dims) = &args.dims {
        config.dims = dims.clone();
    }
    if let Some(g) = &args.s_grid {
        config.s_grid = parse_grid(g)?;
    }
    if let Some(g) = &args.p_grid {
        config.p_grid = parse_grid(g)?;
    }
    if let Some(g) = &args.phi_grid {
        config.phi_grid = parse_grid(g)?;
    }
    if let Some(g) = &args.grid {
        let values = parse_grid(g)?.values();
        match args.criterion.as_str() {
            "obs1" => config.ts = values,
            "sarbicki" => {
                config.hs = values;
                if args.experiment == Experiment::Random || args.experiment == Experiment::Werner {
                    config.ts.clear();
                }
            }
            "both" => {
                config.hs = values.clone();
                config.ts = values;
            }
            other => {
                return Err(Error::InvalidConfig(format!(
                    "--criterion for scans is obs1, sarbicki or both, got {other:?}"
                )))
            }
        }
    }
    config.validate()?;
    Ok(config)
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_line(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn witness_preset(text: &str) -> Result<TuplePreset> {
    text.parse::<Criterion>()?
        .tuple_preset()
        .ok_or_else(|| Error::Parse(format!("{text:?} does not name an observable tuple")))
}

/// Runs a parsed command, writing to `stdout`; returns the exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Check { state, criterion } => {
            let state = io::read_state(state)?;
            let criteria: Vec<Criterion> = criterion.iter().map(|c| c.parse()).collect::<Result<_>>()?;
            let reports: Vec<CriterionReport> =
                criteria.iter().map(|c| c.evaluate(&state)).collect::<Result<_>>()?;
            let text = if reports.len() == 1 {
                json_line(&reports[0])?
            } else {
                json_line(&reports)?
            };
            stdout.write_all(text.as_bytes())?;
            Ok(if reports.iter().any(|r| r.is_entangled()) {
                EXIT_ENTANGLED
            } else {
                EXIT_OK
            })
        }
        Command::Witness { state, criterion } => {
            let state = io::read_state(state)?;
            let (a, b) = witness_preset(criterion)?.tuples(state.da(), state.db())?;
            let w = witness::build_witness(&state, &a, &b)?;
            let output = WitnessOutput::new(&w, &state)?;
            stdout.write_all(json_line(&output)?.as_bytes())?;
            Ok(if output.expectation < -crate::criteria::VERDICT_TOL {
                EXIT_ENTANGLED
            } else {
                EXIT_OK
            })
        }
        Command::NormalForm { state, tol, max_iter } => {
            let state = io::read_state(state)?;
            let nf = lft::normal_form(&state, *tol, *max_iter)?;
            stdout.write_all(json_line(&NormalFormOutput::new(&nf)?)?.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Gen(args) => {
            let state = generate(args)?;
            emit(&(io::state_to_json(&state)? + "\n"), args.out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Simplex { n, out } => {
            emit(&simplex_csv(*n)?, out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Scan(args) => {
            let config = scan_config(args)?;
            let csv = scan::run_scan(&config)?;
            emit(&csv, config.out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
    }
}

pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::NoConvergence { .. } | Error::Numerical(_) => EXIT_FAILED,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (program name first) and runs; diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}
