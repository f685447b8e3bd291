//! JSON state files and the JSON shapes printed by the command line.
//!
//! A state file is `{"dA": 2, "dB": 2, "rho": [[[re, im], ...], ...]}`,
//! rows of `ρ` in the composite order `i_A·d_B + i_B`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lft::NormalFormResult;
use crate::linalg::{c64, ComplexMatrix, RealMatrix};
use crate::states::BipartiteState;
use crate::witness::Witness;

pub type ComplexRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(rename = "dA")]
    pub da: usize,
    #[serde(rename = "dB")]
    pub db: usize,
    pub rho: ComplexRows,
}

pub fn complex_rows(m: &ComplexMatrix) -> ComplexRows {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn real_rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|row| row.iter().copied().collect()).collect()
}

pub fn matrix_from_rows(rows: &ComplexRows) -> Result<ComplexMatrix> {
    let n = rows.len();
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse(format!("row {i} has {} entries, expected {n}", row.len())));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let [re, im] = rows[i][j];
        c64(re, im)
    }))
}

impl StateFile {
    pub fn from_state(state: &BipartiteState) -> Self {
        Self {
            da: state.da(),
            db: state.db(),
            rho: complex_rows(state.rho()),
        }
    }

    pub fn to_state(&self) -> Result<BipartiteState> {
        let rho = matrix_from_rows(&self.rho)?;
        BipartiteState::new(self.da, self.db, rho)
    }
}

pub fn parse_state(text: &str) -> Result<BipartiteState> {
    let file: StateFile = serde_json::from_str(text)?;
    file.to_state()
}

pub fn read_state(path: &Path) -> Result<BipartiteState> {
    parse_state(&fs::read_to_string(path)?)
}

pub fn state_to_json(state: &BipartiteState) -> Result<String> {
    Ok(serde_json::to_string_pretty(&StateFile::from_state(state))?)
}

pub fn write_state(path: &Path, state: &BipartiteState) -> Result<()> {
    fs::write(path, state_to_json(state)? + "\n")?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessOutput {
    pub kappa: f64,
    pub expectation: f64,
    #[serde(rename = "W")]
    pub w: ComplexRows,
}

impl WitnessOutput {
    pub fn new(witness: &Witness, state: &BipartiteState) -> Result<Self> {
        Ok(Self {
            kappa: witness.kappa,
            expectation: witness.expectation(state)?,
            w: complex_rows(&witness.w),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalFormOutput {
    #[serde(rename = "T_tilde")]
    pub t_tilde: Vec<Vec<f64>>,
    pub residual: f64,
    pub iterations: usize,
    #[serde(rename = "F_A")]
    pub filter_a: ComplexRows,
    #[serde(rename = "F_B")]
    pub filter_b: ComplexRows,
}

impl NormalFormOutput {
    pub fn new(nf: &NormalFormResult) -> Result<Self> {
        Ok(Self {
            t_tilde: real_rows(&nf.correlation_block()?),
            residual: nf.residual,
            iterations: nf.iterations,
            filter_a: complex_rows(&nf.filter_a),
            filter_b: complex_rows(&nf.filter_b),
        })
    }
}
