//! Matrix JSON and report headers shared by the CLI and the harness.
//!
//! A matrix file is `{"dim": N, "factors": [m, n], "data": [[re, im], ...]}` with
//! `data` row-major and `factors` optional. A state-vector file uses the same
//! object with `dim` entries in `data`. Floats are written with the shortest
//! representation that round-trips to the same `f64`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipartite::BipartiteSplit;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::rng::GENERATOR_ID;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<[usize; 2]>,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix, split: Option<BipartiteSplit>) -> Self {
        Self {
            dim: m.dim(),
            factors: split.map(|s| [s.m(), s.n()]),
            data: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_vector(v: &[Complex64], split: Option<BipartiteSplit>) -> Self {
        Self {
            dim: v.len(),
            factors: split.map(|s| [s.m(), s.n()]),
            data: v.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    fn entries(&self) -> Vec<Complex64> {
        self.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
    }

    pub fn is_vector(&self) -> bool {
        self.data.len() == self.dim && self.dim > 1
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.data.len() != self.dim * self.dim {
            return Err(Error::Format(format!(
                "matrix of dim {} needs {} entries, found {}",
                self.dim,
                self.dim * self.dim,
                self.data.len()
            )));
        }
        ComplexMatrix::from_row_major(self.entries())
    }

    pub fn to_vector(&self) -> Result<Vec<Complex64>> {
        if !self.is_vector() {
            return Err(Error::Format(format!(
                "state vector of dim {} needs {} entries, found {}",
                self.dim,
                self.dim,
                self.data.len()
            )));
        }
        Ok(self.entries())
    }

    pub fn split(&self) -> Result<Option<BipartiteSplit>> {
        self.factors
            .map(|[m, n]| {
                let s = BipartiteSplit::new(m, n)?;
                s.check_dim(self.dim)?;
                Ok(s)
            })
            .transpose()
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

/// Provenance block carried by every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub tool_version: String,
    pub generator_id: String,
    pub seed: Option<u64>,
    /// How random states were drawn, when any were.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<String>,
}

pub const SHELL_SAMPLING: &str =
    "Hilbert-Schmidt (Ginibre) draw, traceless part rescaled to the shell radius, non-PSD draws rejected";

impl ReportHeader {
    pub fn new(seed: Option<u64>) -> Self {
        Self {
            tool_version: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
            generator_id: GENERATOR_ID.to_string(),
            seed,
            sampling: None,
        }
    }

    pub fn with_sampling(mut self, desc: &str) -> Self {
        self.sampling = Some(desc.to_string());
        self
    }

    /// `# key=value` lines preceding a CSV body.
    pub fn csv_preamble(&self) -> String {
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        let mut out = format!(
            "# tool_version={}\n# generator_id={}\n# seed={}\n",
            self.tool_version, self.generator_id, seed
        );
        if let Some(s) = &self.sampling {
            out.push_str(&format!("# sampling={s}\n"));
        }
        out
    }
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}
