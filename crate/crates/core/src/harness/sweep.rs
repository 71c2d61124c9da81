use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bipartite::{is_ppt, BipartiteSplit, DEFAULT_PPT_TOL};
use crate::bounds::werner_pm;
use crate::error::{Error, Result};
use crate::io::{fmt_f64, ReportHeader};
use crate::states::{werner, WernerParams};

pub const DEFAULT_BISECTION_TOL: f64 = 1e-10;
pub const DEFAULT_GRID_POINTS: usize = 21;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub distance: f64,
    pub min_pt_eigenvalue: f64,
    pub ppt: bool,
}

/// One bisection step; the minimum PT eigenvalue is `>= 0` at `lo` and `< 0` at `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub header: ReportHeader,
    pub d: usize,
    pub rows: Vec<SweepRow>,
    /// Numeric root of the minimum PT eigenvalue in `p`.
    pub p_star: f64,
    /// Claimed threshold for `N = d^2`.
    pub claimed_pm: f64,
    /// Closed form `1/(d+1)`.
    pub oracle_threshold: f64,
    pub brackets: Vec<Bracket>,
}

impl SweepReport {
    pub fn discrepancy(&self) -> f64 {
        self.claimed_pm - self.p_star
    }

    /// Header block as `#` lines, then `p,distance,min_pt_eig,ppt`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.header.csv_preamble().as_bytes())?;
        writeln!(out, "# d={}", self.d)?;
        writeln!(out, "# p_star={}", fmt_f64(self.p_star))?;
        writeln!(out, "# claimed_pm={}", fmt_f64(self.claimed_pm))?;
        writeln!(out, "# oracle_threshold={}", fmt_f64(self.oracle_threshold))?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["p", "distance", "min_pt_eig", "ppt"])?;
        for r in &self.rows {
            w.write_record([
                fmt_f64(r.p),
                fmt_f64(r.distance),
                fmt_f64(r.min_pt_eigenvalue),
                r.ppt.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `k` evenly spaced points covering `[0, 1]`.
pub fn uniform_grid(k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..k).map(|i| i as f64 / (k - 1) as f64).collect(),
    }
}

fn werner_min_pt(d: usize, p: f64, split: BipartiteSplit) -> Result<f64> {
    let rho = werner(WernerParams::new(d, p)?);
    Ok(is_ppt(&rho, split, DEFAULT_PPT_TOL)?.min_pt_eigenvalue)
}

pub fn werner_sweep(d: usize, p_grid: &[f64], bisection_tol: f64) -> Result<SweepReport> {
    if !(2..=8).contains(&d) {
        return Err(Error::InvalidParameter(format!("sweep supports d in 2..=8, got {d}")));
    }
    if p_grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidParameter("grid points must lie in [0, 1]".into()));
    }
    if bisection_tol.is_nan() || bisection_tol <= 0.0 {
        return Err(Error::InvalidParameter("bisection tolerance must be positive".into()));
    }
    let split = BipartiteSplit::symmetric(d)?;
    let mut grid = p_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let rows = grid
        .iter()
        .map(|&p| {
            let rho = werner(WernerParams::new(d, p)?);
            let check = is_ppt(&rho, split, DEFAULT_PPT_TOL)?;
            Ok(SweepRow {
                p,
                distance: rho.distance_to_maximally_mixed(),
                min_pt_eigenvalue: check.min_pt_eigenvalue,
                ppt: check.ppt,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (mut lo, mut hi) = (0.0, 1.0);
    let (mut f_lo, mut f_hi) = (werner_min_pt(d, lo, split)?, werner_min_pt(d, hi, split)?);
    let mut brackets = vec![Bracket { lo, hi, f_lo, f_hi }];
    while hi - lo > bisection_tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = werner_min_pt(d, mid, split)?;
        if f_mid >= 0.0 {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        brackets.push(Bracket { lo, hi, f_lo, f_hi });
    }

    Ok(SweepReport {
        header: ReportHeader::new(None),
        d,
        rows,
        p_star: 0.5 * (lo + hi),
        claimed_pm: werner_pm(d * d)?,
        oracle_threshold: 1.0 / (d as f64 + 1.0),
        brackets,
    })
}
