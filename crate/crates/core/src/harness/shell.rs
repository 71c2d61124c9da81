use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartite::{is_ppt, BipartiteSplit, DEFAULT_PPT_TOL};
use crate::bounds::ball_radius;
use crate::error::{Error, Result};
use crate::io::{fmt_f64, fmt_opt, ReportHeader, SHELL_SAMPLING};
use crate::rng::SeededRng;
use crate::states::{shell_candidate, DensityMatrix};

pub const DEFAULT_SAMPLES_PER_SHELL: usize = 2000;
pub const DEFAULT_RADII_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellRow {
    pub radius: f64,
    /// Draws attempted on this shell.
    pub samples: usize,
    /// Draws that landed on a PSD matrix.
    pub accepted: usize,
    pub ppt_count: usize,
    /// `ppt_count / accepted`; absent when nothing was accepted.
    pub ppt_fraction: Option<f64>,
    pub min_pt_eigenvalue: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellReport {
    pub header: ReportHeader,
    pub dim: usize,
    pub split: String,
    pub rows: Vec<ShellRow>,
}

/// Accepted sample with the lowest PT eigenvalue across a scan.
#[derive(Debug, Clone)]
pub struct WorstSample {
    pub radius: f64,
    pub state: DensityMatrix,
    pub min_pt_eigenvalue: f64,
}

impl ShellReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.header.csv_preamble().as_bytes())?;
        writeln!(out, "# N={}", self.dim)?;
        writeln!(out, "# split={}", self.split)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["radius", "samples", "accepted", "ppt_count", "ppt_fraction", "min_pt_eig"])?;
        for r in &self.rows {
            w.write_record([
                fmt_f64(r.radius),
                r.samples.to_string(),
                r.accepted.to_string(),
                r.ppt_count.to_string(),
                fmt_opt(r.ppt_fraction),
                fmt_opt(r.min_pt_eigenvalue),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `n` points spread over `(0, max_radius]`; [`DEFAULT_RADII_POINTS`] is the usual `n`.
pub fn default_radii(max_radius: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| max_radius * k as f64 / n as f64).collect()
}

pub fn shell_scan(
    dim: usize,
    split: BipartiteSplit,
    radii: &[f64],
    samples_per_shell: usize,
    base_seed: u64,
) -> Result<ShellReport> {
    shell_scan_with_worst(dim, split, radii, samples_per_shell, base_seed).map(|(r, _)| r)
}

/// Like [`shell_scan`], also returning the most negative accepted sample.
///
/// Draw `k` on shell `i` uses the generator seeded with
/// `base_seed + i * samples_per_shell + k`.
pub fn shell_scan_with_worst(
    dim: usize,
    split: BipartiteSplit,
    radii: &[f64],
    samples_per_shell: usize,
    base_seed: u64,
) -> Result<(ShellReport, Option<WorstSample>)> {
    split.check_dim(dim)?;
    let outer = ball_radius(dim);
    if radii.iter().any(|&r| !(r > 0.0 && r < outer)) {
        return Err(Error::InvalidParameter(format!("radii must lie in (0, {outer})")));
    }
    if radii.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("radii must be ascending".into()));
    }

    let mut rows = Vec::with_capacity(radii.len());
    let mut worst: Option<WorstSample> = None;
    for (i, &radius) in radii.iter().enumerate() {
        let offset = (i * samples_per_shell) as u64;
        let draws = (0..samples_per_shell)
            .into_par_iter()
            .map(|k| {
                let mut rng = SeededRng::shard(base_seed, offset + k as u64);
                match shell_candidate(dim, radius, &mut rng)? {
                    Some(state) => {
                        let check = is_ppt(&state, split, DEFAULT_PPT_TOL)?;
                        Ok(Some((state, check.min_pt_eigenvalue)))
                    }
                    None => Ok(None),
                }
            })
            .collect::<Result<Vec<_>>>()?;

        let mut row = ShellRow {
            radius,
            samples: samples_per_shell,
            accepted: 0,
            ppt_count: 0,
            ppt_fraction: None,
            min_pt_eigenvalue: None,
        };
        for (state, min_eig) in draws.into_iter().flatten() {
            row.accepted += 1;
            if min_eig >= -DEFAULT_PPT_TOL {
                row.ppt_count += 1;
            }
            if row.min_pt_eigenvalue.is_none_or(|m| min_eig < m) {
                row.min_pt_eigenvalue = Some(min_eig);
            }
            if worst.as_ref().is_none_or(|w| min_eig < w.min_pt_eigenvalue) {
                worst = Some(WorstSample {
                    radius,
                    state,
                    min_pt_eigenvalue: min_eig,
                });
            }
        }
        if row.accepted > 0 {
            row.ppt_fraction = Some(row.ppt_count as f64 / row.accepted as f64);
        }
        rows.push(row);
    }

    let report = ShellReport {
        header: ReportHeader::new(Some(base_seed)).with_sampling(SHELL_SAMPLING),
        dim,
        split: split.to_string(),
        rows,
    };
    Ok((report, worst))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_shells_inside_the_ppt_radius_are_all_ppt() {
        let split = BipartiteSplit::symmetric(2).unwrap();
        let r_max = 1.0 / 12f64.sqrt();
        let rep = shell_scan(4, split, &default_radii(r_max, 4), 200, 1).unwrap();
        for row in &rep.rows {
            assert_eq!(row.accepted, row.samples);
            assert_eq!(row.ppt_fraction, Some(1.0));
        }
    }

    #[test]
    fn qutrit_shell_below_the_psd_ball_is_all_ppt() {
        let split = BipartiteSplit::symmetric(3).unwrap();
        let rep = shell_scan(9, split, &[0.10], 300, 2).unwrap();
        assert_eq!(rep.rows[0].ppt_fraction, Some(1.0));
        assert!(rep.rows[0].min_pt_eigenvalue.unwrap() > 0.0);
    }

    #[test]
    fn scan_is_deterministic() {
        let split = BipartiteSplit::symmetric(3).unwrap();
        let (a, wa) = shell_scan_with_worst(9, split, &[0.2, 0.3], 50, 9).unwrap();
        let (b, wb) = shell_scan_with_worst(9, split, &[0.2, 0.3], 50, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(wa.unwrap().state, wb.unwrap().state);
        for row in &a.rows {
            assert!(row.accepted <= row.samples);
            let f = row.ppt_fraction.unwrap();
            assert!((0.0..=1.0).contains(&f));
        }
    }

    #[test]
    fn unreachable_shell_reports_zero_acceptance() {
        let split = BipartiteSplit::symmetric(2).unwrap();
        let rep = shell_scan(4, split, &[0.86], 20, 3).unwrap();
        assert_eq!(rep.rows[0].accepted, 0);
        assert_eq!(rep.rows[0].ppt_fraction, None);
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains(",20,0,0,,\n"));
    }

    #[test]
    fn rejects_bad_radii() {
        let split = BipartiteSplit::symmetric(2).unwrap();
        assert!(shell_scan(4, split, &[0.3, 0.2], 5, 0).is_err());
        assert!(shell_scan(4, split, &[0.9], 5, 0).is_err());
        assert!(shell_scan(9, split, &[0.1], 5, 0).is_err());
    }
}
