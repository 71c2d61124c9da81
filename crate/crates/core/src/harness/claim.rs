use serde::{Deserialize, Serialize};

use crate::bipartite::{is_ppt, BipartiteSplit, DEFAULT_PPT_TOL};
use crate::bounds::{bounds_table, BoundsTable};
use crate::distill::{find_schmidt2_witness, DEFAULT_ITERS};
use crate::error::{Error, Result};
use crate::io::{MatrixJson, ReportHeader, SHELL_SAMPLING};
use crate::rng::SeededRng;
use crate::states::{shell_candidate, werner, DensityMatrix, WernerParams};

use super::shell::{shell_scan_with_worst, ShellReport, DEFAULT_SAMPLES_PER_SHELL};
use super::spectrum::spectrum_check;
use super::sweep::{uniform_grid, werner_sweep, DEFAULT_BISECTION_TOL, DEFAULT_GRID_POINTS};

/// A counterexample needs a PT eigenvalue below this.
pub const NEGATIVITY_TOL: f64 = 1e-9;
/// Slack on `distance <= r_ppt` when re-checking a stored state.
pub const DISTANCE_SLACK: f64 = 1e-12;
pub const SHELL_FRACTIONS: [f64; 4] = [0.5, 0.9, 0.99, 1.0];
const SPECTRUM_TRIALS: usize = 50;
const DISTILL_STATES: usize = 32;
const DISTILL_RESTARTS: usize = 16;
const SPECTRUM_SEED_OFFSET: u64 = 1 << 40;
const DISTILL_SEED_OFFSET: u64 = 1 << 41;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    CounterexampleFound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub p_star: f64,
    pub claimed_pm: f64,
    pub oracle_threshold: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    /// `"werner"` or `"shell"`.
    pub source: String,
    pub werner_p: Option<f64>,
    pub distance: f64,
    pub min_pt_eigenvalue: f64,
    pub state: MatrixJson,
}

impl Counterexample {
    /// Recomputes everything from the serialized matrix alone.
    pub fn revalidate(&self, ppt_radius: f64) -> Result<bool> {
        let rho = DensityMatrix::new(self.state.to_matrix()?)?;
        let split = self
            .state
            .split()?
            .ok_or_else(|| Error::Format("counterexample state has no factors".into()))?;
        let distance = rho.distance_to_maximally_mixed();
        let min = is_ppt(&rho, split, DEFAULT_PPT_TOL)?.min_pt_eigenvalue;
        Ok(distance <= ppt_radius + DISTANCE_SLACK && min < -NEGATIVITY_TOL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub pass: bool,
    pub max_deviation: f64,
}

/// Witness search on shell states at one radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistillRadiusProbe {
    pub radius: f64,
    pub states: usize,
    pub npt: usize,
    pub witnesses_found: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistillSummary {
    pub at_separable_radius: DistillRadiusProbe,
    pub at_ppt_radius: DistillRadiusProbe,
    pub counterexample_witness: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimCheckReport {
    pub header: ReportHeader,
    pub d: usize,
    pub bounds: BoundsTable,
    pub werner: SweepSummary,
    pub shell_scan: ShellReport,
    pub spectrum_check: SpectrumSummary,
    pub distillability: DistillSummary,
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
}

impl ClaimCheckReport {
    /// Verdict invariant: a counterexample verdict carries a state that re-validates;
    /// a consistent verdict carries none.
    pub fn revalidate(&self) -> Result<bool> {
        match (self.verdict, &self.counterexample) {
            (Verdict::CounterexampleFound, Some(c)) => c.revalidate(self.bounds.ppt_radius),
            (Verdict::Consistent, None) => Ok(true),
            _ => Ok(false),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn claim_check(d: usize, samples: usize, base_seed: u64) -> Result<ClaimCheckReport> {
    if !(2..=6).contains(&d) {
        return Err(Error::InvalidParameter(format!("claim check supports d in 2..=6, got {d}")));
    }
    let n = d * d;
    let split = BipartiteSplit::symmetric(d)?;
    let table = bounds_table(d, 2)?;

    let sweep = werner_sweep(d, &uniform_grid(DEFAULT_GRID_POINTS), DEFAULT_BISECTION_TOL)?;
    let werner_summary = SweepSummary {
        p_star: sweep.p_star,
        claimed_pm: sweep.claimed_pm,
        oracle_threshold: sweep.oracle_threshold,
        discrepancy: sweep.discrepancy(),
    };

    let spectrum = spectrum_check(&[split], SPECTRUM_TRIALS, base_seed.wrapping_add(SPECTRUM_SEED_OFFSET))?;
    let spectrum_summary = SpectrumSummary {
        pass: spectrum.pass,
        max_deviation: spectrum.rows.iter().map(|r| r.max_deviation).fold(0.0, f64::max),
    };

    let radii: Vec<f64> = SHELL_FRACTIONS.iter().map(|f| f * table.ppt_radius).collect();
    let (mut shell_report, worst) = shell_scan_with_worst(n, split, &radii, samples, base_seed)?;
    shell_report.header = ReportHeader::new(Some(base_seed)).with_sampling(SHELL_SAMPLING);

    // Werner family first, then the most negative shell sample.
    let mut counterexample = None;
    if sweep.claimed_pm - sweep.p_star > DEFAULT_BISECTION_TOL * 10.0 {
        let p = 0.5 * (sweep.p_star + sweep.claimed_pm);
        let rho = werner(WernerParams::new(d, p)?);
        let distance = rho.distance_to_maximally_mixed();
        let min = is_ppt(&rho, split, DEFAULT_PPT_TOL)?.min_pt_eigenvalue;
        if distance <= table.ppt_radius && min < -NEGATIVITY_TOL {
            counterexample = Some(Counterexample {
                source: "werner".into(),
                werner_p: Some(p),
                distance,
                min_pt_eigenvalue: min,
                state: MatrixJson::from_matrix(rho.matrix(), Some(split)),
            });
        }
    }
    if counterexample.is_none() {
        if let Some(w) = worst.filter(|w| w.min_pt_eigenvalue < -NEGATIVITY_TOL) {
            counterexample = Some(Counterexample {
                source: "shell".into(),
                werner_p: None,
                distance: w.state.distance_to_maximally_mixed(),
                min_pt_eigenvalue: w.min_pt_eigenvalue,
                state: MatrixJson::from_matrix(w.state.matrix(), Some(split)),
            });
        }
    }

    let distill_seed = base_seed.wrapping_add(DISTILL_SEED_OFFSET);
    let distillability = DistillSummary {
        at_separable_radius: distill_probe(split, table.separable_radius, distill_seed)?,
        at_ppt_radius: distill_probe(split, table.ppt_radius, distill_seed.wrapping_add(DISTILL_STATES as u64))?,
        counterexample_witness: match &counterexample {
            Some(c) => {
                let rho = DensityMatrix::new(c.state.to_matrix()?)?;
                let r = find_schmidt2_witness(&rho, split, DISTILL_RESTARTS, DEFAULT_ITERS, distill_seed)?;
                r.found.then_some(r.value)
            }
            None => None,
        },
    };

    let verdict = if counterexample.is_some() {
        Verdict::CounterexampleFound
    } else {
        Verdict::Consistent
    };
    Ok(ClaimCheckReport {
        header: ReportHeader::new(Some(base_seed)).with_sampling(SHELL_SAMPLING),
        d,
        bounds: table,
        werner: werner_summary,
        shell_scan: shell_report,
        spectrum_check: spectrum_summary,
        distillability,
        verdict,
        counterexample,
    })
}

/// Default `samples` for [`claim_check`].
pub const DEFAULT_CLAIM_SAMPLES: usize = DEFAULT_SAMPLES_PER_SHELL;

fn distill_probe(split: BipartiteSplit, radius: f64, seed: u64) -> Result<DistillRadiusProbe> {
    let n = split.dim();
    let mut probe = DistillRadiusProbe {
        radius,
        states: 0,
        npt: 0,
        witnesses_found: 0,
    };
    for k in 0..DISTILL_STATES {
        let mut rng = SeededRng::shard(seed, k as u64);
        let Some(rho) = shell_candidate(n, radius, &mut rng)? else {
            continue;
        };
        probe.states += 1;
        if !is_ppt(&rho, split, DEFAULT_PPT_TOL)?.ppt {
            probe.npt += 1;
        }
        let r = find_schmidt2_witness(&rho, split, DISTILL_RESTARTS, DEFAULT_ITERS, seed.wrapping_add(k as u64))?;
        if r.found {
            probe.witnesses_found += 1;
        }
    }
    Ok(probe)
}
