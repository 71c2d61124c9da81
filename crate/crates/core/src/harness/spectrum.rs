use serde::{Deserialize, Serialize};

use crate::bipartite::{pt_spectrum_analytic, pt_spectrum_numeric, schmidt, BipartiteSplit};
use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::states::PureState;

pub const SPECTRUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub split: String,
    pub trials: usize,
    /// Max-abs deviation between sorted analytic and numeric spectra.
    pub max_deviation: f64,
    /// Trials where the zero multiplicity did not match the numeric count of |lambda| <= tol.
    pub zero_count_mismatches: usize,
    /// Number of trials at each Schmidt rank `1..=min(m, n)`.
    pub rank_counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCheck {
    pub rows: Vec<SpectrumRow>,
    pub pass: bool,
}

/// Random pure state of the requested Schmidt rank: `sum_{i<rank} a_i ⊗ b_i`
/// with Gaussian local vectors.
pub fn random_state_of_rank(split: BipartiteSplit, rank: usize, rng: &mut SeededRng) -> PureState {
    let (m, n) = (split.m(), split.n());
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); m * n];
    for _ in 0..rank {
        let a: Vec<_> = (0..m).map(|_| rng.complex_normal()).collect();
        let b: Vec<_> = (0..n).map(|_| rng.complex_normal()).collect();
        for i in 0..m {
            for k in 0..n {
                amps[i * n + k] += a[i] * b[k];
            }
        }
    }
    PureState::normalized(amps).expect("nonzero for rank >= 1")
}

/// Compares the closed-form PT spectrum against the eigensolver on `trials`
/// pure states per split. Trial `k` targets Schmidt rank `1 + k mod min(m, n)`,
/// so every multiplicity pattern is exercised.
pub fn spectrum_check(splits: &[BipartiteSplit], trials: usize, seed: u64) -> Result<SpectrumCheck> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let mut rows = Vec::with_capacity(splits.len());
    for (s, &split) in splits.iter().enumerate() {
        let mut rng = SeededRng::shard(seed, s as u64);
        let small = split.m().min(split.n());
        let mut row = SpectrumRow {
            split: split.to_string(),
            trials,
            max_deviation: 0.0,
            zero_count_mismatches: 0,
            rank_counts: vec![0; small],
        };
        for k in 0..trials {
            let psi = random_state_of_rank(split, 1 + k % small, &mut rng);
            let sd = schmidt(&psi, split)?;
            let analytic = pt_spectrum_analytic(&sd, split)?;
            let numeric = pt_spectrum_numeric(&psi, split)?;
            let dev = analytic
                .iter()
                .zip(&numeric)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            row.max_deviation = row.max_deviation.max(dev);
            let zeros_analytic = analytic.iter().filter(|&&x| x == 0.0).count();
            let zeros_numeric = numeric.iter().filter(|x| x.abs() <= SPECTRUM_TOL).count();
            if zeros_analytic != zeros_numeric {
                row.zero_count_mismatches += 1;
            }
            if sd.rank >= 1 {
                row.rank_counts[sd.rank - 1] += 1;
            }
        }
        rows.push(row);
    }
    let pass = rows
        .iter()
        .all(|r| r.max_deviation <= SPECTRUM_TOL && r.zero_count_mismatches == 0);
    Ok(SpectrumCheck { rows, pass })
}
