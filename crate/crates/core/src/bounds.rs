//! Distance radii around `I/N` and the zone classification built on them.
//!
//! `ppt_radius` and `werner_pm` carry the claimed general-`N` values verbatim;
//! [`classify`] reports them next to the numeric PPT test so that any disagreement
//! surfaces as `contradiction_flag` rather than being silently trusted.

use serde::{Deserialize, Serialize};

use crate::bipartite::{is_ppt, BipartiteSplit, DEFAULT_PPT_TOL};
use crate::error::{Error, Result};
use crate::states::DensityMatrix;

/// `sqrt((N-1)/N)`: radius of the ball around `I/N` that contains every state.
pub fn ball_radius(n: usize) -> f64 {
    let n = n as f64;
    ((n - 1.0) / n).sqrt()
}

/// `sqrt((d^n - 1)/d^n) / (1 + d^(n-1))` for `n` qudits of dimension `d`.
pub fn separable_radius(d: usize, parties: usize) -> f64 {
    let total = (d as f64).powi(parties as i32);
    let factor = 1.0 / (1.0 + (d as f64).powi(parties as i32 - 1));
    factor * ((total - 1.0) / total).sqrt()
}

fn check_composite(n: usize) -> Result<()> {
    let composite = (2..=n / 2).any(|m| n.is_multiple_of(m) && n / m >= 2);
    if n < 4 || !composite {
        return Err(Error::UnsupportedDim(n));
    }
    Ok(())
}

/// Claimed PPT radius: `1/sqrt(12)` at `N = 4`, else `1/sqrt(sqrt(N(N-1)) + 1)`.
pub fn ppt_radius(n: usize) -> Result<f64> {
    check_composite(n)?;
    if n == 4 {
        return Ok(1.0 / 12f64.sqrt());
    }
    let n = n as f64;
    Ok(1.0 / ((n * (n - 1.0)).sqrt() + 1.0).sqrt())
}

/// `sqrt(lambda_min / lambda_max) / sqrt(N)`.
pub fn cone_boundary_distance(lambda_min: f64, lambda_max: f64, n: usize) -> Result<f64> {
    if !(lambda_min > 0.0 && lambda_min <= lambda_max && lambda_max.is_finite()) || n == 0 {
        return Err(Error::InvalidEigenvalues {
            lambda_min,
            lambda_max,
        });
    }
    Ok((lambda_min / lambda_max).sqrt() / (n as f64).sqrt())
}

/// Claimed Werner threshold: `1/3` at `N = 4`, else `sqrt(N/(N-1)) / sqrt(sqrt(N(N-1)) + 1)`.
pub fn werner_pm(n: usize) -> Result<f64> {
    check_composite(n)?;
    if n == 4 {
        return Ok(1.0 / 3.0);
    }
    let nf = n as f64;
    Ok((nf / (nf - 1.0)).sqrt() * ppt_radius(n)?)
}

/// Distance of `p P + (1-p) I/N` from `I/N` for a pure `P`: `p sqrt((N-1)/N)`.
pub fn werner_distance(p: f64, n: usize) -> f64 {
    p * ball_radius(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsTable {
    pub total_dim: usize,
    pub local_dim: usize,
    pub parties: usize,
    pub outer_radius: f64,
    pub separable_radius: f64,
    pub ppt_radius: f64,
    pub werner_pm: f64,
}

pub fn bounds_table(d: usize, parties: usize) -> Result<BoundsTable> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("local dimension {d} < 2")));
    }
    if parties != 2 {
        return Err(Error::InvalidParameter(format!(
            "only bipartite tables are supported (n = {parties})"
        )));
    }
    let total_dim = d.pow(parties as u32);
    Ok(BoundsTable {
        total_dim,
        local_dim: d,
        parties,
        outer_radius: ball_radius(total_dim),
        separable_radius: separable_radius(d, parties),
        ppt_radius: ppt_radius(total_dim)?,
        werner_pm: werner_pm(total_dim)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Zone {
    SeparableBall,
    PptBallClaim,
    OutsideBalls,
}

impl Zone {
    /// Ties resolve to the inner zone.
    pub fn for_distance(distance: f64, table: &BoundsTable) -> Self {
        if distance <= table.separable_radius {
            Zone::SeparableBall
        } else if distance <= table.ppt_radius {
            Zone::PptBallClaim
        } else {
            Zone::OutsideBalls
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneClassification {
    pub distance: f64,
    pub zone: Zone,
    pub numeric_ppt: bool,
    pub min_pt_eigenvalue: f64,
    /// Set when the geometry predicts PPT but the partial transpose has a negative eigenvalue.
    pub contradiction_flag: bool,
}

pub fn classify(
    rho: &DensityMatrix,
    split: BipartiteSplit,
    table: &BoundsTable,
) -> Result<ZoneClassification> {
    split.check_dim(rho.dim())?;
    if table.total_dim != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: table.total_dim,
            found: rho.dim(),
        });
    }
    let distance = rho.distance_to_maximally_mixed();
    let zone = Zone::for_distance(distance, table);
    let ppt = is_ppt(rho, split, DEFAULT_PPT_TOL)?;
    Ok(ZoneClassification {
        distance,
        zone,
        numeric_ppt: ppt.ppt,
        min_pt_eigenvalue: ppt.min_pt_eigenvalue,
        contradiction_flag: zone != Zone::OutsideBalls && !ppt.ppt,
    })
}
