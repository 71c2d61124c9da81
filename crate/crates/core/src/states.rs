//! Density matrices: validated construction, the Werner (isotropic) family,
//! convex mixtures and seeded Hilbert-Schmidt sampling.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hs_distance, ComplexMatrix, HERMITIAN_TOL};
use crate::rng::SeededRng;

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
pub const NORM_TOL: f64 = 1e-12;
/// Default rejection budget for [`sample_on_shell`].
pub const DEFAULT_MAX_REJECTS: usize = 10_000;

/// Unit-trace, positive semidefinite Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), unit trace (1e-10) and PSD (min eigenvalue >= -1e-9).
    /// The stored matrix is the Hermitian part of the input.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let matrix = matrix.hermitian_part()?;
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace { trace });
        }
        let min_eigenvalue = hermitian_eigen(&matrix)?.min_eigenvalue();
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self { matrix })
    }

    /// For constructions that are valid by design; skips the eigen check.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.hermiticity_error() <= HERMITIAN_TOL);
        debug_assert!((matrix.trace().re - 1.0).abs() <= TRACE_TOL);
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).expect("same dim").re
    }

    /// Hilbert-Schmidt distance to `I/N`.
    pub fn distance_to_maximally_mixed(&self) -> f64 {
        hs_distance(&self.matrix, maximally_mixed(self.dim()).matrix()).expect("same dim")
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Accepts amplitudes whose 2-norm is 1 within 1e-12.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if amplitudes.is_empty() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Haar-random state from normalized complex Gaussians.
    pub fn random(dim: usize, rng: &mut SeededRng) -> Self {
        loop {
            let v = (0..dim).map(|_| rng.complex_normal()).collect();
            if let Ok(s) = Self::normalized(v) {
                return s;
            }
        }
    }
}

pub(crate) fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Parameters of the isotropic Werner family on `d ⊗ d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParams {
    local_dim: usize,
    p: f64,
}

impl WernerParams {
    pub fn new(local_dim: usize, p: f64) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::InvalidParameter(format!("Werner local dimension {local_dim} < 2")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("Werner mixing p = {p} outside [0, 1]")));
        }
        Ok(Self { local_dim, p })
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// `I/N`.
pub fn maximally_mixed(n: usize) -> DensityMatrix {
    assert!(n > 0, "dimension must be positive");
    DensityMatrix::from_trusted(ComplexMatrix::identity(n).scale(1.0 / n as f64))
}

/// Rank-one projector `|psi><psi|`.
pub fn pure_density(psi: &PureState) -> DensityMatrix {
    let a = psi.amplitudes();
    let m = ComplexMatrix::outer(a, a).expect("same length");
    DensityMatrix::from_trusted(m)
}

/// `(1/sqrt(d)) sum_i |ii>` in A-major composite indexing.
pub fn maximally_entangled(d: usize) -> PureState {
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    let w = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        amps[i * d + i] = Complex64::new(w, 0.0);
    }
    PureState { amplitudes: amps }
}

/// `p |Phi><Phi| + (1 - p) I/d^2` with `Phi` maximally entangled.
pub fn werner(params: WernerParams) -> DensityMatrix {
    let d = params.local_dim();
    let p = params.p();
    let proj = pure_density(&maximally_entangled(d));
    let mixed = maximally_mixed(d * d);
    let m = proj
        .matrix()
        .scale(p)
        .add(&mixed.matrix().scale(1.0 - p))
        .expect("same dim");
    DensityMatrix::from_trusted(m)
}

/// `p a + (1 - p) b`.
pub fn convex_mix(p: f64, a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("mixing weight {p} outside [0, 1]")));
    }
    let m = a.matrix().scale(p).add(&b.matrix().scale(1.0 - p))?;
    Ok(DensityMatrix::from_trusted(m))
}

/// Hilbert-Schmidt random state `G G^dagger / Tr(G G^dagger)` with `G` Ginibre.
pub fn sample_hs_random(n: usize, seed: u64) -> DensityMatrix {
    sample_hs_random_with(n, &mut SeededRng::new(seed))
}

pub fn sample_hs_random_with(n: usize, rng: &mut SeededRng) -> DensityMatrix {
    let g = ComplexMatrix::from_row_major((0..n * n).map(|_| rng.complex_normal()).collect())
        .expect("square and finite");
    let w = g.matmul(&g.adjoint()).expect("same dim");
    let tr = w.trace().re;
    let m = w.scale(1.0 / tr).hermitian_part().expect("Hermitian by construction");
    DensityMatrix::from_trusted(m)
}

/// State drawn on the Hilbert-Schmidt sphere of radius `r` around `I/N`.
#[derive(Debug, Clone)]
pub struct ShellSample {
    pub state: DensityMatrix,
    pub rejections: usize,
}

/// Ball radius `sqrt((N-1)/N)` containing all states of dimension `N`.
fn outer_radius(n: usize) -> f64 {
    ((n as f64 - 1.0) / n as f64).sqrt()
}

pub fn sample_on_shell(n: usize, r: f64, seed: u64, max_rejects: usize) -> Result<ShellSample> {
    sample_on_shell_with(n, r, &mut SeededRng::new(seed), max_rejects)
}

/// Draws an HS-random state, rescales its traceless part to norm `r` and
/// rejects non-PSD results, up to `max_rejects` times.
pub fn sample_on_shell_with(
    n: usize,
    r: f64,
    rng: &mut SeededRng,
    max_rejects: usize,
) -> Result<ShellSample> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension {n} < 2")));
    }
    if !(r > 0.0 && r < outer_radius(n)) {
        return Err(Error::InvalidParameter(format!(
            "shell radius {r} outside (0, {})",
            outer_radius(n)
        )));
    }
    let mut rejections = 0;
    loop {
        if let Some(state) = shell_candidate(n, r, rng)? {
            return Ok(ShellSample { state, rejections });
        }
        if rejections == max_rejects {
            return Err(Error::ShellUnreachable {
                radius: r,
                rejects: rejections,
            });
        }
        rejections += 1;
    }
}

/// One draw of the shell sampler: `None` when the rescaled draw is not PSD.
pub fn shell_candidate(n: usize, r: f64, rng: &mut SeededRng) -> Result<Option<DensityMatrix>> {
    let center = maximally_mixed(n);
    let base = sample_hs_random_with(n, rng);
    let delta = base.matrix().sub(center.matrix())?;
    let norm = delta.frob_norm();
    if norm == 0.0 {
        return Ok(None);
    }
    let m = center.matrix().add(&delta.scale(r / norm))?;
    if hermitian_eigen(&m)?.min_eigenvalue() < -NORM_TOL {
        return Ok(None);
    }
    Ok(Some(DensityMatrix::from_trusted(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hs_distance;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn maximally_mixed_entries() {
        for n in [2, 4] {
            let m = maximally_mixed(n);
            assert_eq!(m.matrix(), &ComplexMatrix::from_diag(&vec![1.0 / n as f64; n]));
            assert_eq!(hs_distance(m.matrix(), m.matrix()).unwrap(), 0.0);
        }
    }

    #[test]
    fn pure_density_cases() {
        let rho = pure_density(&PureState::new(vec![c(1.0), c(0.0)]).unwrap());
        assert_eq!(rho.matrix(), &ComplexMatrix::from_diag(&[1.0, 0.0]));

        let s = 0.5f64.sqrt();
        let bell = pure_density(&PureState::new(vec![c(s), c(0.0), c(0.0), c(s)]).unwrap());
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((bell.matrix()[(i, j)].re - 0.5).abs() < 1e-15);
        }
        assert!((bell.purity() - 1.0).abs() < 1e-15);
        assert!(DensityMatrix::new(bell.into_matrix()).is_ok());
    }

    #[test]
    fn unnormalized_state_rejected() {
        assert!(matches!(
            PureState::new(vec![c(1.0), c(1.0)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(PureState::normalized(vec![c(0.0), c(0.0)]).is_err());
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::identity(2)),
            Err(Error::InvalidTrace { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::from_diag(&[1.5, -0.5])),
            Err(Error::NotPsd { .. })
        ));
        let skew = ComplexMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]).unwrap();
        assert!(matches!(DensityMatrix::new(skew), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn werner_endpoints() {
        let w0 = werner(WernerParams::new(3, 0.0).unwrap());
        assert!(w0.matrix().max_abs_diff(maximally_mixed(9).matrix()).unwrap() < 1e-16);
        let w1 = werner(WernerParams::new(2, 1.0).unwrap());
        let bell = pure_density(&maximally_entangled(2));
        assert!(w1.matrix().max_abs_diff(bell.matrix()).unwrap() < 1e-16);
        assert!(WernerParams::new(1, 0.5).is_err());
        assert!(WernerParams::new(2, 1.1).is_err());
    }

    #[test]
    fn werner_distance_closed_form() {
        for d in [2usize, 3] {
            let n = (d * d) as f64;
            for k in 0..20 {
                let p = k as f64 / 19.0;
                let w = werner(WernerParams::new(d, p).unwrap());
                let want = p * ((n - 1.0) / n).sqrt();
                assert!((w.distance_to_maximally_mixed() - want).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn convex_mix_endpoints_and_validity() {
        let a = sample_hs_random(3, 1);
        let b = sample_hs_random(3, 2);
        assert_eq!(convex_mix(1.0, &a, &b).unwrap().matrix(), a.matrix());
        assert_eq!(convex_mix(0.0, &a, &b).unwrap().matrix(), b.matrix());
        let mid = convex_mix(0.3, &a, &b).unwrap();
        assert!(DensityMatrix::new(mid.into_matrix()).is_ok());
        assert!(convex_mix(0.5, &a, &sample_hs_random(4, 3)).is_err());
        assert!(convex_mix(-0.1, &a, &b).is_err());
    }

    #[test]
    fn hs_random_is_a_valid_state() {
        for seed in 0..50 {
            let rho = sample_hs_random(4, seed);
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
            let min = hermitian_eigen(rho.matrix()).unwrap().min_eigenvalue();
            assert!(min >= -1e-12);
            let purity = rho.purity();
            assert!((0.25 - 1e-12..=1.0 + 1e-12).contains(&purity));
        }
        assert_eq!(sample_hs_random(4, 42), sample_hs_random(4, 42));
        assert_ne!(sample_hs_random(4, 42), sample_hs_random(4, 43));
    }

    #[test]
    fn shell_samples_hit_the_radius() {
        for (n, r) in [(4, 1e-6), (4, 0.28), (9, 0.2), (16, 0.1)] {
            for seed in 0..10 {
                let s = sample_on_shell(n, r, seed, DEFAULT_MAX_REJECTS).unwrap();
                assert!((s.state.distance_to_maximally_mixed() - r).abs() <= 1e-12);
                assert!(DensityMatrix::new(s.state.matrix().clone()).is_ok());
            }
        }
        let tiny = sample_on_shell(4, 1e-9, 3, 0).unwrap();
        assert_eq!(tiny.rejections, 0);
        let a = sample_on_shell(4, 0.3, 11, 100).unwrap();
        let b = sample_on_shell(4, 0.3, 11, 100).unwrap();
        assert_eq!(a.state, b.state);
        assert_eq!(a.rejections, b.rejections);
    }

    #[test]
    fn shell_radius_preconditions() {
        assert!(sample_on_shell(4, 0.0, 1, 10).is_err());
        assert!(sample_on_shell(4, 0.9, 1, 10).is_err());
        // Almost the outer radius: only near-pure states survive, which the rescaling never produces.
        assert!(matches!(
            sample_on_shell(4, 0.85, 1, 20),
            Err(Error::ShellUnreachable { rejects: 20, .. })
        ));
    }
}
