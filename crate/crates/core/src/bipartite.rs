//! Bipartite structure: partial transpose, Schmidt decomposition, the closed-form
//! partial-transpose spectrum of pure states and the PPT test.
//!
//! Composite indices are A-major: `(i, k) -> i * n + k` with `i` on A (dim `m`)
//! and `k` on B (dim `n`). The transpose is always taken on B.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix};
use crate::states::{vec_norm, DensityMatrix, PureState};

pub const RANK_TOL: f64 = 1e-10;
pub const DEFAULT_PPT_TOL: f64 = 1e-9;

/// `H = H^m ⊗ H^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteSplit {
    m: usize,
    n: usize,
}

impl BipartiteSplit {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::InvalidSplit { m, n });
        }
        Ok(Self { m, n })
    }

    /// `d ⊗ d`.
    pub fn symmetric(d: usize) -> Result<Self> {
        Self::new(d, d)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m * self.n
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        Ok(())
    }
}

impl fmt::Display for BipartiteSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

impl FromStr for BipartiteSplit {
    type Err = Error;

    /// Parses `"<m>x<n>"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("split must look like 3x3, got {s:?}"));
        let (a, b) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
        let m = a.trim().parse().map_err(|_| bad())?;
        let n = b.trim().parse().map_err(|_| bad())?;
        Self::new(m, n)
    }
}

/// Transpose on the B factor: `out[(i,k),(j,l)] = in[(i,l),(j,k)]`.
pub fn partial_transpose(rho: &ComplexMatrix, split: BipartiteSplit) -> Result<ComplexMatrix> {
    split.check_dim(rho.dim())?;
    let (m, n) = (split.m, split.n);
    let mut out = ComplexMatrix::zeros(rho.dim());
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    out[(i * n + k, j * n + l)] = rho[(i * n + l, j * n + k)];
                }
            }
        }
    }
    Ok(out)
}

/// `psi = sum_i alpha_i |e_i> ⊗ |f_i>`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    split: BipartiteSplit,
    /// All `min(m, n)` coefficients, nonincreasing; the first `rank` exceed [`RANK_TOL`].
    pub coefficients: Vec<f64>,
    pub rank: usize,
    /// `rank` orthonormal vectors of dimension `m`.
    pub left: Vec<Vec<Complex64>>,
    /// `rank` orthonormal vectors of dimension `n`.
    pub right: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    pub fn split(&self) -> BipartiteSplit {
        self.split
    }

    /// Rebuilds the composite amplitudes from the decomposition.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let (m, n) = (self.split.m, self.split.n);
        let mut out = vec![Complex64::new(0.0, 0.0); m * n];
        for r in 0..self.rank {
            let a = self.coefficients[r];
            for i in 0..m {
                for k in 0..n {
                    out[i * n + k] += self.left[r][i] * self.right[r][k] * a;
                }
            }
        }
        out
    }
}

pub fn schmidt(psi: &PureState, split: BipartiteSplit) -> Result<SchmidtDecomposition> {
    schmidt_with_tol(psi.amplitudes(), split, RANK_TOL)
}

/// Schmidt data of an arbitrary (possibly unnormalized) vector, via the
/// spectral decomposition of the smaller Gram matrix of its `m x n` coefficient matrix.
pub fn schmidt_with_tol(
    amplitudes: &[Complex64],
    split: BipartiteSplit,
    rank_tol: f64,
) -> Result<SchmidtDecomposition> {
    split.check_dim(amplitudes.len())?;
    let (m, n) = (split.m, split.n);
    let coeff = |i: usize, k: usize| amplitudes[i * n + k];

    // Gram matrix on the smaller side: C C^dagger (m <= n) or C^T conj(C) (m > n).
    let small = m.min(n);
    let mut gram = ComplexMatrix::zeros(small);
    for a in 0..small {
        for b in 0..small {
            gram[(a, b)] = if m <= n {
                (0..n).map(|k| coeff(a, k) * coeff(b, k).conj()).sum()
            } else {
                (0..m).map(|i| coeff(i, a) * coeff(i, b).conj()).sum()
            };
        }
    }
    let eig = hermitian_eigen(&gram)?;

    // For each Gram eigenvector u (largest first) form its partner on the other
    // side, C^T conj(u) (m <= n) or C conj(u) (m > n). Its norm is the Schmidt
    // coefficient; sqrt of the Gram eigenvalue would turn round-off of order
    // 1e-16 into coefficients of order 1e-8 and break rank detection.
    let mut pairs = Vec::with_capacity(small);
    for k in (0..small).rev() {
        let u = eig.eigenvector(k);
        let partner: Vec<Complex64> = if m <= n {
            (0..n)
                .map(|col| (0..m).map(|i| coeff(i, col) * u[i].conj()).sum())
                .collect()
        } else {
            (0..m)
                .map(|i| (0..n).map(|k| coeff(i, k) * u[k].conj()).sum())
                .collect()
        };
        let alpha = vec_norm(&partner);
        pairs.push((alpha, u, partner));
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    let coefficients: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let rank = coefficients.iter().take_while(|&&a| a > rank_tol).count();
    let mut left = Vec::with_capacity(rank);
    let mut right = Vec::with_capacity(rank);
    for (alpha, u, partner) in pairs.into_iter().take(rank) {
        let partner: Vec<Complex64> = partner.into_iter().map(|z| z / alpha).collect();
        if m <= n {
            // C = sum alpha u f^T with f = C^T conj(u) / alpha
            left.push(u);
            right.push(partner);
        } else {
            // C^T conj(C) u = alpha^2 u makes u the B ket; e = C conj(u) / alpha
            left.push(partner);
            right.push(u);
        }
    }
    Ok(SchmidtDecomposition {
        split,
        coefficients,
        rank,
        left,
        right,
    })
}

/// Partial-transpose spectrum of a pure state from its Schmidt data, sorted ascending:
/// `alpha_i^2`, `±alpha_i alpha_j` (i < j) and zeros of multiplicity
/// `min(m,n)|m-n| + min(m,n)^2 - r^2`.
pub fn pt_spectrum_analytic(sd: &SchmidtDecomposition, split: BipartiteSplit) -> Result<Vec<f64>> {
    if sd.split != split {
        return Err(Error::DimensionMismatch {
            expected: split.dim(),
            found: sd.split.dim(),
        });
    }
    let (m, n) = (split.m as i64, split.n as i64);
    let r = sd.rank;
    let small = m.min(n);
    let zeros = small * (m - n).abs() + small * small - (r as i64) * (r as i64);
    if zeros < 0 {
        return Err(Error::MultiplicityNegative(zeros));
    }
    let alpha = &sd.coefficients[..r];
    let mut spectrum = Vec::with_capacity(split.dim());
    spectrum.extend(alpha.iter().map(|a| a * a));
    for i in 0..r {
        for j in (i + 1)..r {
            let prod = alpha[i] * alpha[j];
            spectrum.push(prod);
            spectrum.push(-prod);
        }
    }
    spectrum.extend(std::iter::repeat_n(0.0, zeros as usize));
    debug_assert_eq!(spectrum.len(), split.dim());
    spectrum.sort_by(f64::total_cmp);
    Ok(spectrum)
}

/// Sorted eigenvalues of the explicit partial transpose of `|psi><psi|`.
pub fn pt_spectrum_numeric(psi: &PureState, split: BipartiteSplit) -> Result<Vec<f64>> {
    split.check_dim(psi.dim())?;
    let rho = ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes())?;
    Ok(hermitian_eigen(&partial_transpose(&rho, split)?)?.eigenvalues)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptCheck {
    pub ppt: bool,
    pub min_pt_eigenvalue: f64,
}

/// `ppt` iff the smallest eigenvalue of the partial transpose is `>= -tol`.
pub fn is_ppt(rho: &DensityMatrix, split: BipartiteSplit, tol: f64) -> Result<PptCheck> {
    let pt = partial_transpose(rho.matrix(), split)?;
    let min_pt_eigenvalue = hermitian_eigen(&pt)?.min_eigenvalue();
    Ok(PptCheck {
        ppt: min_pt_eigenvalue >= -tol,
        min_pt_eigenvalue,
    })
}
