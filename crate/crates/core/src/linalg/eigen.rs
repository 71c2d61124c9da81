//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation annihilates one off-diagonal pair `(p, q)` with the unitary
//!
//! ```text
//! J_pp = c,  J_pq = s e^{i phi},  J_qp = -s e^{-i phi},  J_qq = c
//! ```
//!
//! where `a_pq = |a_pq| e^{i phi}` and `(c, s)` is the classical real Jacobi
//! rotation for the 2x2 block `[[a_pp, |a_pq|], [|a_pq|, a_qq]]`. Sweeps run
//! over all pairs in row order until the off-diagonal Frobenius norm drops
//! below `OFF_DIAGONAL_TOL * max(1, ||H||_F)`.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `H = V diag(eigenvalues) V^dagger`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    /// Columns are the unit eigenvectors, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n)
                    .map(|k| v[(i, k)] * v[(j, k)].conj() * self.eigenvalues[k])
                    .sum();
            }
        }
        out
    }
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for z in &a[i * n + i + 1..(i + 1) * n] {
            s += 2.0 * z.norm_sqr();
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with `NotHermitian` when `max |H - H^dagger| > 1e-10`; the input is
/// symmetrized before iterating.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = h.dim();
    let mut a = h.hermitian_part()?.into_vec();
    let mut v = ComplexMatrix::identity(n).into_vec();
    let target = OFF_DIAGONAL_TOL * h.frob_norm().max(1.0);

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a, n);
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a, n);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues = order.iter().map(|&k| a[k * n + k].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, dst)] = v[i * n + src];
        }
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// One rotation on row-major `a` and `v` of side `n`.
fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = (apq.re * apq.re + apq.im * apq.im).sqrt();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / r;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pq = phase * s;
    let j_qp = -phase.conj() * s;

    // A <- A J (columns p, q)
    for row in a.chunks_exact_mut(n) {
        let (akp, akq) = (row[p], row[q]);
        row[p] = akp * c + akq * j_qp;
        row[q] = akp * j_pq + akq * c;
    }
    // A <- J^dagger A (rows p, q)
    let (j_qp_c, j_pq_c) = (j_qp.conj(), j_pq.conj());
    let (head, tail) = a.split_at_mut(q * n);
    let row_p = &mut head[p * n..(p + 1) * n];
    let row_q = &mut tail[..n];
    for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (apk, aqk) = (*x, *y);
        *x = apk * c + aqk * j_qp_c;
        *y = apk * j_pq_c + aqk * c;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p] = Complex64::new(app - t * r, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * r, 0.0);

    for row in v.chunks_exact_mut(n) {
        let (vkp, vkq) = (row[p], row[q]);
        row[p] = vkp * c + vkq * j_qp;
        row[q] = vkp * j_pq + vkq * c;
    }
}

/// PSD test with the minimum eigenvalue reported either way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    pub min_eigenvalue: f64,
}

pub fn is_psd(h: &ComplexMatrix, tol: f64) -> Result<PsdCheck> {
    let min_eigenvalue = hermitian_eigen(h)?.min_eigenvalue();
    Ok(PsdCheck {
        psd: min_eigenvalue >= -tol,
        min_eigenvalue,
    })
}
