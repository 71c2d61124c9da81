//! One-copy distillability witnesses: vectors of Schmidt rank at most 2 with a
//! negative expectation on the partial transpose.
//!
//! The search alternates between the two local 2-dimensional supports. With the
//! B support `T` fixed, every vector of `H_A ⊗ T` has Schmidt rank <= 2, so the
//! best candidate there is the lowest eigenvector of the compressed partial
//! transpose; its A support becomes the new `S`, and symmetrically for `T`.
//! Each half-step can only lower the value. A result with `found == false` is
//! inconclusive.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bipartite::{partial_transpose, schmidt_with_tol, BipartiteSplit, RANK_TOL};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix};
use crate::rng::SeededRng;
use crate::states::{vec_norm, DensityMatrix, PureState};

pub const DEFAULT_RESTARTS: usize = 64;
pub const DEFAULT_ITERS: usize = 50;
pub const WITNESS_TOL: f64 = 1e-10;
const STALL_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct WitnessResult {
    pub found: bool,
    /// Lowest `<psi| rho^T_B |psi>` seen over all restarts.
    pub value: f64,
    /// Present iff `found`.
    pub witness: Option<PureState>,
    pub restarts_used: usize,
}

struct Candidate {
    value: f64,
    vector: Vec<Complex64>,
}

pub fn find_schmidt2_witness(
    rho: &DensityMatrix,
    split: BipartiteSplit,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<WitnessResult> {
    split.check_dim(rho.dim())?;
    if restarts == 0 || iters == 0 {
        return Err(Error::InvalidParameter("restarts and iters must be >= 1".into()));
    }
    let pt = partial_transpose(rho.matrix(), split)?;

    let (best, restarts_used) = if split.m() == 2 || split.n() == 2 {
        // One side is already 2-dimensional: the lowest eigenvector of the full
        // partial transpose has Schmidt rank <= 2, so the search is exact.
        let eig = hermitian_eigen(&pt)?;
        let best = Candidate {
            value: eig.min_eigenvalue(),
            vector: eig.eigenvector(0),
        };
        (best, 1)
    } else {
        let runs = (0..restarts)
            .into_par_iter()
            .map(|r| {
                let mut rng = SeededRng::shard(seed, r as u64);
                alternating_search(&pt, split, iters, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        // Strict comparison keeps the lowest restart index on ties.
        let best = runs
            .into_iter()
            .reduce(|best, c| if c.value < best.value { c } else { best })
            .expect("restarts >= 1");
        (best, restarts)
    };

    let value = pt.expectation(&best.vector)?.re;
    let found = value < -WITNESS_TOL;
    let witness = if found {
        Some(PureState::normalized(best.vector)?)
    } else {
        None
    };
    Ok(WitnessResult {
        found,
        value,
        witness,
        restarts_used,
    })
}

fn alternating_search(
    pt: &ComplexMatrix,
    split: BipartiteSplit,
    iters: usize,
    rng: &mut SeededRng,
) -> Result<Candidate> {
    let (m, n) = (split.m(), split.n());
    let mut s = random_pair(m, rng);
    let mut t = random_pair(n, rng);

    // Seed candidate from the 4-dimensional S ⊗ T block.
    let mut best = lowest_in_span(pt, &product_basis(&s, &t))?;

    for _ in 0..iters {
        let before = best.value;

        let basis_a = full_a_times(&t, m);
        let cand = lowest_in_span(pt, &basis_a)?;
        if cand.value < best.value {
            best = cand;
        }
        s = support_a(&best.vector, m, n);

        let basis_b = s_times_full_b(&s, n);
        let cand = lowest_in_span(pt, &basis_b)?;
        if cand.value < best.value {
            best = cand;
        }
        t = support_b(&best.vector, m, n);

        if before - best.value < STALL_TOL {
            break;
        }
    }
    Ok(best)
}

/// Lowest eigenpair of `pt` compressed to the span of orthonormal `basis`.
fn lowest_in_span(pt: &ComplexMatrix, basis: &[Vec<Complex64>]) -> Result<Candidate> {
    let k = basis.len();
    let images: Vec<Vec<Complex64>> = basis.iter().map(|w| apply(pt, w)).collect();
    let mut compressed = ComplexMatrix::zeros(k);
    for x in 0..k {
        for y in 0..k {
            compressed[(x, y)] = inner(&basis[x], &images[y]);
        }
    }
    let eig = hermitian_eigen(&compressed)?;
    let coeffs = eig.eigenvector(0);
    let dim = pt.dim();
    let mut vector = vec![Complex64::new(0.0, 0.0); dim];
    for (c, w) in coeffs.iter().zip(basis) {
        for (v, &wi) in vector.iter_mut().zip(w) {
            *v += c * wi;
        }
    }
    let norm = vec_norm(&vector);
    vector.iter_mut().for_each(|v| *v /= norm);
    Ok(Candidate {
        value: eig.min_eigenvalue(),
        vector,
    })
}

/// `a v`, skipping zero entries of `v` (search bases are product vectors with a unit factor).
fn apply(a: &ComplexMatrix, v: &[Complex64]) -> Vec<Complex64> {
    let n = a.dim();
    let data = a.as_slice();
    let support: Vec<(usize, Complex64)> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| x.re != 0.0 || x.im != 0.0)
        .map(|(j, &x)| (j, x))
        .collect();
    (0..n)
        .map(|i| {
            let row = &data[i * n..(i + 1) * n];
            support.iter().map(|&(j, x)| row[j] * x).sum()
        })
        .collect()
}

/// `<u|v>`.
fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn tensor(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

fn unit(dim: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[k] = Complex64::new(1.0, 0.0);
    v
}

fn product_basis(s: &[Vec<Complex64>; 2], t: &[Vec<Complex64>; 2]) -> Vec<Vec<Complex64>> {
    s.iter()
        .flat_map(|a| t.iter().map(move |b| tensor(a, b)))
        .collect()
}

fn full_a_times(t: &[Vec<Complex64>; 2], m: usize) -> Vec<Vec<Complex64>> {
    (0..m)
        .flat_map(|i| t.iter().map(move |b| tensor(&unit(m, i), b)))
        .collect()
}

fn s_times_full_b(s: &[Vec<Complex64>; 2], n: usize) -> Vec<Vec<Complex64>> {
    s.iter()
        .flat_map(|a| (0..n).map(move |k| tensor(a, &unit(n, k))))
        .collect()
}

/// Orthonormal pair spanning (and if needed, extending) the column space of `cols`.
fn orthonormal_pair(cols: [Vec<Complex64>; 2]) -> [Vec<Complex64>; 2] {
    let dim = cols[0].len();
    let candidates = cols.into_iter().chain((0..dim).map(|k| unit(dim, k)));
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(2);
    for mut v in candidates {
        for q in &out {
            let proj = inner(q, &v);
            v.iter_mut().zip(q).for_each(|(x, &qi)| *x -= proj * qi);
        }
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            out.push(v);
            if out.len() == 2 {
                break;
            }
        }
    }
    let second = out.pop().expect("dimension >= 2");
    let first = out.pop().expect("dimension >= 2");
    [first, second]
}

fn random_pair(dim: usize, rng: &mut SeededRng) -> [Vec<Complex64>; 2] {
    let mut draw = || (0..dim).map(|_| rng.complex_normal()).collect::<Vec<_>>();
    orthonormal_pair([draw(), draw()])
}

/// A-side support of a Schmidt-rank-<=2 vector, via its Schmidt vectors.
fn support_a(psi: &[Complex64], m: usize, n: usize) -> [Vec<Complex64>; 2] {
    let sd = schmidt_with_tol(psi, BipartiteSplit::new(m, n).expect("valid split"), RANK_TOL)
        .expect("dimensions agree");
    let mut cols = sd.left.into_iter().take(2).collect::<Vec<_>>();
    cols.resize(2, vec![Complex64::new(0.0, 0.0); m]);
    let [a, b]: [Vec<Complex64>; 2] = cols.try_into().expect("two columns");
    orthonormal_pair([a, b])
}

fn support_b(psi: &[Complex64], m: usize, n: usize) -> [Vec<Complex64>; 2] {
    let sd = schmidt_with_tol(psi, BipartiteSplit::new(m, n).expect("valid split"), RANK_TOL)
        .expect("dimensions agree");
    let mut cols = sd.right.into_iter().take(2).collect::<Vec<_>>();
    cols.resize(2, vec![Complex64::new(0.0, 0.0); n]);
    let [a, b]: [Vec<Complex64>; 2] = cols.try_into().expect("two columns");
    orthonormal_pair([a, b])
}
