use proptest::prelude::*;

use pptgeom::bipartite::{is_ppt, partial_transpose, schmidt, BipartiteSplit, DEFAULT_PPT_TOL};
use pptgeom::bounds::{bounds_table, classify, ppt_radius, werner_distance, werner_pm};
use pptgeom::distill::find_schmidt2_witness;
use pptgeom::linalg::{hermitian_eigen, hs_distance, ComplexMatrix};
use pptgeom::rng::SeededRng;
use pptgeom::states::{maximally_mixed, sample_hs_random, sample_hs_random_with, sample_on_shell};
use pptgeom::PureState;

fn random_hermitian(dim: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let g = ComplexMatrix::from_row_major((0..dim * dim).map(|_| rng.complex_normal()).collect()).unwrap();
    g.add(&g.adjoint()).unwrap().scale(0.5)
}

fn split_strategy() -> impl Strategy<Value = BipartiteSplit> {
    (2usize..=4, 2usize..=4).prop_map(|(m, n)| BipartiteSplit::new(m, n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigendecomposition_reconstructs(dim in 1usize..=10, seed in any::<u64>()) {
        let h = random_hermitian(dim, &mut SeededRng::new(seed));
        let e = hermitian_eigen(&h).unwrap();
        let scale = h.frob_norm().max(1.0);
        prop_assert!(e.reconstruct().max_abs_diff(&h).unwrap() <= 1e-10 * scale);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        // Eigenvectors are orthonormal.
        let v = &e.eigenvectors;
        let gram = v.adjoint().matmul(v).unwrap();
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(dim)).unwrap() <= 1e-10);
    }

    #[test]
    fn distance_is_a_metric(n in 2usize..=9, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let a = sample_hs_random_with(n, &mut rng);
        let b = sample_hs_random_with(n, &mut rng);
        let c = sample_hs_random_with(n, &mut rng);
        let ab = hs_distance(a.matrix(), b.matrix()).unwrap();
        let bc = hs_distance(b.matrix(), c.matrix()).unwrap();
        let ac = hs_distance(a.matrix(), c.matrix()).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert!((ab - hs_distance(b.matrix(), a.matrix()).unwrap()).abs() <= 1e-15);
        prop_assert_eq!(hs_distance(a.matrix(), a.matrix()).unwrap(), 0.0);
    }

    #[test]
    fn distance_expands_through_traces(n in 2usize..=9, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let a = sample_hs_random_with(n, &mut rng);
        let b = sample_hs_random_with(n, &mut rng);
        let d2 = hs_distance(a.matrix(), b.matrix()).unwrap().powi(2);
        let expanded = a.purity() + b.purity() - 2.0 * a.matrix().trace_product(b.matrix()).unwrap().re;
        prop_assert!((d2 - expanded).abs() <= 1e-12);
    }

    #[test]
    fn purity_is_bounded(n in 2usize..=16, seed in any::<u64>()) {
        let rho = sample_hs_random(n, seed);
        let p = rho.purity();
        prop_assert!(p >= 1.0 / n as f64 - 1e-12 && p <= 1.0 + 1e-12);
        let r = rho.distance_to_maximally_mixed();
        prop_assert!((r * r - (p - 1.0 / n as f64)).abs() <= 1e-12);
    }

    #[test]
    fn partial_transpose_preserves_geometry(split in split_strategy(), seed in any::<u64>()) {
        let rho = sample_hs_random(split.dim(), seed);
        let pt = partial_transpose(rho.matrix(), split).unwrap();
        prop_assert_eq!(&partial_transpose(&pt, split).unwrap(), rho.matrix());
        prop_assert_eq!(pt.trace(), rho.matrix().trace());
        prop_assert!(pt.hermiticity_error() <= 1e-15);
        let center = maximally_mixed(split.dim());
        let d0 = hs_distance(rho.matrix(), center.matrix()).unwrap();
        let d1 = hs_distance(&pt, center.matrix()).unwrap();
        prop_assert!((d0 - d1).abs() <= 1e-12);
    }

    #[test]
    fn schmidt_reconstructs(split in split_strategy(), seed in any::<u64>()) {
        let psi = PureState::random(split.dim(), &mut SeededRng::new(seed));
        let sd = schmidt(&psi, split).unwrap();
        let sum: f64 = sd.coefficients.iter().map(|a| a * a).sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(sd.coefficients.windows(2).all(|w| w[0] >= w[1]));
        let back = sd.reconstruct();
        let err = back
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prop_assert!(err <= 1e-12);
    }

    #[test]
    fn shell_samples_sit_on_their_shell(seed in any::<u64>(), frac in 0.05f64..0.95) {
        let r = frac * (1.0 / 72f64.sqrt());
        let s = sample_on_shell(9, r, seed, 100).unwrap();
        prop_assert!((s.state.distance_to_maximally_mixed() - r).abs() <= 1e-12);
        prop_assert_eq!(s.rejections, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn witness_value_never_undershoots_the_pt_floor(seed in any::<u64>()) {
        let split = BipartiteSplit::symmetric(3).unwrap();
        let rho = sample_hs_random(9, seed);
        let r = find_schmidt2_witness(&rho, split, 4, 20, seed).unwrap();
        let floor = is_ppt(&rho, split, DEFAULT_PPT_TOL).unwrap().min_pt_eigenvalue;
        prop_assert!(r.value >= floor - 1e-10);
        prop_assert_eq!(r.found, r.witness.is_some());
    }
}

#[test]
fn two_qubit_classification_never_contradicts() {
    let split = BipartiteSplit::symmetric(2).unwrap();
    let table = bounds_table(2, 2).unwrap();
    let mut rng = SeededRng::new(2024);
    for _ in 0..10_000 {
        let rho = sample_hs_random_with(4, &mut rng);
        assert!(!classify(&rho, split, &table).unwrap().contradiction_flag);
    }
}

#[test]
fn claimed_threshold_maps_onto_claimed_radius() {
    for n in [4, 9, 16, 25] {
        let lhs = werner_distance(werner_pm(n).unwrap(), n);
        assert!((lhs - ppt_radius(n).unwrap()).abs() <= 1e-12, "N={n}");
    }
}

#[test]
fn spectra_of_the_partial_transpose_stay_in_range() {
    let mut rng = SeededRng::new(77);
    for k in 0..500 {
        let split = BipartiteSplit::new(2 + k % 3, 2 + (k / 3) % 3).unwrap();
        let psi = PureState::random(split.dim(), &mut rng);
        let rho = ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()).unwrap();
        let e = hermitian_eigen(&partial_transpose(&rho, split).unwrap()).unwrap();
        assert!(e.min_eigenvalue() >= -0.5 - 1e-9 && e.max_eigenvalue() <= 1.0 + 1e-9);
    }
}
