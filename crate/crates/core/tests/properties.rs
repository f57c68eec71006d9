use num_complex::Complex64;
use proptest::prelude::*;

use qdistinguish::channel::outcome_distribution;
use qdistinguish::distinguish::{achieved_coefficient, bures_optimal_measurement, fidelity_root};
use qdistinguish::holevo::{
    holevo_chi, i_second_derivative, l_second_derivative, lower_bound_m, mutual_information, phi,
    s_second_derivative,
};
use qdistinguish::io::{load_channel, parse_channel, render_channel, save_channel};
use qdistinguish::linalg::{eig_hermitian, lowering_apply, polar_unitary, sqrt_psd};
use qdistinguish::sampling::{
    ginibre, random_basis_povm, random_channel, random_density, random_unitary,
};
use qdistinguish::{BinaryChannel, ComplexMatrix, DensityMatrix, HermitianOperator};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(64)
}

fn random_hermitian(dim: usize, seed: u64) -> HermitianOperator {
    let g = ginibre(dim, seed);
    HermitianOperator::hermitize(&(&g + &g.adjoint()))
}

fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    (&u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(u.dim()))
}

/// Channel whose states have spectra bounded below by 0.3/dim.
fn well_conditioned(dim: usize, seed: u64, t: f64) -> BinaryChannel {
    let blend = |rho: &DensityMatrix| {
        let mixed = DensityMatrix::maximally_mixed(dim);
        DensityMatrix::new(&rho.matrix().scale(0.7) + &mixed.matrix().scale(0.3)).unwrap()
    };
    BinaryChannel::new(
        blend(&random_density(dim, seed)),
        blend(&random_density(dim, seed.wrapping_add(1))),
        t,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn eigendecomposition_reconstructs(dim in 1usize..=5, seed in any::<u64>()) {
        let h = random_hermitian(dim, seed);
        let eig = eig_hermitian(&h);
        let scale = 1.0 + h.matrix().max_abs();
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(unitarity_defect(&eig.eigenvectors) < 1e-12 * dim as f64 * 10.0);
        let rebuilt = eig.compose(&eig.eigenvalues);
        prop_assert!(rebuilt.max_abs_diff(h.matrix()) < 1e-12 * scale * 10.0);
    }

    #[test]
    fn square_root_squares_back(dim in 1usize..=5, seed in any::<u64>()) {
        let rho = random_density(dim, seed);
        let root = sqrt_psd(rho.operator()).unwrap();
        let square = root.matrix() * root.matrix();
        prop_assert!(square.max_abs_diff(rho.matrix()) < 1e-12);
        prop_assert!(eig_hermitian(&root).eigenvalues[0] >= 0.0);
    }

    #[test]
    fn polar_unitary_maximizes_trace(dim in 1usize..=4, seed in any::<u64>(), other in any::<u64>()) {
        let a = ginibre(dim, seed);
        let u = polar_unitary(&a).unwrap();
        prop_assert!(unitarity_defect(&u) < 1e-11);
        let ua = &u * &a;
        prop_assert!(ua.max_abs_diff(&ua.adjoint()) < 1e-11);
        let best = ua.trace();
        prop_assert!(best.im.abs() < 1e-11);
        let v = random_unitary(dim, other);
        prop_assert!((&v * &a).trace().norm() <= best.re + 1e-11);
    }

    #[test]
    fn lowering_solves_symmetric_equation(dim in 1usize..=4, seed in any::<u64>()) {
        let rho = random_density(dim, seed);
        let a = random_hermitian(dim, seed.wrapping_add(7));
        let l = lowering_apply(rho.operator(), &a).unwrap();
        let lhs = (&(rho.matrix() * l.matrix()) + &(l.matrix() * rho.matrix())).scale(0.5);
        let scale = 1.0 + l.matrix().max_abs();
        prop_assert!(lhs.max_abs_diff(a.matrix()) < 1e-10 * scale);
    }

    #[test]
    fn mixture_is_linear_in_prior(dim in 1usize..=4, seed in any::<u64>(), t in 0.0f64..=1.0) {
        let ch = random_channel(dim, seed, t).unwrap();
        let expected = &ch.rho0().matrix().scale(1.0 - t) + &ch.rho1().matrix().scale(t);
        prop_assert!(ch.mixture().matrix().max_abs_diff(&expected) < 1e-15);
        let trace = ch.mixture().matrix().trace();
        prop_assert!((trace.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_measurement_beats_fidelity(dim in 2usize..=4, seed in any::<u64>(), basis in any::<u64>()) {
        let ch = random_channel(dim, seed, 0.5).unwrap();
        let root = fidelity_root(ch.rho0(), ch.rho1()).unwrap();
        let povm = random_basis_povm(dim, basis);
        let coefficient = achieved_coefficient(ch.rho0(), ch.rho1(), &povm).unwrap();
        prop_assert!(coefficient >= root - 1e-9);
        let bures = bures_optimal_measurement(ch.rho0(), ch.rho1()).unwrap();
        let attained = achieved_coefficient(ch.rho0(), ch.rho1(), &bures.optimal_povm).unwrap();
        prop_assert!((attained - root).abs() < 1e-8);
    }

    #[test]
    fn information_and_curvature_chain(
        dim in 2usize..=4,
        seed in any::<u64>(),
        basis in any::<u64>(),
        t in 0.05f64..0.95,
    ) {
        let ch = random_channel(dim, seed, t).unwrap();
        let povm = random_basis_povm(dim, basis);
        let chi = holevo_chi(&ch);
        prop_assert!(mutual_information(&ch, &povm).unwrap() <= chi + 1e-9);
        let m = lower_bound_m(&ch).unwrap();
        prop_assert!(m >= -1e-9 && m <= chi + 1e-9);
        let s2 = s_second_derivative(&ch);
        let l2 = l_second_derivative(&ch).unwrap();
        let i2 = i_second_derivative(&ch, &povm).unwrap();
        prop_assert!(s2 <= l2 + 1e-9);
        prop_assert!(l2 <= i2 + 1e-9);
        prop_assert!(i2 <= 1e-12 + 1e-9);
    }

    #[test]
    fn phi_dominates_harmonic_form(x in 1e-9f64..=1.0, y in 1e-9f64..=1.0) {
        prop_assert!(phi(x, y) >= 2.0 / (x + y) * (1.0 - 1e-12));
        prop_assert!((phi(x, y) - phi(y, x)).abs() <= 1e-12 * phi(x, y));
    }

    #[test]
    fn commuting_states_saturate_holevo(
        p in prop::collection::vec(0.01f64..1.0, 2..=4),
        q in prop::collection::vec(0.01f64..1.0, 4),
        t in 0.05f64..0.95,
    ) {
        let normalize = |v: &[f64]| {
            let s: f64 = v.iter().sum();
            v.iter().map(|x| x / s).collect::<Vec<_>>()
        };
        let p = normalize(&p);
        let q = normalize(&q[..p.len()]);
        let ch = BinaryChannel::new(
            DensityMatrix::diagonal(&p).unwrap(),
            DensityMatrix::diagonal(&q).unwrap(),
            t,
        )
        .unwrap();
        let m = lower_bound_m(&ch).unwrap();
        prop_assert!((m - holevo_chi(&ch)).abs() < 1e-8);
    }

    #[test]
    fn channel_file_round_trips(dim in 1usize..=4, seed in any::<u64>(), t in 0.0f64..=1.0) {
        let ch = random_channel(dim, seed, t).unwrap();
        let back = parse_channel(&render_channel(&ch)).unwrap();
        prop_assert_eq!(back.t(), ch.t());
        prop_assert!(back.rho0().matrix().max_abs_diff(ch.rho0().matrix()) <= 1e-15);
        prop_assert!(back.rho1().matrix().max_abs_diff(ch.rho1().matrix()) <= 1e-15);
    }

    #[test]
    fn finite_differences_match_curvatures(dim in 2usize..=3, seed in any::<u64>(), basis in any::<u64>()) {
        use qdistinguish::oracle::finite_difference_second;
        let ch = well_conditioned(dim, seed, 0.5);
        let povm = random_basis_povm(dim, basis);
        let info = |s: f64| mutual_information(&ch.with_prior(s).unwrap(), &povm).unwrap();
        let chi = |s: f64| holevo_chi(&ch.with_prior(s).unwrap());
        for t in [0.1, 0.5, 0.9] {
            let at = ch.with_prior(t).unwrap();
            let fd_i = finite_difference_second(info, t, 1e-3).unwrap();
            prop_assert!((fd_i - i_second_derivative(&at, &povm).unwrap()).abs() < 1e-4);
            let fd_s = finite_difference_second(chi, t, 1e-3).unwrap();
            prop_assert!((fd_s - s_second_derivative(&at)).abs() < 1e-4);
        }
    }
}

#[test]
fn saved_file_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("channel.json");
    let ch = random_channel(3, 7, 0.3).unwrap();
    save_channel(&ch, &path).unwrap();
    let back = load_channel(&path).unwrap();
    assert!(back.rho0().matrix().max_abs_diff(ch.rho0().matrix()) <= 1e-15);
    assert!(back.rho1().matrix().max_abs_diff(ch.rho1().matrix()) <= 1e-15);
    assert_eq!(back.t(), 0.3);
}

#[test]
fn outcome_probabilities_are_real_and_normalized() {
    let rho = DensityMatrix::pure(&[Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
    let p = outcome_distribution(&rho, &random_basis_povm(2, 3)).unwrap();
    let total: f64 = p.probabilities().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
}
