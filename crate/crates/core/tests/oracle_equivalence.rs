//! The Gaussian path against the truncated Fock-space master equations.

use nalgebra::DMatrix;
use num_complex::Complex64;
use oscdamp::bogoliubov::diagonalize;
use oscdamp::dynamics::{evolve, initial_exponent, moment_distance, moments};
use oscdamp::fock_oracle::{
    build_local_superop, build_nonlocal_bare_superop, build_nonlocal_superop, ground_state, integrate, DensityMatrix,
    ModeOperators, TruncatedSystem,
};
use oscdamp::generators::{build_local, build_nonlocal_thermal};
use oscdamp::measures::log_negativity;
use oscdamp::model::{InitialState, ModeState, ModelParams};
use oscdamp::steady::{ground_state_covariance, steady_exponent};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn matrix_unit(dim: usize, i: usize, j: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(dim, dim);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

/// Largest element difference of the two superoperators, column by column.
fn superop_distance(x: &TruncatedSystem, y: &TruncatedSystem) -> f64 {
    let dim = x.dim();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let e = matrix_unit(dim, i, j);
            worst = worst.max((x.apply(&e) - y.apply(&e)).camax());
        }
    }
    worst
}

#[test]
fn eigenmode_and_bare_constructions_agree_on_matrix_units() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..6 {
        let kappa = rng.random_range(-0.3..0.3);
        let lambda = (1.0 - f64::abs(kappa)) * rng.random_range(-0.8..0.8);
        let gamma = rng.random_range(0.001..0.1);
        let nbar = rng.random_range(0.0..1.0);
        let p = ModelParams::symmetric(1.0, kappa, lambda, gamma).with_nbar(nbar);
        let d = superop_distance(
            &build_nonlocal_superop(&p, 4).unwrap(),
            &build_nonlocal_bare_superop(&p, 4).unwrap(),
        );
        assert!(d < 1e-12, "{p:?}: {d:e}");
    }
}

#[test]
fn rwa_superoperators_coincide() {
    for kappa in [0.0, 0.05, 0.25] {
        let p = ModelParams::symmetric(1.0, kappa, 0.0, 0.01);
        let d = superop_distance(
            &build_local_superop(&p, 4).unwrap(),
            &build_nonlocal_superop(&p, 4).unwrap(),
        );
        assert!(d < 1e-12, "kappa = {kappa}: {d:e}");
    }
}

#[test]
fn strong_coupling_negativity_matches_oracle() {
    let p = ModelParams::symmetric(1.0, 0.0, 1.0 / 3.0, 0.01);
    let s0 = initial_exponent(&InitialState::vacuum()).unwrap();
    let rho0 = DensityMatrix::vacuum(10).unwrap();
    for (gen, sys) in [
        (build_local(&p).unwrap(), build_local_superop(&p, 10).unwrap()),
        (
            build_nonlocal_thermal(&p).unwrap(),
            build_nonlocal_superop(&p, 10).unwrap(),
        ),
    ] {
        let gauss = evolve(&s0, &gen, 20.0, 1.0).unwrap();
        let fock = integrate(&sys, &rho0, 20.0, 1.0).unwrap();
        for (g, f) in gauss.iter().zip(&fock) {
            let lg = log_negativity(&moments(g).covariance()).unwrap();
            let lf = log_negativity(&f.moments(&sys.ops).covariance()).unwrap();
            assert!((lg - lf).abs() < 1e-4, "{:?} t = {}: {lg} vs {lf}", gen.model, g.t);
        }
    }
}

#[test]
fn non_gaussian_looking_start_still_agrees() {
    // Squeezed and thermal product start, thermal baths, both models.
    let p = ModelParams::symmetric(1.0, 0.1, 0.15, 0.02).with_nbar(0.2);
    let init = InitialState {
        a: ModeState::squeezed(0.2, 1.1),
        b: ModeState::thermal(0.1),
    };
    let s0 = initial_exponent(&init).unwrap();
    let rho0 = DensityMatrix::product_gaussian(&init, 12).unwrap();
    for (gen, sys) in [
        (build_local(&p).unwrap(), build_local_superop(&p, 12).unwrap()),
        (
            build_nonlocal_thermal(&p).unwrap(),
            build_nonlocal_superop(&p, 12).unwrap(),
        ),
    ] {
        let gauss = evolve(&s0, &gen, 6.0, 2.0).unwrap();
        let fock = integrate(&sys, &rho0, 6.0, 2.0).unwrap();
        for (g, f) in gauss.iter().zip(&fock) {
            assert!(
                moment_distance(&moments(g), &f.moments(&sys.ops)) < 1e-5,
                "{:?} t = {}",
                gen.model,
                g.t
            );
        }
    }
}

#[test]
fn truncated_ground_state_matches_nonlocal_steady_state() {
    let p = ModelParams::symmetric(1.0, 0.0, 1.0 / 3.0, 0.01);
    let fock = ground_state(&p, 20).unwrap();
    let ops = ModeOperators::new(20).unwrap();
    let from_fock = fock.moments(&ops).covariance();
    let steady = steady_exponent(&build_nonlocal_thermal(&p).unwrap())
        .unwrap()
        .covariance;
    let closed = ground_state_covariance(&diagonalize(&p));
    assert!((from_fock.v - closed.v).abs().max() < 1e-8);
    assert!((steady.v - closed.v).abs().max() < 1e-8);
}
