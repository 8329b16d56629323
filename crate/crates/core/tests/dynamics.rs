//! Real-space propagation, the ring oracle, ray sampling and Lyapunov fits.

use std::collections::BTreeMap;

use nhse_core::dynamics::{
    auto_dt, evolve, evolve_observed, evolve_spectral, lyapunov_estimate, lyapunov_sweep, relative_deviation,
    sample_ray, Boundary, Component, EvolveOptions, LatticeState, LyapunovOptions,
};
use nhse_core::model::{
    bloch_eigenvector, custom, model_app_c, model_i, model_ii, model_iii, model_iv, q_polynomial, Band,
    TwoBandModel,
};
use nhse_core::par::Execution;
use nhse_core::saddle::{lambda_max, lyapunov_predicted};
use nhse_core::{Complex64, Error};
use proptest::prelude::*;

fn named_models() -> Vec<TwoBandModel> {
    vec![
        model_i(1.0, 1.5, 1.0),
        model_ii(0.6, 1.0, 1.0),
        model_iii(0.6, 1.0, 0.3),
        model_iv(1.0, 1.5, 0.2, 0.35),
        model_app_c(-0.5, 1.0),
    ]
}

fn zero_model() -> TwoBandModel {
    custom("zero", BTreeMap::new(), BTreeMap::new(), BTreeMap::new())
}

fn physical(s: &LatticeState, n: usize) -> (Complex64, Complex64) {
    let f = s.log_scale.exp();
    (s.a[n] * f, s.b[n] * f)
}

#[test]
fn zero_hamiltonian_leaves_the_state_unchanged() {
    let init = LatticeState::centered(41);
    let opts = EvolveOptions {
        t_end: 3.0,
        dt: 0.1,
        boundary: Boundary::Obc,
        record_every: 5,
    };
    let traj = evolve(&zero_model(), &init, &opts).unwrap();
    let last = traj.snapshots.last().unwrap();
    assert_eq!(last.a, init.a);
    assert_eq!(last.b, init.b);
    assert_eq!(last.log_scale, 0.0);
    assert!((last.time - 3.0).abs() < 1e-12);
    // 30 steps, stride 5: t = 0, 0.5, …, 3.0.
    assert_eq!(traj.snapshots.len(), 7);

    let ray = sample_ray(&traj, init.center(), 0.0, Component::A);
    assert_eq!(ray.samples.len(), 7);
    assert!(ray.samples.iter().all(|&(_, y)| y == 0.0));
}

#[test]
fn hermitian_evolution_conserves_the_norm() {
    let m = model_ii(0.6, 1.0, 0.0);
    let init = LatticeState::centered(301);
    let n0 = init.log_norm_sq();
    let (end, _) = evolve_observed(&m, &init, 10.0, 0.01, Boundary::Obc, |_| {}).unwrap();
    let drift = (end.log_norm_sq() - n0).exp() - 1.0;
    assert!(drift.abs() <= 1e-8, "{drift}");
}

#[test]
fn integrator_matches_the_ring_oracle_for_all_named_models() {
    for m in named_models() {
        let init = LatticeState::seeded(64, 32);
        let (rk, _) = evolve_observed(&m, &init, 5.0, 0.005, Boundary::Ring, |_| {}).unwrap();
        let exact = evolve_spectral(&m, &init, 5.0, 64).unwrap();
        let dev = relative_deviation(&exact, &rk);
        assert!(dev <= 1e-6, "{}: {dev}", m.label);
    }
}

#[test]
fn open_chain_matches_the_ring_before_the_edges_matter() {
    // Model II has nearest-neighbour hopping: within t = 10 the seeded
    // signal does not reach the ends of 301 cells above round-off.
    let m = model_ii(0.6, 1.0, 1.0);
    let cells = 301;
    let init = LatticeState::centered(cells);
    let (obc, _) = evolve_observed(&m, &init, 10.0, 0.005, Boundary::Obc, |_| {}).unwrap();
    let exact = evolve_spectral(&m, &init, 10.0, cells).unwrap();
    let dev = relative_deviation(&exact, &obc);
    assert!(dev <= 1e-6, "{dev}");
}

#[test]
fn spectral_propagation_at_time_zero_is_the_identity() {
    let m = model_iii(0.6, 1.0, 1.0);
    let init = LatticeState::seeded(32, 5);
    let out = evolve_spectral(&m, &init, 0.0, 32).unwrap();
    assert!(relative_deviation(&init, &out) < 1e-14);
}

#[test]
fn bloch_mode_picks_up_its_phase() {
    let m = model_i(1.0, 1.5, 1.0);
    let cells = 32;
    let j = 5;
    let k = 2.0 * std::f64::consts::PI * j as f64 / cells as f64;
    let u = bloch_eigenvector(&m, k, Band::Plus).unwrap();
    let mut init = LatticeState::zeros(cells);
    for n in 0..cells {
        let w = Complex64::from_polar(1.0, k * n as f64);
        init.a[n] = u[0] * w;
        init.b[n] = u[1] * w;
    }
    let e = q_polynomial(&m).eval_k(k).sqrt();
    let t = 2.5;
    let out = evolve_spectral(&m, &init, t, cells).unwrap();
    let phase = (-Complex64::i() * e * t).exp();
    for n in 0..cells {
        let (a, b) = physical(&out, n);
        assert!((a - init.a[n] * phase).norm() < 1e-12);
        assert!((b - init.b[n] * phase).norm() < 1e-12);
    }
}

#[test]
fn spectral_propagation_rejects_bad_rings() {
    let m = model_i(1.0, 1.5, 1.0);
    assert!(matches!(
        evolve_spectral(&m, &LatticeState::centered(8), 1.0, 8),
        Err(Error::InvalidInput(_))
    ));
    assert!(matches!(
        evolve_spectral(&m, &LatticeState::centered(20), 1.0, 24),
        Err(Error::InvalidInput(_))
    ));
    // Unidirectional model II at t = t′ = δ: Q = 2t²/β has no zero on the
    // circle, while the Hermitian critical chain closes its gap at k = π.
    let critical = model_ii(1.0, 1.0, 0.0);
    assert!(matches!(
        evolve_spectral(&critical, &LatticeState::centered(16), 1.0, 16),
        Err(Error::ExceptionalPoint { .. })
    ));
}

#[test]
fn renormalization_keeps_amplitudes_in_range() {
    let m = model_iii(0.6, 1.0, 1.0);
    let init = LatticeState::centered(201);
    let mut worst: (f64, f64) = (f64::INFINITY, 0.0);
    evolve_observed(&m, &init, 40.0, 0.02, Boundary::Obc, |s| {
        let x = s.max_abs();
        worst = (worst.0.min(x), worst.1.max(x));
    })
    .unwrap();
    assert!(worst.0 >= 1e-8 && worst.1 <= 1e8, "{worst:?}");
}

#[test]
fn instability_is_reported() {
    let m = model_i(1.0, 1.5, 1.0);
    let err = evolve_observed(&m, &LatticeState::centered(101), 200.0, 2.0, Boundary::Obc, |_| {}).unwrap_err();
    assert!(matches!(err, Error::Instability { .. }), "{err}");
}

#[test]
fn invalid_steps_are_rejected() {
    let m = model_i(1.0, 1.5, 1.0);
    let init = LatticeState::centered(101);
    assert!(evolve_observed(&m, &init, 1.0, 0.0, Boundary::Obc, |_| {}).is_err());
    assert!(evolve_observed(&m, &init, -1.0, 0.1, Boundary::Obc, |_| {}).is_err());
}

#[test]
fn fast_rays_decay() {
    let m = model_i(1.0, 1.5, 1.0);
    let est = lyapunov_estimate(&m, 3.0, &LyapunovOptions::default()).unwrap();
    assert!(est.lambda < -0.5, "{est:?}");
}

#[test]
fn ray_sampling_follows_the_nearest_site() {
    let m = model_ii(0.6, 1.0, 1.0);
    let init = LatticeState::centered(121);
    let traj = evolve(
        &m,
        &init,
        &EvolveOptions {
            t_end: 20.0,
            dt: 0.01,
            boundary: Boundary::Obc,
            record_every: 10,
        },
    )
    .unwrap();
    let ray = sample_ray(&traj, init.center(), 1.3, Component::B);
    assert!(ray.truncated_at.is_none());
    assert!(ray.samples.windows(2).all(|w| w[0].0 < w[1].0));
    assert_eq!(*ray.sites_visited.first().unwrap(), 0);
    assert_eq!(*ray.sites_visited.last().unwrap(), 26);
    for (&(t, y), snap) in ray.samples.iter().zip(&traj.snapshots) {
        let n = init.center() as i64 + (1.3 * t).round() as i64;
        let (_, b) = physical(snap, n as usize);
        assert!((b.norm().ln() - y).abs() < 1e-9);
    }

    // A ray leaving the safe interior is truncated at its last safe time.
    let fast = sample_ray(&traj, init.center(), 4.0, Component::A);
    let last = fast.truncated_at.expect("ray leaves the chain");
    assert!(last < 20.0 && last > 10.0, "{last}");
    assert!(fast.samples.last().unwrap().0 <= last);
}

#[test]
fn lyapunov_examples() {
    let opts = LyapunovOptions::default();
    let cases = [
        (model_iii(0.6, 1.0, 1.0), 0.80, 0.05),
        (model_iii(0.6, 1.0, 0.3), 0.0, 0.02),
        (model_i(1.0, 1.5, 1.0), 0.866, 0.02),
        (model_ii(0.6, 1.0, 0.0), 0.0, 0.02),
    ];
    for (m, want, tol) in cases {
        let est = lyapunov_estimate(&m, 0.0, &opts).unwrap();
        assert!((est.lambda - want).abs() <= tol, "{}: {} vs {want}", m.label, est.lambda);
        assert!(est.stderr >= 0.0);
        assert!(est.n_points >= 5);
        assert!(!est.truncated);
        assert!((est.fit_window.0 - 32.0).abs() < 1e-12 && (est.fit_window.1 - 80.0).abs() < 1e-12);
        assert_eq!(est.n_points, 961);
    }
}

#[test]
fn sweep_tracks_the_saddle_prediction_and_the_bound() {
    let grid: Vec<f64> = (-10..=10).map(|i| i as f64 * 0.2).collect();
    for m in [model_i(1.0, 1.5, 1.0), model_ii(0.6, 1.0, 1.0)] {
        let (lm, _) = lambda_max(&m);
        let est = lyapunov_sweep(&m, &grid, &LyapunovOptions::default(), Execution::Parallel).unwrap();
        for e in est {
            let e = e.unwrap();
            assert!(e.lambda <= lm + 0.05, "{} v={}", m.label, e.velocity);
            let p = lyapunov_predicted(&m, e.velocity).unwrap();
            assert!((e.lambda - p).abs() <= 0.05, "{} v={}: {} vs {p}", m.label, e.velocity, e.lambda);
        }
    }
}

#[test]
fn sweep_matches_single_estimates_in_both_execution_modes() {
    let m = model_iv(1.0, 1.5, 0.2, 0.35);
    let opts = LyapunovOptions {
        cells: 201,
        t_end: 20.0,
        ..LyapunovOptions::default()
    };
    let grid = [-0.5, 0.0, 0.7];
    let par = lyapunov_sweep(&m, &grid, &opts, Execution::Parallel).unwrap();
    let seq = lyapunov_sweep(&m, &grid, &opts, Execution::Sequential).unwrap();
    for ((v, p), s) in grid.iter().zip(par).zip(seq) {
        let single = lyapunov_estimate(&m, *v, &opts).unwrap();
        assert_eq!(p.unwrap(), single);
        assert_eq!(s.unwrap(), single);
    }
}

#[test]
fn halving_the_step_barely_moves_the_estimate() {
    let m = model_iii(0.6, 1.0, 1.0);
    let base = LyapunovOptions {
        cells: 301,
        t_end: 20.0,
        ..LyapunovOptions::default()
    };
    let dt = auto_dt(&m);
    for v in [0.0, 0.6, -0.8] {
        let a = lyapunov_estimate(&m, v, &LyapunovOptions { dt: Some(dt), ..base }).unwrap();
        let b = lyapunov_estimate(&m, v, &LyapunovOptions { dt: Some(dt / 2.0), ..base }).unwrap();
        assert!((a.lambda - b.lambda).abs() < 1e-4, "v={v}: {} vs {}", a.lambda, b.lambda);
    }
}

#[test]
fn doubling_the_chain_barely_moves_the_estimate() {
    let m = model_ii(0.6, 1.0, 1.0);
    let grid: Vec<f64> = (-4..=4).map(|i| i as f64 * 0.5).collect();
    let short = LyapunovOptions {
        cells: 301,
        t_end: 10.0,
        ..LyapunovOptions::default()
    };
    let long = LyapunovOptions { cells: 601, ..short };
    let a = lyapunov_sweep(&m, &grid, &short, Execution::Parallel).unwrap();
    let b = lyapunov_sweep(&m, &grid, &long, Execution::Parallel).unwrap();
    for (x, y) in a.into_iter().zip(b) {
        let (x, y) = (x.unwrap(), y.unwrap());
        assert!((x.lambda - y.lambda).abs() < 1e-3, "v={}", x.velocity);
    }
}

#[test]
fn options_are_validated() {
    let m = model_i(1.0, 1.5, 1.0);
    let bad = [
        LyapunovOptions {
            cells: 100,
            ..LyapunovOptions::default()
        },
        LyapunovOptions {
            t_end: 4.0,
            ..LyapunovOptions::default()
        },
        LyapunovOptions {
            fit_lo_frac: 1.0,
            ..LyapunovOptions::default()
        },
        LyapunovOptions {
            dt: Some(-0.1),
            ..LyapunovOptions::default()
        },
    ];
    for o in bad {
        assert!(matches!(lyapunov_estimate(&m, 0.0, &o), Err(Error::InvalidInput(_))), "{o:?}");
    }
}

#[test]
fn underflowing_rays_report_insufficient_data() {
    // Cusp-model chain at t = −1, δ = 0: left-moving rays decay so fast
    // relative to the growing front that they underflow.
    let m = model_app_c(-1.0, 0.0);
    let err = lyapunov_estimate(&m, -1.0, &LyapunovOptions::default()).unwrap_err();
    assert!(matches!(err, Error::InsufficientData { .. }), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ring_oracle_agrees_for_random_models(t in -1.2f64..1.2, tp in -1.2f64..1.2, d in -1.0f64..1.0, seed in 0usize..32) {
        for m in [model_i(t, tp, d), model_iii(t, tp, d)] {
            let init = LatticeState::seeded(32, seed);
            let Ok(exact) = evolve_spectral(&m, &init, 2.0, 32) else { continue };
            let (rk, _) = evolve_observed(&m, &init, 2.0, 0.005, Boundary::Ring, |_| {}).unwrap();
            prop_assert!(relative_deviation(&exact, &rk) < 1e-6);
        }
    }
}
