//! Saddle equation, saddle reports, predicted exponents and verdicts.

use std::f64::consts::PI;

use nhse_core::model::{model_app_c, model_i, model_ii, model_iii, model_iv, q_polynomial, TwoBandModel};
use nhse_core::numerics::{directed_hausdorff, eval_polynomial, point_to_set, polynomial_roots};
use nhse_core::par::Execution;
use nhse_core::saddle::{
    growth_bound, lambda_max, lyapunov_predicted, nhse_verdict, saddle_equation, saddle_points, saddle_sweep,
    SaddleOptions, Verdict,
};
use nhse_core::spectra::{obc_spectrum, ObcMethod, PbcGeometry};
use nhse_core::{Complex64, Error};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn named_models() -> Vec<TwoBandModel> {
    vec![
        model_i(1.0, 1.5, 1.0),
        model_ii(0.6, 1.0, 1.0),
        model_iii(0.6, 1.0, 0.3),
        model_iv(1.0, 1.5, 0.2, 0.35),
        model_app_c(-0.5, 1.0),
    ]
}

fn velocity_grid(step: f64, max: f64) -> Vec<f64> {
    let n = (max / step).round() as i32;
    (-n..=n).map(|i| i as f64 * step).collect()
}

#[test]
fn model_i_equation_matches_the_printed_quartic() {
    let (t, tp, d) = (1.0, 1.5, 1.0);
    for v in [0.3, 0.7, 1.4] {
        let eq = saddle_equation(&model_i(t, tp, d), v).unwrap();
        assert_eq!(eq.len(), 5);
        let lead = eq[0];
        let normalized: Vec<Complex64> = eq.iter().map(|x| x / lead).collect();
        let c13 = 4.0 * v * v / (t * tp);
        let c2 = -2.0 + 4.0 * v * v * (t * t + tp * tp - d * d) / (t * t * tp * tp);
        let expect = [1.0, c13, c2, c13, 1.0];
        for (got, want) in normalized.iter().zip(expect) {
            assert!((got - c(want, 0.0)).norm() < 1e-12, "v={v}: {got} vs {want}");
        }
    }
}

#[test]
fn model_iii_saddles_below_the_transition() {
    let eq = saddle_equation(&model_iii(0.6, 1.0, 0.3), 0.0).unwrap();
    let roots = polynomial_roots(&eq).unwrap();
    let r = 3f64.sqrt();
    for want in [c(r, 0.0), c(-r, 0.0)] {
        assert!(point_to_set(want, &roots) < 1e-9, "{roots:?}");
    }
    assert_eq!(roots.len(), 2);
    assert!(lyapunov_predicted(&model_iii(0.6, 1.0, 0.3), 0.0).unwrap().abs() < 1e-9);
}

#[test]
fn app_c_saddles_are_cube_roots() {
    for (t, d) in [(-0.5, 1.0), (-1.0, 1.0), (0.7, 0.4)] {
        let eq = saddle_equation(&model_app_c(t, d), 0.0).unwrap();
        let roots: Vec<Complex64> = polynomial_roots(&eq).unwrap().into_iter().filter(|r| r.norm() > 1e-9).collect();
        assert_eq!(roots.len(), 3);
        let target = c(-1.0 / (2.0 * t * d), 0.0);
        for r in &roots {
            assert!((r * r * r - target).norm() < 1e-9, "t={t}: {r}");
        }
    }
}

#[test]
fn model_iii_saddles_above_the_transition() {
    let rep = saddle_points(&model_iii(0.6, 1.0, 1.0), 0.0).unwrap();
    let betas: Vec<Complex64> = rep.saddles.iter().map(|s| s.beta_s).collect();
    assert_eq!(betas.len(), 2);
    for want in [c(0.0, 2.0), c(0.0, -2.0)] {
        assert!(point_to_set(want, &betas) < 1e-9, "{betas:?}");
    }
    assert!((rep.lambda_pred - 0.8).abs() < 1e-9, "{}", rep.lambda_pred);
    let psi = 0.6f64.atanh();
    for s in &rep.saddles {
        assert!((s.k_s.im + psi).abs() < 1e-9);
        assert!((s.k_s.re.abs() - PI / 2.0).abs() < 1e-9);
    }
}

#[test]
fn model_i_saddles_sit_at_plus_minus_one() {
    let rep = saddle_points(&model_i(1.0, 1.5, 1.0), 0.0).unwrap();
    let betas: Vec<Complex64> = rep.saddles.iter().map(|s| s.beta_s).collect();
    for want in [c(1.0, 0.0), c(-1.0, 0.0)] {
        assert!(point_to_set(want, &betas) < 1e-9);
    }
    assert!(rep.saddles.iter().all(|s| s.on_unit_circle));
    assert!((rep.lambda_pred - 0.75f64.sqrt()).abs() < 1e-9);
}

#[test]
fn hermitian_candidates_vanish() {
    let rep = saddle_points(&model_ii(0.6, 1.0, 0.0), 0.0).unwrap();
    assert!(!rep.saddles.is_empty());
    for s in &rep.saddles {
        assert!(s.lyapunov_candidate.abs() < 1e-12);
        assert!(s.branch_candidates.iter().all(|x| x.abs() < 1e-12));
    }
}

#[test]
fn constant_symbol_is_rejected() {
    let m = model_ii(0.0, 0.0, 0.5);
    assert!(matches!(saddle_equation(&m, 0.3), Err(Error::DegenerateInput(_))));
}

#[test]
fn zero_velocity_equation_is_the_derivative_numerator() {
    for m in named_models() {
        let q = q_polynomial(&m);
        let deriv_roots = polynomial_roots(&q.derivative().numerator_highest_first()).unwrap();
        let deriv_roots: Vec<Complex64> = deriv_roots.into_iter().filter(|r| r.norm() > 1e-9).collect();
        let rep = saddle_points(&m, 0.0).unwrap();
        let betas: Vec<Complex64> = rep.saddles.iter().map(|s| s.beta_s).collect();
        assert!(directed_hausdorff(&betas, &deriv_roots) < 1e-9, "{}", m.label);
        assert!(directed_hausdorff(&deriv_roots, &betas) < 1e-9, "{}", m.label);
    }
}

#[test]
fn saddle_energies_lie_on_the_open_chain_spectrum() {
    for m in [
        model_ii(0.6, 1.0, 1.0),
        model_iii(0.6, 1.0, 0.3),
        model_iv(1.0, 1.5, 0.2, 0.35),
    ] {
        let bulk = obc_spectrum(&m, 60, ObcMethod::Full).unwrap().bulk();
        for s in saddle_points(&m, 0.0).unwrap().saddles {
            for e in [s.energy, s.energy_alt] {
                let d = point_to_set(e, &bulk);
                assert!(d <= 0.02, "{}: saddle energy {e} is {d} from the spectrum", m.label);
            }
        }
    }
}

#[test]
fn predictions_respect_the_bloch_bound_and_reach_it() {
    let grid = velocity_grid(0.05, 2.5);
    for m in named_models() {
        let (lm, vg) = lambda_max(&m);
        let reports = saddle_sweep(&m, &grid, &SaddleOptions::default(), Execution::Parallel);
        let preds: Vec<f64> = reports.into_iter().map(|r| r.unwrap().lambda_pred).collect();
        for (v, p) in grid.iter().zip(&preds) {
            assert!(*p <= lm + 1e-8, "{} v={v}: {p} > {lm}", m.label);
        }
        let (imax, pmax) = preds
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!((pmax - lm).abs() <= 1e-3, "{}: peak {pmax} vs {lm}", m.label);
        // The peak velocity is the group velocity of the fastest-growing
        // Bloch mode (or one of them when several share the maximum).
        let vpeak = grid[imax];
        let near: Vec<f64> = grid
            .iter()
            .zip(&preds)
            .filter(|(_, p)| (lm - **p).abs() <= 1e-3)
            .map(|(v, _)| *v)
            .collect();
        assert!(
            near.iter().any(|v| (v - vg).abs() <= 0.05 + 1e-9) || (vpeak - vg).abs() <= 0.05 + 1e-9,
            "{}: group velocity {vg} not among peak velocities {near:?}",
            m.label
        );
    }
}

#[test]
fn models_ii_and_iii_share_reports() {
    for (t, tp, d) in [(0.6, 1.0, 0.3), (0.6, 1.0, 1.0), (1.1, 0.7, 0.4)] {
        for v in [0.0, 0.35, -1.2] {
            let a = saddle_points(&model_ii(t, tp, d), v).unwrap();
            let b = saddle_points(&model_iii(t, tp, d), v).unwrap();
            assert_eq!(a.saddles.len(), b.saddles.len());
            assert!((a.lambda_pred - b.lambda_pred).abs() < 1e-12);
            let ba: Vec<Complex64> = a.saddles.iter().map(|s| s.beta_s).collect();
            let bb: Vec<Complex64> = b.saddles.iter().map(|s| s.beta_s).collect();
            assert!(directed_hausdorff(&ba, &bb) < 1e-12);
        }
    }
}

#[test]
fn principal_branch_and_imaginary_wavenumber() {
    for m in named_models() {
        for v in [0.0, 0.4, -0.9] {
            let rep = saddle_points(&m, v).unwrap();
            for s in &rep.saddles {
                assert!(s.k_s.re > -PI - 1e-12 && s.k_s.re <= PI + 1e-12);
                assert!((s.k_s.im + s.beta_s.norm().ln()).abs() < 1e-12);
                // Shifting k by 2π changes only the real part, hence not λ.
                let shifted = s.k_s + 2.0 * PI;
                let cand = s.energy.im - v * shifted.im;
                assert!((cand - s.branch_candidates[0]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn verdicts_for_the_named_models() {
    let expect = [
        (model_i(1.0, 1.5, 1.0), Verdict::NoNhse),
        (model_ii(0.6, 1.0, 1.0), Verdict::Nhse),
        (model_iii(0.6, 1.0, 0.3), Verdict::Nhse),
        (model_iv(1.0, 1.5, 0.2, 0.35), Verdict::Nhse),
        (model_app_c(-0.5, 1.0), Verdict::ExceptionalCusp),
        (model_app_c(-1.0, 1.0), Verdict::Nhse),
    ];
    for (m, v) in expect {
        let rep = nhse_verdict(&m, 1e-4, 512).unwrap();
        assert_eq!(rep.verdict, v, "{}", m.label);
    }
    let cusp = nhse_verdict(&model_app_c(-0.5, 1.0), 1e-4, 512).unwrap();
    assert_eq!(cusp.saddle_radii.len(), 3);
    for r in &cusp.saddle_radii {
        assert!((r - 1.0).abs() < 1e-9);
    }
    assert!(cusp.cusps.iter().all(|&c| c));
    let off = nhse_verdict(&model_app_c(-1.0, 1.0), 1e-4, 512).unwrap();
    assert!(off.max_radius_offset > 0.01);
    let arcs = nhse_verdict(&model_i(1.0, 1.5, 1.0), 1e-4, 512).unwrap();
    assert_eq!(arcs.geometry, PbcGeometry::OpenArcs);
    assert!(arcs.cusps.iter().all(|&c| !c));
}

#[test]
fn lambda_max_of_model_i() {
    let (lm, vg) = lambda_max(&model_i(1.0, 1.5, 1.0));
    assert!((lm - 0.75f64.sqrt()).abs() < 1e-9);
    assert!(vg.abs() < 1e-6);
}

#[test]
fn growth_bound_dominates_every_admissible_candidate() {
    for m in named_models() {
        for v in [-1.0, 0.0, 0.5] {
            let rep = saddle_points(&m, v).unwrap();
            let (bound, _) = growth_bound(&m, v, 1024);
            assert!((bound - rep.growth_bound).abs() < 1e-9);
            assert!(rep.lambda_pred <= bound + 1e-6 * (1.0 + bound.abs()));
            assert!(rep.lambda_unrestricted >= rep.lambda_pred - 1e-12 || rep.bound_fallback);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn saddles_solve_the_equation(t in 0.2f64..1.5, tp in 0.2f64..1.5, d in -1.5f64..1.5, v in -2.0f64..2.0) {
        for m in [model_i(t, tp, d), model_ii(t, tp, d), model_app_c(-t, d)] {
            let eq = saddle_equation(&m, v).unwrap();
            let rep = saddle_points(&m, v).unwrap();
            let scale: f64 = eq.iter().map(|x| x.norm()).fold(0.0, f64::max);
            for s in &rep.saddles {
                let r = s.beta_s.norm().max(1.0);
                let res = eval_polynomial(&eq, s.beta_s).norm() / (scale * r.powi(eq.len() as i32 - 1));
                prop_assert!(res < 1e-9, "{}: residual {res}", m.label);
                prop_assert!((s.k_s.im + s.beta_s.norm().ln()).abs() < 1e-12);
                prop_assert!(s.order >= 2);
            }
        }
    }

    #[test]
    fn prediction_never_exceeds_the_bloch_maximum(t in 0.2f64..1.5, tp in 0.2f64..1.5, d in -1.5f64..1.5, v in -2.0f64..2.0) {
        for m in [model_i(t, tp, d), model_ii(t, tp, d)] {
            let (lm, _) = lambda_max(&m);
            let p = lyapunov_predicted(&m, v).unwrap();
            prop_assert!(p <= lm + 1e-6, "{}: {p} > {lm}", m.label);
        }
    }
}
