//! Saddle points of the dispersion, predicted Lyapunov exponents and the
//! skin-effect verdict.
//!
//! Along the ray `n = vt` the amplitude grows like `exp(λ(v) t)` with
//!
//! ```text
//! λ(v) = Im E(k_s) − v Im k_s,     dE/dk (k_s) = v,
//! ```
//!
//! where `E = ±√Q(e^{ik})`. Squaring the saddle condition gives the
//! polynomial equation `(dQ/dk)² = 4v²Q`, i.e. `(iβ dQ/dβ)² − 4v²Q(β) = 0`,
//! which is built here symbolically from the Laurent polynomial `Q`.
//!
//! # Which saddle dominates
//!
//! Not every root of the saddle equation lies on a steepest-descent contour
//! through which the integral can actually be deformed. Taking the plain
//! maximum of `Im E − v Im k` over all roots and both branches can exceed
//! the true growth rate (for model II at `v = 0` it predicts more than the
//! largest `Im E` on the Brillouin zone, which no bulk mode can beat). The
//! prediction here therefore combines three ingredients:
//!
//! 1. only the energy branch whose group velocity `dE/dk` equals `v` counts
//!    (at `v = 0` both branches do);
//! 2. every contour `|β| = e^s` bounds the growth:
//!    `Λ(v) = min_s max_ϕ [ |Im √Q(e^{s+iϕ})| + v s ]` is a rigorous upper
//!    bound, and `max_ϕ |Im √Q|` is convex in `s`, so the minimum is found
//!    by ternary search;
//! 3. the predicted exponent is the largest candidate not exceeding `Λ(v)`;
//!    if none qualifies the bound itself is reported and
//!    [`SaddleReport::bound_fallback`] is set.
//!
//! The unrestricted maximum is still reported as
//! [`SaddleReport::lambda_unrestricted`] for comparison.

use std::f64::consts::PI;

use crate::model::{q_polynomial, LaurentPolynomial, TwoBandModel};
use crate::numerics::polynomial_roots;
use crate::par::{self, Execution};
use crate::spectra::{classify_pbc_geometry, PbcGeometry};
use crate::{Complex64, Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Tuning knobs for saddle analysis.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SaddleOptions {
    /// `||β_s| − 1| ≤ radius_tol` counts as on the unit circle.
    pub radius_tol: f64,
    /// Slack allowed when comparing a candidate with the contour bound `Λ(v)`.
    pub admissibility_tol: f64,
    /// Angular samples per circle when evaluating `Λ(v)`.
    pub angle_samples: usize,
}

impl Default for SaddleOptions {
    fn default() -> Self {
        Self {
            radius_tol: 1e-4,
            admissibility_tol: 1e-6,
            angle_samples: 1024,
        }
    }
}

/// One root `β_s` of the saddle equation.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SaddlePoint {
    pub beta_s: Complex64,
    /// `k_s = −i Log β_s` (principal branch), so `Im k_s = −ln|β_s|`.
    pub k_s: Complex64,
    /// `±√Q(β_s)`, the branch with the larger imaginary part.
    pub energy: Complex64,
    /// The other branch, `−energy`.
    pub energy_alt: Complex64,
    /// Order `n` of the saddle, `Q ≃ Q(β_s) + α (β − β_s)ⁿ`.
    pub order: u32,
    /// `Im E − v Im k_s` for `[energy, energy_alt]`.
    pub branch_candidates: [f64; 2],
    /// Whether each branch has group velocity `dE/dk = v` at `k_s`.
    pub velocity_consistent: [bool; 2],
    /// Largest candidate over velocity-consistent branches.
    pub lyapunov_candidate: f64,
    /// Candidate does not exceed the contour bound `Λ(v)`.
    pub admissible: bool,
    /// `||β_s| − 1| ≤ radius_tol`.
    pub on_unit_circle: bool,
}

/// All saddles for one drift velocity together with the prediction.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SaddleReport {
    pub velocity: f64,
    pub saddles: Vec<SaddlePoint>,
    /// Index of the saddle that sets `lambda_pred` (none on fallback).
    pub dominant: Option<usize>,
    /// Predicted Lyapunov exponent `λ(v)`.
    pub lambda_pred: f64,
    /// Contour bound `Λ(v)`.
    pub growth_bound: f64,
    /// Radius `e^{s*}` of the optimal bounding contour.
    pub bound_radius: f64,
    /// `max` of `Im E − v Im k` over every saddle and both branches.
    pub lambda_unrestricted: f64,
    /// No admissible saddle was found and `lambda_pred = growth_bound`.
    pub bound_fallback: bool,
}

impl SaddleReport {
    /// The dominant saddle, if any.
    pub fn dominant_saddle(&self) -> Option<&SaddlePoint> {
        self.dominant.map(|i| &self.saddles[i])
    }

    /// All saddle radii `|β_s|`.
    pub fn radii(&self) -> Vec<f64> {
        self.saddles.iter().map(|s| s.beta_s.norm()).collect()
    }
}

/// Coefficients (highest degree first) of the saddle equation.
///
/// For `v ≠ 0` this is `β^{−n_min}[(iβ Q′)² − 4v²Q]`; at `v = 0` it is the
/// numerator of `dQ/dβ`. Coefficients below `1e-14` of the largest are
/// treated as round-off and dropped.
pub fn saddle_equation(model: &TwoBandModel, v: f64) -> Result<Vec<Complex64>> {
    saddle_equation_of(&q_polynomial(model), v).map(|p| p.numerator_highest_first())
}

fn saddle_equation_of(q: &LaurentPolynomial, v: f64) -> Result<LaurentPolynomial> {
    if q.is_constant() {
        return Err(Error::DegenerateInput("constant symbol Q has no saddle points".into()));
    }
    let dq = q.euler();
    let eq = if v == 0.0 {
        dq
    } else {
        let dqdk = dq.scale(I);
        &(&dqdk * &dqdk) - &q.scale(Complex64::new(4.0 * v * v, 0.0))
    };
    Ok(eq.chopped(1e-14))
}

/// Saddle points for drift velocity `v` and the predicted exponent.
pub fn saddle_points(model: &TwoBandModel, v: f64) -> Result<SaddleReport> {
    saddle_points_with(model, v, &SaddleOptions::default())
}

/// [`saddle_points`] with explicit options.
pub fn saddle_points_with(model: &TwoBandModel, v: f64, opts: &SaddleOptions) -> Result<SaddleReport> {
    let q = q_polynomial(model);
    let eq = saddle_equation_of(&q, v)?;
    let roots = if eq.n_max() == eq.n_min() {
        Vec::new()
    } else {
        polynomial_roots(&eq.numerator_highest_first())?
    };
    let dq = q.euler();
    let (growth_bound, s_star) = growth_bound_of(&q, v, opts.angle_samples);
    let tol = opts.admissibility_tol * (1.0 + growth_bound.abs());

    let saddles: Vec<SaddlePoint> = roots
        .iter()
        .filter(|b| b.norm() > 1e-12)
        .map(|&beta| {
            let root = q.eval(beta).sqrt();
            let energy = if root.im >= 0.0 { root } else { -root };
            let branches = [energy, -energy];
            let ln_r = beta.norm().ln();
            let dqdk = I * dq.eval(beta);
            let branch_candidates = branches.map(|e| e.im + v * ln_r);
            let velocity_consistent = if v == 0.0 {
                [true, true]
            } else {
                let vel = branches.map(|e| if e.norm() > 0.0 { dqdk / (e * 2.0) } else { Complex64::new(0.0, 0.0) });
                let d0 = (vel[0] - v).norm();
                let d1 = (vel[1] - v).norm();
                [d0 <= d1, d1 <= d0]
            };
            let lyapunov_candidate = (0..2)
                .filter(|&b| velocity_consistent[b])
                .map(|b| branch_candidates[b])
                .fold(f64::NEG_INFINITY, f64::max);
            SaddlePoint {
                beta_s: beta,
                k_s: -I * beta.ln(),
                energy,
                energy_alt: -energy,
                order: saddle_order(&q, &roots, beta, v),
                branch_candidates,
                velocity_consistent,
                lyapunov_candidate,
                admissible: lyapunov_candidate <= growth_bound + tol,
                on_unit_circle: (beta.norm() - 1.0).abs() <= opts.radius_tol,
            }
        })
        .collect();

    let lambda_unrestricted = saddles
        .iter()
        .flat_map(|s| s.branch_candidates)
        .fold(f64::NEG_INFINITY, f64::max);
    let dominant = (0..saddles.len())
        .filter(|&i| saddles[i].admissible)
        .max_by(|&a, &b| saddles[a].lyapunov_candidate.total_cmp(&saddles[b].lyapunov_candidate));
    let (lambda_pred, bound_fallback) = match dominant {
        Some(i) => (saddles[i].lyapunov_candidate, false),
        None => (growth_bound, true),
    };
    Ok(SaddleReport {
        velocity: v,
        saddles,
        dominant,
        lambda_pred,
        growth_bound,
        bound_radius: s_star.exp(),
        lambda_unrestricted,
        bound_fallback,
    })
}

/// Order of the saddle at `beta`.
///
/// At `v = 0` this is the index of the first non-vanishing derivative of `Q`
/// (at least 2). For `v ≠ 0` it is one plus the multiplicity of `beta` as a
/// root of the saddle equation.
fn saddle_order(q: &LaurentPolynomial, roots: &[Complex64], beta: Complex64, v: f64) -> u32 {
    if v == 0.0 {
        let scale: f64 = q.terms().map(|(n, c)| c.norm() * beta.norm().powi(n)).sum();
        let mut deriv = q.derivative();
        let mut factorial = 1.0;
        for n in 2..=12u32 {
            deriv = deriv.derivative();
            factorial *= n as f64;
            let term = deriv.eval(beta).norm() * beta.norm().powi(n as i32) / factorial;
            if term > 1e-7 * scale {
                return n;
            }
        }
        12
    } else {
        let close = roots
            .iter()
            .filter(|r| (*r - beta).norm() <= 1e-5 * (1.0 + beta.norm()))
            .count() as u32;
        1 + close.max(1)
    }
}

/// The contour bound `Λ(v) = min_s max_ϕ [|Im √Q(e^{s+iϕ})| + v s]` and the
/// optimal `s`.
pub fn growth_bound(model: &TwoBandModel, v: f64, angle_samples: usize) -> (f64, f64) {
    growth_bound_of(&q_polynomial(model), v, angle_samples)
}

fn growth_bound_of(q: &LaurentPolynomial, v: f64, angle_samples: usize) -> (f64, f64) {
    let g = |s: f64| circle_max_im_sqrt(q, s, angle_samples) + v * s;
    let (mut lo, mut hi) = (-8.0, 8.0);
    for _ in 0..120 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) < g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
        if hi - lo < 1e-11 {
            break;
        }
    }
    let s = 0.5 * (lo + hi);
    (g(s), s)
}

/// `max_ϕ |Im √Q(e^{s+iϕ})|`: grid search followed by golden-section
/// refinement of the best local maxima.
pub fn circle_max_im_sqrt(q: &LaurentPolynomial, s: f64, samples: usize) -> f64 {
    let r = s.exp();
    let f = |phi: f64| q.eval(Complex64::from_polar(r, phi)).sqrt().im.abs();
    let n = samples.max(16);
    let h = 2.0 * PI / n as f64;
    let vals: Vec<f64> = (0..n).map(|j| f(-PI + h * j as f64)).collect();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&j| vals[j] >= vals[(j + n - 1) % n] && vals[j] >= vals[(j + 1) % n])
        .collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let mut best = vals.iter().copied().fold(0.0, f64::max);
    for &j in peaks.iter().take(4) {
        let c = -PI + h * j as f64;
        best = best.max(golden_max(&f, c - h, c + h));
    }
    best
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// Predicted Lyapunov exponent `λ(v)` of the dominant admissible saddle.
pub fn lyapunov_predicted(model: &TwoBandModel, v: f64) -> Result<f64> {
    Ok(saddle_points(model, v)?.lambda_pred)
}

/// Saddle reports over a velocity grid, in grid order.
pub fn saddle_sweep(model: &TwoBandModel, v_grid: &[f64], opts: &SaddleOptions, exec: Execution) -> Vec<Result<SaddleReport>> {
    par::map(exec, v_grid, |&v| saddle_points_with(model, v, opts))
}

/// Largest growth rate of any Bloch mode, `λ_m = max_k |Im √Q(e^{ik})|`,
/// and the group velocity `d Re E/dk` at the maximizing `k₀`.
pub fn lambda_max(model: &TwoBandModel) -> (f64, f64) {
    let q = q_polynomial(model);
    let f = |k: f64| q.eval_k(k).sqrt().im.abs();
    let n = 4096;
    let h = 2.0 * PI / n as f64;
    let j = (0..n)
        .max_by(|&a, &b| f(-PI + h * a as f64).total_cmp(&f(-PI + h * b as f64)))
        .unwrap_or(0);
    let c = -PI + h * j as f64;
    // Refine the argmax, then read off the group velocity of that branch.
    let (mut a, mut b) = (c - h, c + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let (x1, x2) = (b - g * (b - a), a + g * (b - a));
        if f(x1) > f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let k0 = 0.5 * (a + b);
    let root = q.eval_k(k0).sqrt();
    let e = if root.im >= 0.0 { root } else { -root };
    let beta = Complex64::from_polar(1.0, k0);
    let dedk = I * q.euler().eval(beta) / (e * 2.0);
    (e.im.max(f(k0)), dedk.re)
}

/// Outcome of the saddle-point criterion for the skin effect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Some saddle lies off the unit circle: skin effect present.
    Nhse,
    /// All saddles on the unit circle and no cusp: no skin effect.
    NoNhse,
    /// All saddles on the unit circle but the periodic spectrum has cusps
    /// there: the criterion is inconclusive.
    ExceptionalCusp,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Nhse => "NHSE",
            Verdict::NoNhse => "NO_NHSE",
            Verdict::ExceptionalCusp => "EXCEPTIONAL_CUSP",
        }
    }
}

/// Details behind a [`Verdict`].
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct VerdictReport {
    pub verdict: Verdict,
    /// `|β_s|` of every `v = 0` saddle.
    pub saddle_radii: Vec<f64>,
    /// Largest `||β_s| − 1|`.
    pub max_radius_offset: f64,
    /// Per-saddle cusp flag (only evaluated for saddles on the unit circle).
    pub cusps: Vec<bool>,
    /// Loop-versus-arc classification of the periodic `E²` curve.
    pub geometry: PbcGeometry,
}

/// Saddle-point criterion: skin effect iff some `v = 0` saddle lies off the
/// unit circle.
///
/// When every saddle is on the unit circle each one is tested for a cusp of
/// the periodic spectrum: writing `Q(e^{i(k_s+κ)}) − Q_s = Σ c_m κ^m`, the
/// curve has a cusp when the leading order `n` is even and the first term
/// not parallel to `c_n` has odd order. Symbols without any saddle fall back
/// to the loop-versus-arc geometry of the periodic spectrum (`num_k` samples).
pub fn nhse_verdict(model: &TwoBandModel, tol_radius: f64, num_k: usize) -> Result<VerdictReport> {
    let report = saddle_points(model, 0.0)?;
    let q = q_polynomial(model);
    let geometry = classify_pbc_geometry(model, num_k.max(256))?.geometry;
    let saddle_radii = report.radii();
    let max_radius_offset = saddle_radii.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    let cusps: Vec<bool> = report
        .saddles
        .iter()
        .map(|s| (s.beta_s.norm() - 1.0).abs() <= tol_radius && is_cusp(&q, s.beta_s))
        .collect();
    let verdict = if saddle_radii.is_empty() {
        match geometry {
            PbcGeometry::ClosedLoops => Verdict::Nhse,
            PbcGeometry::OpenArcs => Verdict::NoNhse,
        }
    } else if max_radius_offset > tol_radius {
        Verdict::Nhse
    } else if cusps.iter().any(|&c| c) {
        Verdict::ExceptionalCusp
    } else {
        Verdict::NoNhse
    };
    Ok(VerdictReport {
        verdict,
        saddle_radii,
        max_radius_offset,
        cusps,
        geometry,
    })
}

/// Cusp test for the periodic `E²` curve at a unit-circle saddle.
fn is_cusp(q: &LaurentPolynomial, beta: Complex64) -> bool {
    // c_m = i^m (D^m Q)(β) / m!, with D = β d/dβ.
    let scale: f64 = q.terms().map(|(n, c)| c.norm() * beta.norm().powi(n)).sum();
    let mut d = q.euler();
    let mut coeffs = Vec::new();
    let mut factorial = 1.0;
    let mut i_pow = I;
    for m in 2..=10u32 {
        d = d.euler();
        factorial *= m as f64;
        i_pow *= I;
        coeffs.push((m, i_pow * d.eval(beta) / factorial));
    }
    let Some(&(n, cn)) = coeffs.iter().find(|(_, c)| c.norm() > 1e-9 * scale) else {
        return false;
    };
    if n % 2 == 1 {
        return false;
    }
    coeffs
        .iter()
        .filter(|&&(m, c)| m > n && c.norm() > 1e-9 * scale)
        .find(|&&(_, c)| (c * cn.conj()).im.abs() > 1e-9 * c.norm() * cn.norm())
        .is_some_and(|&(m, _)| m % 2 == 1)
}
