//! Generalized Brillouin zone by radial scans, and Bloch points.
//!
//! For `Q(β) = Σ_{m=−p}^{s} σ_m β^m` and a fixed energy `E²`, the equation
//! `Q(β) = E²` has `p + s` roots. Sorted by modulus, `|β_1| ≤ … ≤ |β_{p+s}|`,
//! the generalized Brillouin zone is the locus where the two middle roots
//! have equal modulus, `|β_p| = |β_{p+1}|`. The scan below fixes the phase
//! of `β = r e^{iϕ}`, walks `r` along a grid, and refines every radius where
//! `β` and another root of `Q(β′) = Q(β)` reach equal modulus, keeping only
//! crossings of the middle pair.

use std::f64::consts::PI;

use crate::model::{q_polynomial, LaurentPolynomial, TwoBandModel};
use crate::numerics::polynomial_roots;
use crate::par::{self, Execution};
use crate::saddle::SaddleReport;
use crate::spectra::{Provenance, SpectrumSet};
use crate::{Complex64, Error, Result};

/// One point of the generalized Brillouin zone.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct GbzSample {
    pub beta: Complex64,
    /// `Q(β) = E²`.
    pub energy_sq: Complex64,
    /// `|β|`.
    pub radius: f64,
    /// The partner root `β′ ≠ β` with `|β′| = |β|` and `Q(β′) = Q(β)`.
    pub partner: Complex64,
}

/// Uniform angles `ϕ_j = −π + 2πj/n`.
pub fn default_angle_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| -PI + 2.0 * PI * j as f64 / n as f64).collect()
}

/// Log-spaced radii spanning `[r_lo/2, 2·r_hi]`, where `[r_lo, r_hi]` covers
/// the unit circle and the given saddle radii.
pub fn default_radius_grid(saddle_radii: &[f64], n: usize) -> Vec<f64> {
    let lo = saddle_radii.iter().copied().fold(1.0, f64::min) * 0.5;
    let hi = saddle_radii.iter().copied().fold(1.0, f64::max) * 2.0;
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n.max(2) - 1) as f64).exp())
        .collect()
}

struct Scanner {
    q: LaurentPolynomial,
    /// Number of negative powers `p`.
    p: usize,
}

impl Scanner {
    /// Roots of `Q(β′) = Q(β)` sorted by modulus, and the index of `β` itself.
    fn roots(&self, beta: Complex64) -> Option<(Vec<Complex64>, usize)> {
        let e2 = self.q.eval(beta);
        let shifted = &self.q - &LaurentPolynomial::constant(e2);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (self.q.n_max() - self.q.n_min()) as usize + 1];
        for (n, c) in shifted.terms() {
            coeffs[(self.q.n_max() - n) as usize] = c;
        }
        let mut roots = polynomial_roots(&coeffs).ok()?;
        roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        let me = (0..roots.len()).min_by(|&i, &j| {
            (roots[i] - beta).norm().total_cmp(&(roots[j] - beta).norm())
        })?;
        Some((roots, me))
    }

    /// `min_{j≠self} ||β_j| − r|` and the minimizing partner.
    fn mismatch(&self, r: f64, phase: f64) -> (f64, Option<(Complex64, bool)>) {
        let beta = Complex64::from_polar(r, phase);
        let Some((roots, me)) = self.roots(beta) else {
            return (f64::INFINITY, None);
        };
        let mut best = (f64::INFINITY, None);
        for (j, &z) in roots.iter().enumerate() {
            if j == me {
                continue;
            }
            let d = (z.norm() - r).abs();
            if d < best.0 {
                // The middle pair occupies sorted positions p−1 and p.
                let middle = me.min(j) + 1 == self.p && me.max(j) == self.p;
                best = (d, Some((z, middle)));
            }
        }
        best
    }
}

/// Generalized Brillouin zone samples from a radial scan.
///
/// For every phase in `angle_grid`, local minima of the modulus mismatch
/// along `radius_grid` are refined by golden-section search and accepted
/// when the mismatch is below `tol · max(1, r)` and the pair is the middle
/// pair. The union of `energy_sq` over the samples traces `E²` of the open
/// chain.
pub fn obc_spectrum_gbz(
    model: &TwoBandModel,
    radius_grid: &[f64],
    angle_grid: &[f64],
    tol: f64,
    exec: Execution,
) -> Result<Vec<GbzSample>> {
    let samples: Vec<GbzSample> = gbz_by_angle(model, radius_grid, angle_grid, tol, exec)?
        .into_iter()
        .flatten()
        .collect();
    if samples.is_empty() {
        return Err(Error::EmptyResult(
            "no generalized Brillouin zone points found; refine the radius grid or widen its range".into(),
        ));
    }
    Ok(samples)
}

/// Energies `±√E²` of generalized-Brillouin-zone samples, with `arg β` as
/// the parameter.
pub fn gbz_spectrum(samples: &[GbzSample]) -> SpectrumSet {
    let mut energies = Vec::with_capacity(2 * samples.len());
    let mut parameter = Vec::with_capacity(2 * samples.len());
    for sign in [1.0, -1.0] {
        for s in samples {
            energies.push(s.energy_sq.sqrt() * sign);
            parameter.push(s.beta.arg());
        }
    }
    SpectrumSet {
        edge: vec![false; energies.len()],
        energies,
        provenance: Provenance::ObcGbz,
        parameter,
        cells: None,
    }
}

/// Per-phase samples, aligned with `angle_grid`.
fn gbz_by_angle(
    model: &TwoBandModel,
    radius_grid: &[f64],
    angle_grid: &[f64],
    tol: f64,
    exec: Execution,
) -> Result<Vec<Vec<GbzSample>>> {
    let q = q_polynomial(model);
    if q.n_min() >= 0 || q.n_max() <= 0 {
        return Err(Error::UnsupportedModel(
            "the symbol needs both positive and negative powers of β for a generalized Brillouin zone".into(),
        ));
    }
    if radius_grid.len() < 3 || !(tol > 0.0) {
        return Err(Error::InvalidInput("need ≥ 3 radii and tol > 0".into()));
    }
    let scanner = Scanner { p: (-q.n_min()) as usize, q };
    Ok(par::map(exec, angle_grid, |&phase| scan_angle(&scanner, radius_grid, phase, tol)))
}

fn scan_angle(scanner: &Scanner, radii: &[f64], phase: f64, tol: f64) -> Vec<GbzSample> {
    let values: Vec<f64> = radii.iter().map(|&r| scanner.mismatch(r, phase).0).collect();
    let mut out = Vec::new();
    for i in 1..radii.len() - 1 {
        if !(values[i] <= values[i - 1] && values[i] < values[i + 1]) {
            continue;
        }
        let r = golden_min(|r| scanner.mismatch(r, phase).0, radii[i - 1], radii[i + 1]);
        let (d, partner) = scanner.mismatch(r, phase);
        if let Some((partner, true)) = partner {
            if d <= tol * r.max(1.0) {
                let beta = Complex64::from_polar(r, phase);
                out.push(GbzSample {
                    beta,
                    energy_sq: scanner.q.eval(beta),
                    radius: r,
                    partner,
                });
            }
        }
    }
    out
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
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
        if (b - a).abs() <= 1e-14 * b.abs() {
            break;
        }
    }
    0.5 * (a + b)
}

/// Points where the open-chain spectrum touches the periodic one.
///
/// Collects the saddles of `report` with `||β_s| − 1| ≤ tol`, plus the
/// places where the generalized Brillouin zone crosses the unit circle
/// (sign changes of `|β| − 1` between neighbouring phases, interpolated
/// linearly in the phase). Points closer than `1e-3` are merged.
pub fn bloch_points(model: &TwoBandModel, report: &SaddleReport, tol: f64, exec: Execution) -> Result<Vec<Complex64>> {
    let mut points: Vec<Complex64> = report
        .saddles
        .iter()
        .filter(|s| (s.beta_s.norm() - 1.0).abs() <= tol)
        .map(|s| s.beta_s)
        .collect();

    let radii: Vec<f64> = report.saddles.iter().map(|s| s.beta_s.norm()).collect();
    let angles = default_angle_grid(720);
    let gbz = match gbz_by_angle(model, &default_radius_grid(&radii, 240), &angles, 1e-7, exec) {
        Ok(g) => g,
        Err(Error::UnsupportedModel(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    // One representative per phase, continued by radius from the previous phase.
    let mut track: Vec<(f64, f64)> = Vec::new();
    for (&phase, candidates) in angles.iter().zip(&gbz) {
        let pick = match track.last() {
            Some(&(_, prev)) => candidates
                .iter()
                .min_by(|a, b| (a.radius - prev).abs().total_cmp(&(b.radius - prev).abs())),
            None => candidates.first(),
        };
        if let Some(s) = pick {
            track.push((phase, s.radius));
        }
    }
    if track.len() > 2 {
        for i in 0..track.len() {
            let (p0, r0) = track[i];
            let (mut p1, r1) = track[(i + 1) % track.len()];
            if i + 1 == track.len() {
                p1 += 2.0 * PI;
            }
            if (r0 - 1.0) * (r1 - 1.0) < 0.0 {
                let w = (1.0 - r0) / (r1 - r0);
                points.push(Complex64::from_polar(1.0, p0 + w * (p1 - p0)));
            }
        }
    }
    let mut merged: Vec<Complex64> = Vec::new();
    for p in points {
        if merged.iter().all(|m| (m - p).norm() > 1e-3) {
            merged.push(p);
        }
    }
    Ok(merged)
}
