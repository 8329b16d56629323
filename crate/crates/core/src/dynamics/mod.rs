//! Real-space dynamics of the two-band chain.
//!
//! - [`evolve`] / [`evolve_observed`]: fixed-step classical Runge–Kutta
//!   integration of `i dψ/dt = 𝓗 ψ` on an open chain or a ring, with
//!   log-scale renormalization so exponential growth never overflows.
//! - [`evolve_spectral`]: exact propagation on a ring by discrete Bloch
//!   modes, used as an oracle for the integrator.
//! - [`sample_ray`], [`RayRecorder`]: amplitudes along `n = vt`.
//! - [`lyapunov_estimate`], [`lyapunov_sweep`]: growth rates from a
//!   least-squares fit of `log|ψ(t)|`.

mod lyapunov;
mod ray;
mod spectral;

pub use lyapunov::{auto_dt, fit_trace, lyapunov_estimate, lyapunov_sweep, ray_traces, LyapunovEstimate, LyapunovOptions};
pub use ray::{sample_ray, Component, RayRecorder, RayTrace, SAFE_MARGIN};
pub use spectral::evolve_spectral;

use crate::model::TwoBandModel;
use crate::{Complex64, Error, Result};

/// Amplitudes below/above these bounds trigger a renormalization.
const RENORM_LO: f64 = 1e-8;
const RENORM_HI: f64 = 1e8;

/// Extent of the classical Runge–Kutta stability region on the imaginary axis.
const RK4_STABILITY_LIMIT: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Boundary conditions for real-space propagation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Boundary {
    /// Hoppings that would leave the chain are dropped.
    Obc,
    /// Indices wrap around (periodic ring).
    Ring,
}

/// Field `(a_n, b_n)` on a finite chain; the physical amplitude is the stored
/// value times `exp(log_scale)`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LatticeState {
    pub cells: usize,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub log_scale: f64,
    pub time: f64,
}

impl LatticeState {
    /// All amplitudes zero.
    pub fn zeros(cells: usize) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            cells,
            a: vec![zero; cells],
            b: vec![zero; cells],
            log_scale: 0.0,
            time: 0.0,
        }
    }

    /// Unit-cell excitation `a_n = b_n = δ_{n,seed}`.
    pub fn seeded(cells: usize, seed: usize) -> Self {
        let mut s = Self::zeros(cells);
        s.a[seed] = Complex64::new(1.0, 0.0);
        s.b[seed] = Complex64::new(1.0, 0.0);
        s
    }

    /// Unit-cell excitation at the central cell `cells / 2`.
    pub fn centered(cells: usize) -> Self {
        Self::seeded(cells, cells / 2)
    }

    /// Index of the central cell.
    pub fn center(&self) -> usize {
        self.cells / 2
    }

    /// `max(|a_n|, |b_n|)` of the stored (not rescaled) field.
    pub fn max_abs(&self) -> f64 {
        self.a.iter().chain(&self.b).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Physical `Σ |a_n|² + |b_n|²`, as a natural logarithm.
    pub fn log_norm_sq(&self) -> f64 {
        let s: f64 = self.a.iter().chain(&self.b).map(|z| z.norm_sqr()).sum();
        s.ln() + 2.0 * self.log_scale
    }

    /// Divides the stored field by its maximum modulus and books the factor
    /// in `log_scale`.
    pub fn renormalize(&mut self) {
        let m = self.max_abs();
        if m > 0.0 && m.is_finite() {
            for z in self.a.iter_mut().chain(self.b.iter_mut()) {
                *z /= m;
            }
            self.log_scale += m.ln();
        }
    }
}

/// Largest relative deviation `max|x − y| / max|x|` between two states,
/// after bringing both to a common scale.
pub fn relative_deviation(x: &LatticeState, y: &LatticeState) -> f64 {
    assert_eq!(x.cells, y.cells, "cell count mismatch");
    let ratio = (y.log_scale - x.log_scale).exp();
    let diff = x
        .a
        .iter()
        .zip(&y.a)
        .chain(x.b.iter().zip(&y.b))
        .map(|(p, q)| (p - q * ratio).norm())
        .fold(0.0, f64::max);
    diff / x.max_abs()
}

/// Precomputed stencil of the real-space operator `𝓗`.
struct Stencil {
    rho: Vec<(i64, Complex64)>,
    theta: Vec<(i64, Complex64)>,
    phi: Vec<(i64, Complex64)>,
}

impl Stencil {
    fn new(model: &TwoBandModel) -> Self {
        let conv = |m: &std::collections::BTreeMap<i32, Complex64>| m.iter().map(|(&n, &c)| (n as i64, c)).collect();
        Self {
            rho: conv(&model.rho),
            theta: conv(&model.theta),
            phi: conv(&model.phi),
        }
    }

    /// `(da, db) = −i 𝓗 (a, b)`.
    fn apply(&self, a: &[Complex64], b: &[Complex64], da: &mut [Complex64], db: &mut [Complex64], boundary: Boundary) {
        let zero = Complex64::new(0.0, 0.0);
        da.fill(zero);
        db.fill(zero);
        let n = a.len() as i64;
        // out_n += c · src_{n−m} for every stencil entry.
        let accumulate = |out: &mut [Complex64], src: &[Complex64], m: i64, c: Complex64| match boundary {
            Boundary::Obc => {
                let lo = m.max(0);
                let hi = (n + m).min(n);
                for i in lo..hi {
                    out[i as usize] += c * src[(i - m) as usize];
                }
            }
            Boundary::Ring => {
                for i in 0..n {
                    out[i as usize] += c * src[(i - m).rem_euclid(n) as usize];
                }
            }
        };
        for &(m, c) in &self.rho {
            accumulate(da, a, m, c);
            accumulate(db, b, m, -c);
        }
        for &(m, c) in &self.theta {
            accumulate(da, b, m, c);
        }
        for &(m, c) in &self.phi {
            accumulate(db, a, m, c);
        }
        let minus_i = Complex64::new(0.0, -1.0);
        for z in da.iter_mut().chain(db.iter_mut()) {
            *z *= minus_i;
        }
    }
}

/// Snapshots recorded by [`evolve`].
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Trajectory {
    pub snapshots: Vec<LatticeState>,
    /// Step size actually used (`t_end / steps`).
    pub dt: f64,
}

/// Options for [`evolve`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveOptions {
    pub t_end: f64,
    /// Requested step; the integrator uses `t_end / ceil(t_end / dt)`.
    pub dt: f64,
    pub boundary: Boundary,
    /// Record a snapshot every this many steps (the initial and final states
    /// are always recorded).
    pub record_every: usize,
}

/// Runge–Kutta propagation returning periodic snapshots.
pub fn evolve(model: &TwoBandModel, initial: &LatticeState, opts: &EvolveOptions) -> Result<Trajectory> {
    let stride = opts.record_every.max(1);
    let mut snapshots = Vec::new();
    let mut step = 0usize;
    let steps = step_count(opts.t_end, opts.dt)?;
    let dt = evolve_observed(model, initial, opts.t_end, opts.dt, opts.boundary, |s| {
        if step % stride == 0 || step == steps {
            snapshots.push(s.clone());
        }
        step += 1;
    })?
    .1;
    Ok(Trajectory { snapshots, dt })
}

fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !(t_end >= 0.0) || !dt.is_finite() || !t_end.is_finite() {
        return Err(Error::InvalidInput(format!("need dt > 0 and t_end ≥ 0, got dt={dt}, t_end={t_end}")));
    }
    Ok((t_end / dt - 1e-9).ceil().max(0.0) as usize)
}

/// Runge–Kutta propagation calling `observer` on the initial state and after
/// every step. Returns the final state and the step size used.
///
/// The stored field is renormalized whenever its maximum modulus leaves
/// `[1e-8, 1e8]`; the factor is accumulated in `log_scale`.
///
/// # Errors
/// [`Error::Instability`] when `dt · max_k |E(k)|` exceeds the stability
/// limit `2√2` of the classical Runge–Kutta scheme on the imaginary axis
/// (renormalization would otherwise hide the blow-up), or when a non-finite
/// amplitude appears.
pub fn evolve_observed(
    model: &TwoBandModel,
    initial: &LatticeState,
    t_end: f64,
    dt: f64,
    boundary: Boundary,
    mut observer: impl FnMut(&LatticeState),
) -> Result<(LatticeState, f64)> {
    let steps = step_count(t_end, dt)?;
    let h = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    if h * lyapunov::spectral_radius(model) > RK4_STABILITY_LIMIT {
        return Err(Error::Instability { time: initial.time, dt: h });
    }
    let stencil = Stencil::new(model);
    let mut s = initial.clone();
    let n = s.cells;
    let zero = Complex64::new(0.0, 0.0);
    let mut ka = [vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]];
    let mut kb = [vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]];
    let mut ta = vec![zero; n];
    let mut tb = vec![zero; n];
    observer(&s);
    for step in 1..=steps {
        stencil.apply(&s.a, &s.b, &mut ka[0], &mut kb[0], boundary);
        for stage in 1..4 {
            let w = if stage == 3 { h } else { 0.5 * h };
            for i in 0..n {
                ta[i] = s.a[i] + ka[stage - 1][i] * w;
                tb[i] = s.b[i] + kb[stage - 1][i] * w;
            }
            stencil.apply(&ta, &tb, &mut ka[stage], &mut kb[stage], boundary);
        }
        let w = h / 6.0;
        for i in 0..n {
            s.a[i] += (ka[0][i] + ka[1][i] * 2.0 + ka[2][i] * 2.0 + ka[3][i]) * w;
            s.b[i] += (kb[0][i] + kb[1][i] * 2.0 + kb[2][i] * 2.0 + kb[3][i]) * w;
        }
        s.time = initial.time + h * step as f64;
        let m = s.max_abs();
        if !m.is_finite() {
            return Err(Error::Instability { time: s.time, dt: h });
        }
        if m > 0.0 && !(RENORM_LO..=RENORM_HI).contains(&m) {
            s.renormalize();
        }
        observer(&s);
    }
    Ok((s, h))
}
