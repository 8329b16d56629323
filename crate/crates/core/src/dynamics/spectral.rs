//! Exact propagation on a ring through discrete Bloch modes.

use rustfft::FftPlanner;

use super::LatticeState;
use crate::model::{bloch_hamiltonian, q_polynomial, TwoBandModel};
use crate::{Complex64, Error, Result};

/// Propagates `initial` on a ring of `ring_cells` cells to time `t` by the
/// exact `2×2` matrix exponential of `−iH(k_j)t` at `k_j = 2πj/N`.
///
/// Uses `exp(−iHt) = cos(Et)·I − i·(sin(Et)/E)·H` with `E² = Q(e^{ik})`,
/// which is independent of the branch of `E`. The result is rescaled to unit
/// maximum with the factor booked in `log_scale`.
///
/// # Errors
/// [`Error::InvalidInput`] when the ring is shorter than 16 cells or does not
/// match the state; [`Error::ExceptionalPoint`] when `Q` vanishes on the grid.
pub fn evolve_spectral(model: &TwoBandModel, initial: &LatticeState, t: f64, ring_cells: usize) -> Result<LatticeState> {
    if ring_cells < 16 {
        return Err(Error::InvalidInput(format!("ring needs at least 16 cells, got {ring_cells}")));
    }
    if initial.cells != ring_cells || initial.a.len() != ring_cells || initial.b.len() != ring_cells {
        return Err(Error::InvalidInput(format!(
            "state has {} cells, ring has {ring_cells}",
            initial.cells
        )));
    }
    let n = ring_cells;
    let q = q_polynomial(model);
    let scale: f64 = [&model.rho, &model.theta, &model.phi]
        .iter()
        .flat_map(|m| m.values())
        .map(|c| c.norm())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut a = initial.a.clone();
    let mut b = initial.b.clone();
    forward.process(&mut a);
    forward.process(&mut b);
    let minus_i = Complex64::new(0.0, -1.0);
    for j in 0..n {
        let k = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let beta = Complex64::from_polar(1.0, k);
        let qk = q.eval(beta);
        if qk.norm() <= 1e-12 * scale * scale {
            return Err(Error::ExceptionalPoint { re: qk.re, im: qk.im });
        }
        let e = qk.sqrt();
        let x = e * t;
        // cos(x) and sin(x)/E, with a series near x = 0.
        let (c, s_over_e) = if x.norm() < 1e-4 {
            let x2 = x * x;
            (1.0 - x2 / 2.0, (1.0 - x2 / 6.0) * t)
        } else {
            (x.cos(), x.sin() / e)
        };
        let h = bloch_hamiltonian(model, k);
        let (aj, bj) = (a[j], b[j]);
        let ha = h[0][0] * aj + h[0][1] * bj;
        let hb = h[1][0] * aj + h[1][1] * bj;
        a[j] = c * aj + minus_i * s_over_e * ha;
        b[j] = c * bj + minus_i * s_over_e * hb;
    }
    inverse.process(&mut a);
    inverse.process(&mut b);
    let inv_n = 1.0 / n as f64;
    for z in a.iter_mut().chain(b.iter_mut()) {
        *z *= inv_n;
    }
    let mut out = LatticeState {
        cells: n,
        a,
        b,
        log_scale: initial.log_scale,
        time: initial.time + t,
    };
    if !out.max_abs().is_finite() {
        return Err(Error::Instability { time: out.time, dt: t });
    }
    out.renormalize();
    Ok(out)
}
