//! `δ`-scans of model III across its non-Bloch transition.

use nhse_core::dynamics::{lyapunov_estimate, LyapunovOptions};
use nhse_core::model::model_iii;
use nhse_core::par::{self, Execution};

use crate::error::{LabError, LabResult};

/// Options of [`scan_delta_model3`].
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ScanOptions {
    pub lyapunov: LyapunovOptions,
    /// `λ₀` below this value counts as the unbroken phase.
    pub threshold: f64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            lyapunov: LyapunovOptions::default(),
            threshold: 0.05,
            exec: Execution::default(),
        }
    }
}

/// Zero-velocity growth rate across a `δ` grid.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TransitionScan {
    pub t: f64,
    pub tp: f64,
    pub delta_grid: Vec<f64>,
    pub lambda0_sim: Vec<f64>,
    pub lambda0_theory: Vec<f64>,
    /// Largest `δ` with `λ₀ < threshold` (`NaN` if none).
    pub critical_delta: f64,
}

/// `λ₀ = 0` for `|δ| < |t|` and `√(δ² − t²)` otherwise.
pub fn lambda0_theory(t: f64, delta: f64) -> f64 {
    if delta.abs() < t.abs() {
        0.0
    } else {
        (delta * delta - t * t).sqrt()
    }
}

/// `λ(v = 0)` of model III for every `δ` in `delta_grid` (one evolution per
/// grid point, run under `opts.exec`).
pub fn scan_delta_model3(t: f64, tp: f64, delta_grid: &[f64], opts: &ScanOptions) -> LabResult<TransitionScan> {
    let straddles = delta_grid.iter().any(|d| d.abs() < t.abs()) && delta_grid.iter().any(|d| d.abs() > t.abs());
    if !straddles {
        return Err(LabError::Usage(format!("the δ grid must straddle |δ| = |t| = {}", t.abs())));
    }
    let lambda0_sim = par::map(opts.exec, delta_grid, |&d| {
        lyapunov_estimate(&model_iii(t, tp, d), 0.0, &opts.lyapunov).map(|e| e.lambda)
    })
    .into_iter()
    .collect::<Result<Vec<f64>, _>>()?;
    let lambda0_theory = delta_grid.iter().map(|&d| lambda0_theory(t, d)).collect();
    let critical_delta = delta_grid
        .iter()
        .zip(&lambda0_sim)
        .filter(|(_, l)| **l < opts.threshold)
        .map(|(d, _)| *d)
        .fold(f64::NAN, f64::max);
    Ok(TransitionScan {
        t,
        tp,
        delta_grid: delta_grid.to_vec(),
        lambda0_sim,
        lambda0_theory,
        critical_delta,
    })
}
