//! `λ(v)` sweeps: simulation against saddle-point prediction.

use nhse_core::dynamics::{lyapunov_sweep, LyapunovOptions};
use nhse_core::model::TwoBandModel;
use nhse_core::par::Execution;
use nhse_core::saddle::{lambda_max, nhse_verdict, saddle_sweep, SaddleOptions, SaddleReport, Verdict};

use crate::error::{LabError, LabResult};

/// Velocity grid and solver options of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SweepOptions {
    pub v_min: f64,
    pub v_max: f64,
    pub dv: f64,
    pub lyapunov: LyapunovOptions,
    pub saddle: SaddleOptions,
    /// Radius tolerance of the saddle-point verdict.
    pub tol_radius: f64,
    /// Points within this distance of the maximum count as one plateau
    /// when locating `v_m`.
    pub plateau_tol: f64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            v_min: -2.5,
            v_max: 2.5,
            dv: 0.05,
            lyapunov: LyapunovOptions::default(),
            saddle: SaddleOptions::default(),
            tol_radius: 1e-4,
            plateau_tol: 0.02,
            exec: Execution::default(),
        }
    }
}

impl SweepOptions {
    /// `v_min, v_min + dv, …, v_max` (endpoints included up to rounding).
    pub fn grid(&self) -> LabResult<Vec<f64>> {
        if !(self.dv > 0.0) || !self.dv.is_finite() {
            return Err(LabError::Usage(format!("dv must be positive, got {}", self.dv)));
        }
        if !(self.v_max > self.v_min) {
            return Err(LabError::Usage(format!(
                "empty velocity range [{}, {}]",
                self.v_min, self.v_max
            )));
        }
        Ok(uniform_grid(self.v_min, self.v_max, self.dv))
    }
}

/// `lo, lo + step, …` up to `hi`, with each point computed as `lo + i·step`
/// and snapped to `1e-12` so that `0` and other round values are exact.
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| {
            let x = lo + step * i as f64;
            (x * 1e12).round() / 1e12
        })
        .collect()
}

/// Simulated and predicted `λ(v)` together with both verdicts.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SweepResult {
    pub label: String,
    pub params: Vec<(String, f64)>,
    pub v_grid: Vec<f64>,
    /// Fitted exponents; `NaN` where the fit failed (see `sim_errors`).
    pub lambda_sim: Vec<f64>,
    /// Per-point fit failure messages.
    pub sim_errors: Vec<Option<String>>,
    pub lambda_pred: Vec<f64>,
    /// `|lambda_sim − lambda_pred|` per point (`NaN` where the fit failed).
    pub abs_diff: Vec<f64>,
    /// Grid indices at which the predicted curve has a slope discontinuity.
    pub kinks: Vec<usize>,
    pub v_m_sim: f64,
    pub v_m_pred: f64,
    /// `max_k Im E_PBC` and the group velocity where it is attained.
    pub lambda_max: f64,
    pub lambda_max_velocity: f64,
    pub verdict_dynamics: Verdict,
    pub verdict_saddle: Verdict,
}

impl SweepResult {
    /// Whether grid point `i` lies within `margin` points of a kink.
    pub fn near_kink(&self, i: usize, margin: usize) -> bool {
        self.kinks.iter().any(|&k| k.abs_diff(i) <= margin)
    }

    /// Largest finite simulated exponent.
    pub fn max_lambda_sim(&self) -> f64 {
        self.lambda_sim
            .iter()
            .copied()
            .filter(|x| x.is_finite())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Runs one centered-seed evolution for the whole grid, the saddle analysis
/// per grid point, and derives `v_m` and the verdicts.
///
/// The dynamics verdict is NHSE iff `|v_m_sim| > dv`.
pub fn sweep_lyapunov(model: &TwoBandModel, opts: &SweepOptions) -> LabResult<SweepResult> {
    let grid = opts.grid()?;
    if opts.v_min > -2.0 + 1e-9 || opts.v_max < 2.0 - 1e-9 {
        return Err(LabError::Usage(format!(
            "the velocity grid must span at least [-2, 2], got [{}, {}]",
            opts.v_min, opts.v_max
        )));
    }
    let sims = lyapunov_sweep(model, &grid, &opts.lyapunov, opts.exec)?;
    let reports: Vec<SaddleReport> = saddle_sweep(model, &grid, &opts.saddle, opts.exec)
        .into_iter()
        .collect::<Result<_, _>>()?;

    let mut lambda_sim = Vec::with_capacity(grid.len());
    let mut sim_errors = Vec::with_capacity(grid.len());
    for s in sims {
        match s {
            Ok(e) => {
                lambda_sim.push(e.lambda);
                sim_errors.push(None);
            }
            Err(err) => {
                lambda_sim.push(f64::NAN);
                sim_errors.push(Some(err.to_string()));
            }
        }
    }
    if lambda_sim.iter().all(|x| !x.is_finite()) {
        return Err(nhse_core::Error::EmptyResult("no velocity produced a usable Lyapunov fit".into()).into());
    }
    let lambda_pred: Vec<f64> = reports.iter().map(|r| r.lambda_pred).collect();
    let abs_diff = lambda_sim.iter().zip(&lambda_pred).map(|(s, p)| (s - p).abs()).collect();
    let v_m_sim = peak_velocity(&grid, &lambda_sim, opts.plateau_tol);
    let v_m_pred = peak_velocity(&grid, &lambda_pred, opts.plateau_tol);
    let verdict_dynamics = if v_m_sim.abs() > opts.dv + 1e-12 {
        Verdict::Nhse
    } else {
        Verdict::NoNhse
    };
    let verdict_saddle = nhse_verdict(model, opts.tol_radius, 1024)?.verdict;
    let (lm, lm_v) = lambda_max(model);
    Ok(SweepResult {
        label: model.label.clone(),
        params: model_params(model),
        kinks: kink_indices(&lambda_pred),
        v_grid: grid,
        lambda_sim,
        sim_errors,
        lambda_pred,
        abs_diff,
        v_m_sim,
        v_m_pred,
        lambda_max: lm,
        lambda_max_velocity: lm_v,
        verdict_dynamics,
        verdict_saddle,
    })
}

/// Builder parameters of a named model (empty for explicit hopping maps).
pub fn model_params(model: &TwoBandModel) -> Vec<(String, f64)> {
    model
        .origin
        .as_ref()
        .map(|o| o.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect())
        .unwrap_or_default()
}

/// Velocity of the maximum of a sampled curve.
///
/// Non-finite samples are ignored. When the neighbours on both sides of
/// the argmax lie within `plateau_tol` of the maximum, the curve is treated
/// as flat-topped and the midpoint of the contiguous plateau is returned
/// (a real spectrum gives `λ = 0` on a whole interval of `v`). Otherwise
/// the argmax is refined by a three-point parabola.
pub fn peak_velocity(grid: &[f64], values: &[f64], plateau_tol: f64) -> f64 {
    let Some(imax) = (0..values.len())
        .filter(|&i| values[i].is_finite())
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
    else {
        return f64::NAN;
    };
    let top = values[imax];
    let inside = |i: usize| values[i].is_finite() && values[i] >= top - plateau_tol;
    let mut lo = imax;
    while lo > 0 && inside(lo - 1) {
        lo -= 1;
    }
    let mut hi = imax;
    while hi + 1 < values.len() && inside(hi + 1) {
        hi += 1;
    }
    if lo < imax && hi > imax {
        return 0.5 * (grid[lo] + grid[hi]);
    }
    if imax == 0 || imax + 1 == values.len() {
        return grid[imax];
    }
    let (y0, y1, y2) = (values[imax - 1], top, values[imax + 1]);
    if !(y0.is_finite() && y2.is_finite()) {
        return grid[imax];
    }
    let denom = y0 - 2.0 * y1 + y2;
    if denom >= 0.0 {
        return grid[imax];
    }
    let h = grid[imax + 1] - grid[imax];
    let offset = (0.5 * (y0 - y2) / denom).clamp(-0.5, 0.5);
    grid[imax] + offset * h
}

/// Grid indices where a sampled curve has a slope discontinuity.
///
/// Index `i` is flagged when the second difference `|Δ²λ_i|` exceeds twice
/// the smaller of `|Δ²λ_{i−2}|` and `|Δ²λ_{i+2}|` (plus `1e-6`): on a smooth
/// curve the second difference varies slowly, while a kink concentrates a
/// slope jump into one or two grid points.
pub fn kink_indices(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    if n < 5 {
        return Vec::new();
    }
    let d2: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 || i + 1 == n {
                f64::NAN
            } else {
                (values[i + 1] - 2.0 * values[i] + values[i - 1]).abs()
            }
        })
        .collect();
    (1..n - 1)
        .filter(|&i| {
            let neighbours = [i.checked_sub(2), Some(i + 2)]
                .into_iter()
                .flatten()
                .filter(|&j| j < n && d2[j].is_finite())
                .map(|j| d2[j])
                .fold(f64::INFINITY, f64::min);
            let reference = if neighbours.is_finite() { neighbours } else { 0.0 };
            d2[i].is_finite() && d2[i] > 2.0 * reference + 1e-6
        })
        .collect()
}
