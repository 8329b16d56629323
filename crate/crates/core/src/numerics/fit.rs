//! Ordinary least-squares straight-line fits.

use crate::{Error, Result};

/// Result of fitting `y ≈ slope · t + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square of the residuals `y − (slope·t + intercept)`.
    pub residual_rms: f64,
    /// Standard error of the slope (`0` for two points).
    pub slope_stderr: f64,
}

/// Ordinary least-squares line through `(t, y)` samples.
///
/// Sums are centered on the sample means, which keeps the fit accurate for
/// long time windows far from `t = 0`.
pub fn linear_fit(samples: &[(f64, f64)]) -> Result<LinearFit> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InsufficientData { usable: n, needed: 2 });
    }
    let nf = n as f64;
    let t_mean = samples.iter().map(|s| s.0).sum::<f64>() / nf;
    let y_mean = samples.iter().map(|s| s.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(t, y) in samples {
        sxx += (t - t_mean) * (t - t_mean);
        sxy += (t - t_mean) * (y - y_mean);
    }
    let t_spread = samples.iter().map(|s| (s.0 - t_mean).abs()).fold(0.0, f64::max);
    if sxx == 0.0 || t_spread <= 1e-14 * t_mean.abs() {
        return Err(Error::DegenerateFit);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * t_mean;
    let ssr: f64 = samples
        .iter()
        .map(|&(t, y)| {
            let r = y - (slope * t + intercept);
            r * r
        })
        .sum();
    let slope_stderr = if n > 2 { (ssr / (nf - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(LinearFit {
        slope,
        intercept,
        residual_rms: (ssr / nf).sqrt(),
        slope_stderr,
    })
}
