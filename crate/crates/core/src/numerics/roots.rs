//! Polynomial roots by Aberth–Ehrlich simultaneous iteration.

use super::{complex_eigenvalues, DenseComplexMatrix};
use crate::{Complex64, Error, Result};

/// Tuning knobs for [`polynomial_roots_with`].
#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Iteration cap for the Aberth sweep.
    pub max_iterations: usize,
    /// Relative step size below which a root is considered settled.
    pub step_tolerance: f64,
    /// Accepted residual `|p(r)| ≤ residual_factor · max|c| · max(1,|r|)^deg`.
    pub residual_factor: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            step_tolerance: 4.0 * f64::EPSILON,
            residual_factor: 1e-10,
        }
    }
}

/// Evaluates a polynomial given highest degree first (Horner's rule).
pub fn eval_polynomial(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Value and first derivative, highest degree first.
fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    coeffs.iter().fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
}

/// All `degree` roots (with multiplicity) of a polynomial, highest degree first.
///
/// ```
/// use nhse_core::{numerics::polynomial_roots, Complex64};
/// let one = Complex64::new(1.0, 0.0);
/// let zero = Complex64::new(0.0, 0.0);
/// let mut roots = polynomial_roots(&[one, zero, -one]).unwrap();
/// roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
/// assert!((roots[0] + one).norm() < 1e-14 && (roots[1] - one).norm() < 1e-14);
/// ```
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    polynomial_roots_with(coeffs, &RootOptions::default())
}

/// [`polynomial_roots`] with explicit tolerances.
pub fn polynomial_roots_with(coeffs: &[Complex64], opts: &RootOptions) -> Result<Vec<Complex64>> {
    match coeffs.len() {
        0 => return Err(Error::DegenerateInput("empty coefficient list".into())),
        1 => return Err(Error::EmptyRoots),
        _ => {}
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::DegenerateInput("non-finite coefficient".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    if coeffs[0] == zero {
        return Err(Error::DegenerateInput("zero leading coefficient".into()));
    }

    // Exact zero roots from trailing zero coefficients are split off so the
    // iteration never has to converge onto the origin.
    let nonzero_len = coeffs.iter().rposition(|&c| c != zero).unwrap() + 1;
    let mut roots = vec![zero; coeffs.len() - nonzero_len];
    let reduced = &coeffs[..nonzero_len];
    if reduced.len() == 1 {
        return Ok(roots);
    }

    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let degree = coeffs.len() - 1;
    let accepted = |r: Complex64| {
        r.is_finite()
            && eval_polynomial(coeffs, r).norm()
                <= opts.residual_factor * scale * r.norm().max(1.0).powi(degree as i32)
    };

    let mut found = aberth(reduced, opts);
    polish(reduced, &mut found);
    if !found.iter().all(|&r| accepted(r)) {
        // Fallback: companion-matrix eigenvalues, then Newton polishing.
        found = complex_eigenvalues(&DenseComplexMatrix::companion(reduced)?)?;
        polish(reduced, &mut found);
        if let Some(bad) = found.iter().find(|&&r| !accepted(r)) {
            return Err(Error::NoConvergence {
                method: "polynomial_roots",
                iterations: opts.max_iterations,
                detail: format!(
                    "residual {:.3e} at root {bad} exceeds tolerance",
                    eval_polynomial(coeffs, *bad).norm()
                ),
            });
        }
    }
    roots.extend(found);
    Ok(roots)
}

fn aberth(coeffs: &[Complex64], opts: &RootOptions) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 1 {
        return vec![-coeffs[1] / coeffs[0]];
    }
    // Start on a circle around the root centroid whose radius is the
    // geometric mean of the root moduli about that centroid.
    let center = -coeffs[1] / (coeffs[0] * n as f64);
    let radius = {
        let p0 = eval_polynomial(coeffs, center);
        (p0 / coeffs[0]).norm().powf(1.0 / n as f64).max(1e-3 * (1.0 + center.norm()))
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..opts.max_iterations {
        let mut settled = true;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(coeffs, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() > opts.step_tolerance * z[i].norm().max(f64::MIN_POSITIVE) {
                settled = false;
            }
        }
        if settled {
            break;
        }
    }
    z
}

/// A few Newton steps per root, each kept only if it lowers the residual.
fn polish(coeffs: &[Complex64], roots: &mut [Complex64]) {
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(coeffs, *r);
            if dp == Complex64::new(0.0, 0.0) {
                break;
            }
            let candidate = *r - p / dp;
            if candidate.is_finite() && eval_polynomial(coeffs, candidate).norm() < p.norm() {
                *r = candidate;
            } else {
                break;
            }
        }
    }
}
