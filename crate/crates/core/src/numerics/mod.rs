//! Self-contained complex numerical kernels.
//!
//! - [`polynomial_roots`]: Aberth–Ehrlich simultaneous iteration with a
//!   companion-matrix fallback.
//! - [`complex_eigenvalues`]: balancing, Householder reduction to upper
//!   Hessenberg form and Wilkinson-shifted complex QR.
//! - [`linear_fit`]: ordinary least squares for growth-rate extraction.
//!
//! Everything here is a pure function of its inputs and safe to call from
//! parallel workers.

mod eigen;
mod fit;
mod matrix;
mod roots;

pub use eigen::{complex_eigenvalues, complex_eigenvalues_with, EigenOptions};
pub use fit::{linear_fit, LinearFit};
pub use matrix::{ComplexVec, DenseComplexMatrix};
pub use roots::{eval_polynomial, polynomial_roots, polynomial_roots_with, RootOptions};

use crate::Complex64;

/// Symmetric Hausdorff distance between two finite point sets in ℂ.
///
/// Returns `f64::INFINITY` when exactly one of the sets is empty and `0` when
/// both are.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => directed_hausdorff(a, b).max(directed_hausdorff(b, a)),
    }
}

/// `max_{x∈a} dist(x, b)`: how far the worst point of `a` is from `b`.
pub fn directed_hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .map(|&x| point_to_set(x, b))
        .fold(0.0, f64::max)
}

/// Distance from a point to the nearest member of a set (`∞` for an empty set).
pub fn point_to_set(x: Complex64, set: &[Complex64]) -> f64 {
    set.iter()
        .map(|&y| (x - y).norm())
        .fold(f64::INFINITY, f64::min)
}
