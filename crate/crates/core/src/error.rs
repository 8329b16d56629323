//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the numerical kernels and the physics layers above them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input violates a precondition (zero leading coefficient, bad size, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A constant polynomial has no roots to find.
    #[error("polynomial of degree 0 has no roots")]
    EmptyRoots,

    /// Least-squares fit with all abscissae equal.
    #[error("degenerate fit: all sample times are equal")]
    DegenerateFit,

    /// An iterative method hit its cap without meeting its tolerance.
    #[error("{method} did not converge after {iterations} iterations ({detail})")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
        detail: String,
    },

    /// `Q(β) = 0`: the 2×2 Bloch Hamiltonian is not diagonalizable.
    #[error("exceptional point: Q vanishes at beta = {re:.6}{im:+.6}i")]
    ExceptionalPoint { re: f64, im: f64 },

    /// The requested method does not apply to this model.
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    /// The time step exceeds the integrator's stability limit, or stepping
    /// produced NaN or Inf.
    #[error("integration became unstable at t = {time:.4} with dt = {dt:.3e}; retry with a smaller dt")]
    Instability { time: f64, dt: f64 },

    /// Too few finite samples survived to fit a slope.
    #[error("insufficient data: {usable} usable samples, at least {needed} required")]
    InsufficientData { usable: usize, needed: usize },

    /// A scan finished without producing any sample (grid too coarse?).
    #[error("empty result: {0}")]
    EmptyResult(String),

    /// Malformed model definition or other invalid user input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of a numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::ExceptionalPoint { .. }
                | Error::Instability { .. }
                | Error::InsufficientData { .. }
                | Error::EmptyResult(_)
        )
    }
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
