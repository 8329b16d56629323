//! Two-band non-Hermitian lattice models in one dimension.
//!
//! The crate covers the full chain from hopping amplitudes to observables:
//!
//! - [`numerics`]: polynomial roots, dense complex eigenvalues, least squares.
//! - [`model`]: Laurent polynomials, the Bloch Hamiltonian and the symbol
//!   `Q(β) = d_x² + d_y² + d_z²`, plus builders for the named models.
//! - [`spectra`]: periodic (Bloch) and open-chain (non-Bloch) spectra,
//!   generalized Brillouin zone samples, loop/arc geometry, Bloch points.
//! - [`saddle`]: saddle points of the dispersion for a drift velocity `v`,
//!   the predicted Lyapunov exponent `λ(v)` and the skin-effect verdict.
//! - [`dynamics`]: real-space Runge–Kutta propagation, a spectral ring
//!   oracle, ray sampling `ψ(t) = a_{n=vt}(t)` and Lyapunov fits.
//!
//! Grid-shaped workloads (velocity grids, angle scans, parameter scans) go
//! through [`par`], which runs them on rayon when the `parallel` feature is
//! enabled and sequentially otherwise.

pub mod dynamics;
pub mod error;
pub mod model;
pub mod numerics;
pub mod par;
pub mod saddle;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Crate version, recorded in output manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
