//! Trace-class Q-Wiener noise and diffusion coefficients.
//!
//! The noise space is spanned by finitely many orthonormal divergence-free
//! Fourier fields with positive, summable covariance eigenvalues. Paths are
//! sampled at a dyadic fine resolution and coarsened exactly, so one
//! Brownian path drives every refinement level of a convergence study.

mod covariance;
mod diffusion;
mod path;

pub use covariance::CovarianceSpec;
pub use diffusion::{DiffusionKind, DiffusionSpec, GConditionsReport};
pub use path::{derive_seed, WienerPath};
