//! Fourier representation of mean-zero periodic vector fields.
//!
//! A field is stored as the dense square of coefficients `u_hat(m)` for
//! integer modes `0 < |m|_inf <= K`, with the Hermitian symmetry
//! `u_hat(-m) = conj(u_hat(m))` enforced so that fields are real valued.
//! The Leray projection and the Stokes operator are diagonal per mode;
//! nonlinear products are evaluated pseudo-spectrally on grids fine enough
//! to be exact for trigonometric polynomials and then truncated back.

mod field;
mod grid;
mod norms;
mod ops;

pub use field::{ModeIter, SpectralVelocity};
pub use grid::{alias_free_resolution, SpectralGrid};
pub use norms::NormBundle;
pub use ops::{estimate_gn_constant, nonlinear_term, trilinear_form};
pub(crate) use ops::nonlinear_term_frozen;
