//! Desk-scale laboratory for space-time discretizations of the stochastic
//! 2D Navier-Stokes equations on the periodic torus.
//!
//! The crate provides
//! - a dealiased Fourier representation of mean-zero periodic vector fields
//!   with Leray projection, Stokes operator and the convection term
//!   ([`spectral`]),
//! - a periodic Taylor-Hood (P2/P1) finite element pair with saddle-point
//!   solves, discrete projections and an inf-sup checker ([`fem`]),
//! - trace-class Q-Wiener noise with dyadic path refinement and diffusion
//!   coefficients of additive or diagonal multiplicative type ([`noise`]),
//! - the implicit Euler time scheme and the two semi-implicit space-time
//!   schemes, plus error series between them ([`schemes`]),
//! - estimators and closed-form calculators for moment bounds, exponential
//!   moments, localization diagnostics, pressure scaling and convergence
//!   rates ([`analysis`]).

pub mod analysis;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod linalg;
pub mod noise;
pub mod schemes;
pub mod spectral;

pub use error::{Error, Result};
pub use geometry::TorusGeometry;
