//! Time and space-time discretizations of the stochastic flow.
//!
//! Three schemes share one driver interface:
//! - the fully implicit Euler scheme on the reference spectral space, with
//!   the convection term resolved by damped Picard iteration,
//! - the mixed velocity-pressure finite element scheme with convection
//!   frozen at the previous iterate (one linear saddle solve per step),
//! - the divergence-free Galerkin scheme on a truncated spectral subspace,
//!   also with frozen convection (one preconditioned Krylov solve per step).
//!
//! All schemes consume coarsenings of one fine Wiener path, so refinement
//! levels of a study stay coupled to the same Brownian motion.

mod divfree_galerkin;
mod error_series;
mod mixed_fem;
mod params;
mod run;
mod time_euler;

pub use divfree_galerkin::DivFreeGalerkinStepper;
pub use error_series::{error_series_fem, error_series_spectral, ErrorSeries};
pub use mixed_fem::{FemNoiseLoads, MixedFemStepper};
pub use params::SchemeParams;
pub use run::{
    run_divfree_galerkin, run_implicit_spectral, run_mixed_fem, SchemeKind, State, StateNorms,
    StepDiagnostics, Trajectory,
};
pub use time_euler::ImplicitSpectralStepper;
