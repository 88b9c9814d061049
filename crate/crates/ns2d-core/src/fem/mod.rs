//! Periodic Taylor-Hood (P2/P1) finite elements on the torus.
//!
//! A uniform `m x m` grid of squares, each split along the same diagonal,
//! triangulates the torus; opposite boundary nodes are identified. Velocity
//! components are continuous piecewise quadratics, pressures continuous
//! piecewise linears, both mean zero (enforced by Lagrange multipliers in
//! the solves). All bilinear forms use a degree-5 triangle rule, exact for
//! every polynomial integrand that appears, so the skew symmetry of the
//! stabilized convection form holds at roundoff.

mod assemble;
mod eval;
mod infsup;
mod mesh;
mod projection;
mod quadrature;
mod saddle;
mod space;
mod state;

pub use assemble::AssembledOperators;
pub use eval::SpectralOnMesh;
pub use infsup::{bb_quotient, inf_sup_constant};
pub use mesh::PeriodicMesh;
pub use projection::{project_div_free, project_div_free_sampled, project_pressure};
pub use saddle::{SaddleProblem, SaddleSolution};
pub use space::FemSpacePair;
pub use state::FemState;
