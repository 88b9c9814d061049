//! Minimal sparse-matrix and Krylov toolbox shared by the finite element
//! and spectral scheme solvers.

mod csr;
mod krylov;

pub use csr::CsrMatrix;
pub use krylov::{cg, gmres, IterStats};
