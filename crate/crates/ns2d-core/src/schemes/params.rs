use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discretization constants shared by the schemes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeParams {
    pub t_horizon: f64,
    pub n_steps: usize,
    pub viscosity: f64,
    /// Cutoff of the reference fully implicit scheme.
    pub k_ref: usize,
    /// Cutoff of the divergence-free Galerkin scheme, when used.
    pub k_galerkin: Option<usize>,
    /// Mesh subdivision of the mixed finite element scheme, when used.
    pub mesh_m: Option<usize>,
    /// Absolute residual tolerance of the Picard iteration.
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    /// Relative residual tolerance of the linear solvers.
    pub solver_tol: f64,
}

impl SchemeParams {
    pub fn new(t_horizon: f64, n_steps: usize, viscosity: f64, k_ref: usize) -> Result<Self> {
        if t_horizon <= 0.0 || viscosity <= 0.0 || n_steps == 0 || k_ref == 0 {
            return Err(Error::InvalidParameter(
                "horizon, viscosity, steps and cutoff must be positive".into(),
            ));
        }
        Ok(Self {
            t_horizon,
            n_steps,
            viscosity,
            k_ref,
            k_galerkin: None,
            mesh_m: None,
            picard_tol: 1e-11,
            picard_max_iter: 50,
            solver_tol: 1e-10,
        })
    }

    pub fn with_galerkin_cutoff(mut self, k_h: usize) -> Self {
        self.k_galerkin = Some(k_h);
        self
    }

    pub fn with_mesh(mut self, m: usize) -> Self {
        self.mesh_m = Some(m);
        self
    }

    pub fn with_steps(mut self, n_steps: usize) -> Self {
        self.n_steps = n_steps;
        self
    }

    /// Constant time mesh `k = T / N`.
    pub fn dt(&self) -> f64 {
        self.t_horizon / self.n_steps as f64
    }

    /// Localization admissibility: the Gronwall-type bounds ask for `k M`
    /// below a threshold; returns true when `dt * m_threshold <= c0`.
    pub fn localization_admissible(&self, m_threshold: f64, c0: f64) -> bool {
        self.dt() * m_threshold <= c0
    }
}
