use crate::error::{Error, Result};

use super::assemble::AssembledOperators;
use super::space::FemSpacePair;

/// Velocity and pressure coefficients of one finite element iterate.
///
/// Velocity is stored as the two stacked scalar components
/// `[u_x dofs..., u_y dofs...]`; the pressure is mean zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FemState {
    velocity: Vec<f64>,
    pressure: Vec<f64>,
    n_scalar: usize,
}

impl FemState {
    pub fn zeros(space: &FemSpacePair) -> Self {
        Self {
            velocity: vec![0.0; space.n_velocity()],
            pressure: vec![0.0; space.n_pressure()],
            n_scalar: space.n_scalar(),
        }
    }

    pub fn new(space: &FemSpacePair, velocity: Vec<f64>, pressure: Vec<f64>) -> Result<Self> {
        if velocity.len() != space.n_velocity() || pressure.len() != space.n_pressure() {
            return Err(Error::InvalidParameter(format!(
                "state sizes ({}, {}) do not match the space ({}, {})",
                velocity.len(),
                pressure.len(),
                space.n_velocity(),
                space.n_pressure()
            )));
        }
        Ok(Self {
            velocity,
            pressure,
            n_scalar: space.n_scalar(),
        })
    }

    pub fn velocity(&self) -> &[f64] {
        &self.velocity
    }

    pub fn pressure(&self) -> &[f64] {
        &self.pressure
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.velocity[c * self.n_scalar..(c + 1) * self.n_scalar]
    }

    pub fn velocity_mut(&mut self) -> &mut [f64] {
        &mut self.velocity
    }

    pub fn pressure_mut(&mut self) -> &mut [f64] {
        &mut self.pressure
    }

    /// L2 norm of the velocity via the mass matrix.
    pub fn norm_l2(&self, ops: &AssembledOperators) -> f64 {
        let mut acc = 0.0;
        for c in 0..2 {
            let u = self.component(c);
            acc += dot(u, &ops.mass_scalar().matvec(u));
        }
        acc.max(0.0).sqrt()
    }

    /// L2 norm of the velocity gradient via the stiffness matrix.
    pub fn norm_grad_l2(&self, ops: &AssembledOperators) -> f64 {
        let mut acc = 0.0;
        for c in 0..2 {
            let u = self.component(c);
            acc += dot(u, &ops.stiffness_scalar().matvec(u));
        }
        acc.max(0.0).sqrt()
    }

    /// L2 norm of the pressure gradient (piecewise constant, assembled
    /// exactly through the P1 stiffness matrix).
    pub fn pressure_grad_norm(&self, ops: &AssembledOperators) -> f64 {
        dot(&self.pressure, &ops.stiffness_pressure().matvec(&self.pressure))
            .max(0.0)
            .sqrt()
    }

    /// Largest discrete-divergence residual `max_i |(div u, lambda_i)|`.
    pub fn divergence_residual(&self, ops: &AssembledOperators) -> f64 {
        let mut r = vec![0.0; ops.div_x().nrows()];
        ops.div_x().matvec_add(1.0, self.component(0), &mut r);
        ops.div_y().matvec_add(1.0, self.component(1), &mut r);
        r.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }

    pub fn axpy(&mut self, factor: f64, other: &Self) {
        for (a, b) in self.velocity.iter_mut().zip(&other.velocity) {
            *a += factor * b;
        }
        for (a, b) in self.pressure.iter_mut().zip(&other.pressure) {
            *a += factor * b;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
