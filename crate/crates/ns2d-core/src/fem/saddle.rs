use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{gmres, CsrMatrix, IterStats};

use super::assemble::AssembledOperators;
use super::space::FemSpacePair;
use super::state::FemState;

/// Velocity-pressure saddle system on the Taylor-Hood pair with mean-zero
/// Lagrange multipliers (two velocity components, one pressure):
///
/// ```text
/// (M + d S + c C) U  + ps B^T P + mu mv = f
///  B U                        + mu_p mp = g
///  mean constraints                     = 0
/// ```
///
/// Solved by right-preconditioned GMRES with a block triangular
/// preconditioner: Jacobi on the velocity block and a pressure mass /
/// pressure stiffness combination on the Schur block (the unsteady-Stokes
/// choice `S^-1 ~ nu M_p^-1 + k^-1 L_p^-1`).
pub struct SaddleProblem<'a> {
    space: &'a FemSpacePair,
    ops: &'a AssembledOperators,
    diffusion: f64,
    pressure_scale: f64,
    tol: f64,
    jacobi: Vec<f64>,
    mp_chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    lp_chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    schur_mass_weight: f64,
    schur_laplace_weight: f64,
    mv_scale: f64,
    mp_scale: f64,
}

pub struct SaddleSolution {
    pub state: FemState,
    pub multipliers: [f64; 3],
    pub stats: IterStats,
}

impl<'a> SaddleProblem<'a> {
    /// Constrained mass-matrix projection: `A = M`, unit pressure coupling.
    pub fn projection(space: &'a FemSpacePair, ops: &'a AssembledOperators, tol: f64) -> Result<Self> {
        Self::new(space, ops, 0.0, 1.0, 0.0, 1.0, tol)
    }

    /// One implicit Euler step: `A = M + nu k S (+ k C)`, coupling `-k B^T`.
    pub fn time_step(
        space: &'a FemSpacePair,
        ops: &'a AssembledOperators,
        nu: f64,
        k: f64,
        tol: f64,
    ) -> Result<Self> {
        Self::new(space, ops, nu * k, -k, nu, 1.0 / k, tol)
    }

    fn new(
        space: &'a FemSpacePair,
        ops: &'a AssembledOperators,
        diffusion: f64,
        pressure_scale: f64,
        schur_mass_weight: f64,
        schur_laplace_weight: f64,
        tol: f64,
    ) -> Result<Self> {
        let n_s = space.n_scalar();
        let mut jacobi = vec![0.0; n_s];
        let md = ops.mass_scalar().diagonal();
        let sd = ops.stiffness_scalar().diagonal();
        for i in 0..n_s {
            let d = md[i] + diffusion * sd[i];
            if d <= 0.0 {
                return Err(Error::EigenFailure("velocity block diagonal not positive".into()));
            }
            jacobi[i] = 1.0 / d;
        }
        let mp_dense = ops.mass_pressure().to_dense();
        let mp_chol = nalgebra::Cholesky::new(mp_dense)
            .ok_or_else(|| Error::EigenFailure("pressure mass not positive definite".into()))?;
        // pressure stiffness has the constants in its kernel; shift by the
        // rank-one mean term so the factorization exists
        let n_p = space.n_pressure();
        let mut lp_dense = ops.stiffness_pressure().to_dense();
        let mp_vec = ops.pressure_mean();
        let shift = lp_dense.trace() / n_p as f64;
        let area = space.geometry().area();
        for i in 0..n_p {
            for j in 0..n_p {
                lp_dense[(i, j)] += shift * mp_vec[i] * mp_vec[j] / (area * area);
            }
        }
        let lp_chol = nalgebra::Cholesky::new(lp_dense)
            .ok_or_else(|| Error::EigenFailure("pressure stiffness shift failed".into()))?;
        let mv_scale: f64 = ops.velocity_mean().iter().map(|v| v * v).sum();
        let mp_scale: f64 = mp_vec.iter().map(|v| v * v).sum();
        Ok(Self {
            space,
            ops,
            diffusion,
            pressure_scale,
            tol,
            jacobi,
            mp_chol,
            lp_chol,
            schur_mass_weight,
            schur_laplace_weight,
            mv_scale,
            mp_scale,
        })
    }

    fn unknowns(&self) -> (usize, usize, usize) {
        let n_s = self.space.n_scalar();
        let n_p = self.space.n_pressure();
        (n_s, n_p, 2 * n_s + n_p + 3)
    }

    /// Solve with an optional convection operator `c C` frozen for this call.
    pub fn solve(
        &self,
        convection: Option<(&CsrMatrix, f64)>,
        rhs_x: &[f64],
        rhs_y: &[f64],
        rhs_p: &[f64],
    ) -> Result<SaddleSolution> {
        let (n_s, n_p, n) = self.unknowns();
        debug_assert_eq!(rhs_x.len(), n_s);
        debug_assert_eq!(rhs_p.len(), n_p);
        let mut b = vec![0.0; n];
        b[..n_s].copy_from_slice(rhs_x);
        b[n_s..2 * n_s].copy_from_slice(rhs_y);
        b[2 * n_s..2 * n_s + n_p].copy_from_slice(rhs_p);

        let apply = |z: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; n];
            let (ux, rest) = z.split_at(n_s);
            let (uy, rest) = rest.split_at(n_s);
            let (pp, mults) = rest.split_at(n_p);
            for (c, u) in [(0, ux), (1, uy)] {
                let seg = &mut out[c * n_s..(c + 1) * n_s];
                self.ops.mass_scalar().matvec_add(1.0, u, seg);
                if self.diffusion != 0.0 {
                    self.ops.stiffness_scalar().matvec_add(self.diffusion, u, seg);
                }
                if let Some((cmat, scale)) = convection {
                    cmat.matvec_add(scale, u, seg);
                }
                self.ops
                    .div_component(c)
                    .matvec_transpose_add(self.pressure_scale, pp, seg);
                for (o, mv) in seg.iter_mut().zip(self.ops.velocity_mean()) {
                    *o += mults[c] * mv;
                }
            }
            {
                let seg = &mut out[2 * n_s..2 * n_s + n_p];
                self.ops.div_x().matvec_add(1.0, ux, seg);
                self.ops.div_y().matvec_add(1.0, uy, seg);
                for (o, mp) in seg.iter_mut().zip(self.ops.pressure_mean()) {
                    *o += mults[2] * mp;
                }
            }
            out[2 * n_s + n_p] = dot(self.ops.velocity_mean(), ux);
            out[2 * n_s + n_p + 1] = dot(self.ops.velocity_mean(), uy);
            out[2 * n_s + n_p + 2] = dot(self.ops.pressure_mean(), pp);
            out
        };

        let precond = |r: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; n];
            let r_p = &r[2 * n_s..2 * n_s + n_p];
            // Schur block
            let rp_vec = DVector::from_column_slice(r_p);
            let mut p_hat = DVector::zeros(n_p);
            if self.schur_mass_weight != 0.0 {
                p_hat += self.mp_chol.solve(&rp_vec) * self.schur_mass_weight;
            }
            if self.schur_laplace_weight != 0.0 {
                p_hat += self.lp_chol.solve(&rp_vec) * self.schur_laplace_weight;
            }
            let sign = if self.pressure_scale >= 0.0 { -1.0 } else { 1.0 };
            p_hat *= sign;
            // velocity blocks
            for c in 0..2 {
                let mut rhs: Vec<f64> = r[c * n_s..(c + 1) * n_s].to_vec();
                self.ops.div_component(c).matvec_transpose_add(
                    -self.pressure_scale,
                    p_hat.as_slice(),
                    &mut rhs,
                );
                for (i, v) in rhs.iter().enumerate() {
                    out[c * n_s + i] = self.jacobi[i] * v;
                }
            }
            out[2 * n_s..2 * n_s + n_p].copy_from_slice(p_hat.as_slice());
            out[2 * n_s + n_p] = r[2 * n_s + n_p] / self.mv_scale;
            out[2 * n_s + n_p + 1] = r[2 * n_s + n_p + 1] / self.mv_scale;
            out[2 * n_s + n_p + 2] = r[2 * n_s + n_p + 2] / self.mp_scale;
            out
        };

        let restart = 500.min(n);
        let (z, stats) = gmres(apply, precond, &b, self.tol, restart, 4)?;
        let velocity = z[..2 * n_s].to_vec();
        let pressure = z[2 * n_s..2 * n_s + n_p].to_vec();
        let multipliers = [z[2 * n_s + n_p], z[2 * n_s + n_p + 1], z[2 * n_s + n_p + 2]];
        let state = FemState::new(self.space, velocity, pressure)?;
        Ok(SaddleSolution {
            state,
            multipliers,
            stats,
        })
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
