use crate::error::Result;
use crate::geometry::TorusGeometry;
use crate::linalg::{gmres, IterStats};
use crate::spectral::{alias_free_resolution, SpectralGrid, SpectralVelocity};

use super::params::SchemeParams;
use super::time_euler::fast_size;

/// Semi-implicit Euler step on the divergence-free truncated spectral
/// subspace: convection is frozen in its transport slot, so each step is
/// the linear solve
///
/// `(I + nu k A) u + k P (w . grad) u = u_prev + f`,  `w = u_prev`.
///
/// The subspace is exactly divergence-free, so the stabilized convection
/// form coincides with the plain one. Solved by GMRES on packed real
/// coefficients with the Stokes part as preconditioner.
pub struct DivFreeGalerkinStepper {
    geometry: TorusGeometry,
    nu: f64,
    dt: f64,
    k_h: usize,
    solver_tol: f64,
    grid: SpectralGrid,
}

impl DivFreeGalerkinStepper {
    pub fn new(params: &SchemeParams, geometry: TorusGeometry) -> Result<Self> {
        let k_h = params.k_galerkin.ok_or_else(|| {
            crate::error::Error::InvalidParameter(
                "divergence-free Galerkin scheme needs a subspace cutoff".into(),
            )
        })?;
        Ok(Self {
            geometry,
            nu: params.viscosity,
            dt: params.dt(),
            k_h,
            solver_tol: params.solver_tol,
            grid: SpectralGrid::new(fast_size(alias_free_resolution(k_h, 3))),
        })
    }

    pub fn cutoff(&self) -> usize {
        self.k_h
    }

    /// Advance one step; `forcing` is `P G(u_prev) dW` truncated to the
    /// subspace cutoff.
    pub fn step(
        &self,
        u_prev: &SpectralVelocity,
        forcing: &SpectralVelocity,
    ) -> Result<(SpectralVelocity, IterStats)> {
        u_prev.ensure_divergence_free()?;
        let rhs = u_prev.add(forcing)?;
        let helmholtz = self.nu * self.dt;
        let b = rhs.pack();
        let geometry = self.geometry;
        let k_h = self.k_h;

        let apply = |x: &[f64]| -> Vec<f64> {
            let u = SpectralVelocity::unpack(geometry, k_h, x).expect("packed length fixed");
            let mut out = u.clone();
            out.axpy(helmholtz, &u.stokes_apply()).expect("same cutoff");
            let conv = crate::spectral::nonlinear_term_frozen(u_prev, &u, &self.grid)
                .expect("grid sized for the cutoff");
            out.axpy(self.dt, &conv).expect("same cutoff");
            out.pack()
        };
        let precond = |r: &[f64]| -> Vec<f64> {
            let f = SpectralVelocity::unpack(geometry, k_h, r).expect("packed length fixed");
            f.inverse_helmholtz(helmholtz).pack()
        };
        let (x, stats) = gmres(apply, precond, &b, self.solver_tol, 200, 3)?;
        let mut u = SpectralVelocity::unpack(geometry, k_h, &x)?;
        // the equation maps gradient components to zero under a
        // divergence-free right-hand side; project away solver roundoff
        u = u.leray_project();
        Ok((u, stats))
    }
}
