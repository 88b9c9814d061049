use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;
use crate::spectral::{alias_free_resolution, SpectralGrid, SpectralVelocity};

use super::params::SchemeParams;

/// Fully implicit Euler step on the divergence-free spectral space.
///
/// Solves `u + nu k A u + k B(u, u) = u_prev + f` by damped Picard
/// iteration with the Stokes part inverted exactly per mode:
/// `u <- (I + nu k A)^-1 [u_prev + f - k B(u, u)]`. The damping factor is
/// halved whenever the equation residual grows; non-convergence is a loud
/// error carrying the last residual.
pub struct ImplicitSpectralStepper {
    nu: f64,
    dt: f64,
    k_max: usize,
    picard_tol: f64,
    picard_max_iter: usize,
    grid: SpectralGrid,
}

#[derive(Debug, Clone, Copy)]
pub struct StepStats {
    pub iterations: usize,
    pub residual: f64,
}

impl ImplicitSpectralStepper {
    pub fn new(params: &SchemeParams, _geometry: TorusGeometry) -> Self {
        let k_max = params.k_ref;
        Self {
            nu: params.viscosity,
            dt: params.dt(),
            k_max,
            picard_tol: params.picard_tol,
            picard_max_iter: params.picard_max_iter,
            grid: SpectralGrid::new(fast_size(alias_free_resolution(k_max, 3))),
        }
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Advance one step; `forcing` is the projected noise field
    /// `P_H G(u_prev) dW`, already at the scheme cutoff.
    pub fn step(
        &self,
        u_prev: &SpectralVelocity,
        forcing: &SpectralVelocity,
    ) -> Result<(SpectralVelocity, StepStats)> {
        u_prev.ensure_divergence_free()?;
        let rhs = u_prev.add(forcing)?;
        let rhs_scale = rhs.norm_l2().max(1.0);
        let tol = self.picard_tol * rhs_scale;
        let helmholtz = self.nu * self.dt;

        let mut u = rhs.inverse_helmholtz(helmholtz); // Stokes-only predictor
        let mut residual = self.equation_residual(&u, &rhs)?;
        if residual <= tol {
            return Ok((
                u,
                StepStats {
                    iterations: 0,
                    residual,
                },
            ));
        }
        let mut theta = 1.0f64;
        for it in 1..=self.picard_max_iter {
            let convection = crate::spectral::nonlinear_term_frozen(&u, &u, &self.grid)?;
            let mut target = rhs.clone();
            target.axpy(-self.dt, &convection)?;
            let candidate_full = target.inverse_helmholtz(helmholtz);
            loop {
                let mut trial = u.scale(1.0 - theta);
                trial.axpy(theta, &candidate_full)?;
                let trial_res = self.equation_residual(&trial, &rhs)?;
                if trial_res <= residual || theta <= 1.0 / 64.0 {
                    u = trial;
                    residual = trial_res;
                    break;
                }
                theta *= 0.5;
            }
            if residual <= tol {
                let mut out = u;
                out.mark_divergence_free();
                return Ok((
                    out,
                    StepStats {
                        iterations: it,
                        residual,
                    },
                ));
            }
        }
        Err(Error::PicardDivergence {
            iterations: self.picard_max_iter,
            residual,
        })
    }

    /// L2 norm of `(I + nu k A) u + k B(u,u) - rhs`.
    fn equation_residual(&self, u: &SpectralVelocity, rhs: &SpectralVelocity) -> Result<f64> {
        let convection = crate::spectral::nonlinear_term_frozen(u, u, &self.grid)?;
        let mut f = u.clone();
        f.axpy(self.nu * self.dt, &u.stokes_apply())?;
        f.axpy(self.dt, &convection)?;
        f.axpy(-1.0, rhs)?;
        Ok(f.norm_l2())
    }
}

/// Smallest grid size at least `n` whose factors are 2, 3 and 5.
pub(crate) fn fast_size(n: usize) -> usize {
    let mut g = n.max(2);
    loop {
        let mut r = g;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return g;
        }
        g += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn torus() -> TorusGeometry {
        TorusGeometry::new(2.0 * std::f64::consts::PI).unwrap()
    }

    fn params(n: usize) -> SchemeParams {
        SchemeParams::new(1.0, n, 1.0, 4).unwrap()
    }

    #[test]
    fn zero_input_stays_zero() {
        let stepper = ImplicitSpectralStepper::new(&params(8), torus());
        let zero = SpectralVelocity::zeros(torus(), 4);
        let (next, stats) = stepper.step(&zero, &zero).unwrap();
        assert_eq!(next.coeff_norm(), 0.0);
        assert_eq!(stats.iterations, 0);
    }

    #[test]
    fn shear_step_matches_single_mode_stokes_solve() {
        // convection of a unidirectional shear vanishes, so the step is the
        // exact division u_prev / (1 + nu k) on the unit wavenumber
        let p = params(10);
        let stepper = ImplicitSpectralStepper::new(&p, torus());
        let shear = SpectralVelocity::from_modes(
            torus(),
            4,
            &[(0, 1, [Complex64::new(0.0, -0.5), Complex64::ZERO])],
        )
        .unwrap();
        let zero = SpectralVelocity::zeros(torus(), 4);
        let (next, _) = stepper.step(&shear, &zero).unwrap();
        let expected = shear.scale(1.0 / (1.0 + p.viscosity * p.dt()));
        let gap = next.sub(&expected).unwrap().norm_l2();
        assert!(gap < 1e-11, "gap {gap}");
    }

    #[test]
    fn fast_size_rounds_to_smooth_numbers() {
        assert_eq!(fast_size(13), 15);
        assert_eq!(fast_size(16), 16);
        assert_eq!(fast_size(17), 18);
        assert_eq!(fast_size(31), 32);
    }
}
