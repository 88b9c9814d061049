use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::field::SpectralVelocity;
use super::grid::SpectralGrid;

/// Norms of a spectral field: L2, gradient, squared V-norm, L4 and the
/// L2 norm of the Stokes operator image.
///
/// `v_norm_sq = l2^2 + grad_l2^2` holds exactly by construction; `l4` comes
/// from dealiased physical-space quadrature, everything else from Parseval
/// sums over modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBundle {
    pub l2: f64,
    pub grad_l2: f64,
    pub v_norm_sq: f64,
    pub l4: f64,
    pub stokes_l2: f64,
}

impl NormBundle {
    /// Compute all norms; `quad_resolution` must be at least `2 k_max + 1`
    /// so the field is representable on the quadrature grid. For an exact
    /// L4 norm use at least `4 k_max + 1`.
    pub fn compute(field: &SpectralVelocity, quad_resolution: usize) -> Result<Self> {
        let need = 2 * field.k_max() + 1;
        if quad_resolution < need {
            return Err(Error::ResolutionTooLow {
                got: quad_resolution,
                need,
            });
        }
        let l2_sq = field.inner_l2(field);
        let grad_sq = field.inner_h1(field);
        let grid = SpectralGrid::new(quad_resolution);
        let vals = grid.values(field)?;
        let quart: Vec<f64> = vals[0]
            .iter()
            .zip(&vals[1])
            .map(|(&x, &y)| {
                let sq = x * x + y * y;
                sq * sq
            })
            .collect();
        let l4 = grid
            .integrate(&quart, field.geometry())
            .max(0.0)
            .powf(0.25);
        Ok(Self {
            l2: l2_sq.max(0.0).sqrt(),
            grad_l2: grad_sq.max(0.0).sqrt(),
            v_norm_sq: l2_sq + grad_sq,
            l4,
            stokes_l2: field.norm_stokes_l2(),
        })
    }

    /// Convenience variant with an exactness-grade quadrature resolution.
    pub fn compute_exact(field: &SpectralVelocity) -> Result<Self> {
        Self::compute(field, 4 * field.k_max() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TorusGeometry;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn zero_field_has_zero_norms() {
        let geom = TorusGeometry::new(1.0).unwrap();
        let z = SpectralVelocity::zeros(geom, 3);
        let n = NormBundle::compute_exact(&z).unwrap();
        assert_eq!(n.l2, 0.0);
        assert_eq!(n.grad_l2, 0.0);
        assert_eq!(n.v_norm_sq, 0.0);
        assert_eq!(n.l4, 0.0);
        assert_eq!(n.stokes_l2, 0.0);
    }

    #[test]
    fn shear_norms_match_closed_form() {
        // u = (sin y, 0) on the 2 pi torus: |u|^2 = |grad u|^2 = 2 pi^2
        let geom = TorusGeometry::new(2.0 * std::f64::consts::PI).unwrap();
        let u = SpectralVelocity::from_modes(
            geom,
            2,
            &[(0, 1, [Complex64::new(0.0, -0.5), Complex64::ZERO])],
        )
        .unwrap();
        let n = NormBundle::compute_exact(&u).unwrap();
        let expected = 2.0 * std::f64::consts::PI.powi(2);
        assert_relative_eq!(n.l2 * n.l2, expected, max_relative = 1e-12);
        assert_relative_eq!(n.grad_l2 * n.grad_l2, expected, max_relative = 1e-12);
        assert_eq!(n.v_norm_sq, n.l2 * n.l2 + n.grad_l2 * n.grad_l2);
        // |sin y|_L4^4 = integral sin^4 = (3/8) * 2pi * 2pi
        let l4_expected = (3.0 / 8.0 * (2.0 * std::f64::consts::PI).powi(2)).powf(0.25);
        assert_relative_eq!(n.l4, l4_expected, max_relative = 1e-12);
    }

    #[test]
    fn resolution_below_contract_rejected() {
        let geom = TorusGeometry::new(1.0).unwrap();
        let z = SpectralVelocity::zeros(geom, 4);
        let err = NormBundle::compute(&z, 8).unwrap_err();
        assert!(matches!(
            err,
            crate::error::Error::ResolutionTooLow { got: 8, need: 9 }
        ));
    }
}
