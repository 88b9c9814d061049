//! The periodic square domain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The torus `[0, L]^2` with periodic identification of opposite sides.
///
/// All admissible wavevectors are `2*pi/L` times an integer pair; fields on
/// the torus have mean zero over the square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusGeometry {
    side: f64,
}

impl TorusGeometry {
    pub fn new(side: f64) -> Result<Self> {
        if side > 0.0 && side.is_finite() {
            Ok(Self { side })
        } else {
            Err(Error::InvalidParameter(format!(
                "torus side length must be positive, got {side}"
            )))
        }
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn area(&self) -> f64 {
        self.side * self.side
    }

    /// Scale factor from integer mode pairs to physical wavevectors.
    pub fn wavenumber_scale(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.side
    }

    /// Sharp constant `c` in the per-mode inequality `|grad u|^2 <= c |Au|^2`,
    /// attained on the lowest wavenumber. Equals `(L / 2 pi)^2`.
    pub fn grad_by_stokes_constant(&self) -> f64 {
        let s = self.wavenumber_scale();
        1.0 / (s * s)
    }

    /// Sharp constant in the Poincare inequality `|u| <= c |grad u|`,
    /// also `(L / 2 pi)^2` when stated for squared norms.
    pub fn poincare_constant_sq(&self) -> f64 {
        self.grad_by_stokes_constant()
    }
}
