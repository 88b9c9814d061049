use rand::Rng;

use crate::error::{Error, Result};

use super::field::SpectralVelocity;
use super::grid::{alias_free_resolution, SpectralGrid};
use super::norms::NormBundle;

/// Convection integral `b(u1, u2, u3) = integral (u1 . grad u2) . u3`.
///
/// Evaluated by tensor quadrature, exact when `quad_resolution` covers the
/// triple product (`3 k_max + 1` points per axis).
pub fn trilinear_form(
    u1: &SpectralVelocity,
    u2: &SpectralVelocity,
    u3: &SpectralVelocity,
    quad_resolution: usize,
) -> Result<f64> {
    u1.check_compatible(u2)?;
    u1.check_compatible(u3)?;
    let need = alias_free_resolution(u1.k_max(), 3);
    if quad_resolution < need {
        return Err(Error::ResolutionTooLow {
            got: quad_resolution,
            need,
        });
    }
    let grid = SpectralGrid::new(quad_resolution);
    let v1 = grid.values(u1)?;
    let v3 = grid.values(u3)?;
    let mut integrand = vec![0.0; quad_resolution * quad_resolution];
    for comp in 0..2 {
        let dx = grid.derivative(u2, comp, 0)?;
        let dy = grid.derivative(u2, comp, 1)?;
        for (p, val) in integrand.iter_mut().enumerate() {
            *val += (v1[0][p] * dx[p] + v1[1][p] * dy[p]) * v3[comp][p];
        }
    }
    Ok(grid.integrate(&integrand, u1.geometry()))
}

/// Leray-projected convection term `B(u, u) = P_H (u . grad) u`,
/// dealiased and truncated back to the cutoff of `u`.
///
/// Satisfies `(B(u,u), u) = 0` and `(B(u,u), Au) = 0` to roundoff.
pub fn nonlinear_term(u: &SpectralVelocity) -> Result<SpectralVelocity> {
    u.ensure_divergence_free()?;
    let k = u.k_max();
    let grid = SpectralGrid::new(alias_free_resolution(k, 3));
    nonlinear_term_frozen(u, u, &grid)
}

/// `P_H (w . grad) u` truncated to the cutoff of `u`, on a caller-provided
/// grid (callers stepping in time reuse one grid across steps).
pub(crate) fn nonlinear_term_frozen(
    w: &SpectralVelocity,
    u: &SpectralVelocity,
    grid: &SpectralGrid,
) -> Result<SpectralVelocity> {
    w.check_compatible(u)?;
    let vw = grid.values(w)?;
    let n = grid.size() * grid.size();
    let mut conv = [vec![0.0; n], vec![0.0; n]];
    for comp in 0..2 {
        let dx = grid.derivative(u, comp, 0)?;
        let dy = grid.derivative(u, comp, 1)?;
        for p in 0..n {
            conv[comp][p] = vw[0][p] * dx[p] + vw[1][p] * dy[p];
        }
    }
    let raw = grid.field_from_samples(u.geometry(), u.k_max(), &conv)?;
    Ok(raw.leray_project())
}

/// Empirical Gagliardo-Nirenberg constant: max over random divergence-free
/// fields of `|u|_L4^2 / (|u|_L2 |grad u|_L2)`.
pub fn estimate_gn_constant<R: Rng + ?Sized>(
    geometry: crate::geometry::TorusGeometry,
    k_max: usize,
    samples: usize,
    rng: &mut R,
) -> Result<f64> {
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let u = SpectralVelocity::random(geometry, k_max, 1.0, 1.0, true, rng);
        let norms = NormBundle::compute_exact(&u)?;
        if norms.l2 > 0.0 && norms.grad_l2 > 0.0 {
            best = best.max(norms.l4 * norms.l4 / (norms.l2 * norms.grad_l2));
        }
    }
    Ok(best)
}
