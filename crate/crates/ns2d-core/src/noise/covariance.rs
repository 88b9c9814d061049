use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;
use crate::spectral::SpectralVelocity;

/// Eigenpairs of a symmetric positive trace-class covariance operator on the
/// divergence-free noise space.
///
/// Eigenfields are the real orthonormal Fourier basis of mean-zero
/// divergence-free fields: for each wavevector representative `m` the pair
/// `sqrt(2)/L * m_perp * cos(k.x)` and `sqrt(2)/L * m_perp * sin(k.x)`,
/// enumerated by increasing `|m|^2`. Eigenvalues decay like `j^-decay`.
#[derive(Debug, Clone)]
pub struct CovarianceSpec {
    geometry: TorusGeometry,
    k_max: usize,
    eigenvalues: Vec<f64>,
    eigenfields: Vec<SpectralVelocity>,
}

/// Wavevector representatives ordered by `(|m|^2, m1, m2)`, half-space only.
fn mode_order(k_max: usize) -> Vec<(i64, i64)> {
    let k = k_max as i64;
    let mut modes: Vec<(i64, i64)> = Vec::new();
    for m1 in -k..=k {
        for m2 in -k..=k {
            if (m1, m2) > (0, 0) {
                modes.push((m1, m2));
            }
        }
    }
    modes.sort_by_key(|&(m1, m2)| (m1 * m1 + m2 * m2, m1, m2));
    modes
}

/// Real orthonormal field pair for one wavevector; `parallel` picks the
/// gradient-type direction instead of the divergence-free one.
pub(crate) fn basis_pair(
    geometry: TorusGeometry,
    k_max: usize,
    m: (i64, i64),
    parallel: bool,
) -> [SpectralVelocity; 2] {
    let (m1, m2) = m;
    let norm = ((m1 * m1 + m2 * m2) as f64).sqrt();
    let dir = if parallel {
        [m1 as f64 / norm, m2 as f64 / norm]
    } else {
        [-m2 as f64 / norm, m1 as f64 / norm]
    };
    // sqrt(2)/L puts the cos/sin profiles at unit L2 norm
    let amp = std::f64::consts::SQRT_2 / geometry.side() / 2.0;
    let cos_coeff = [
        Complex64::new(amp * dir[0], 0.0),
        Complex64::new(amp * dir[1], 0.0),
    ];
    let sin_coeff = [
        Complex64::new(0.0, -amp * dir[0]),
        Complex64::new(0.0, -amp * dir[1]),
    ];
    let cos_field = SpectralVelocity::from_modes(geometry, k_max, &[(m1, m2, cos_coeff)]).unwrap();
    let sin_field = SpectralVelocity::from_modes(geometry, k_max, &[(m1, m2, sin_coeff)]).unwrap();
    [cos_field, sin_field]
}

impl CovarianceSpec {
    /// Divergence-free covariance with `channels` eigenpairs and eigenvalue
    /// decay `q_j = trace_scale * j^-decay / normalizer`, normalized so the
    /// trace equals `trace_scale`.
    pub fn divergence_free(
        geometry: TorusGeometry,
        k_max: usize,
        channels: usize,
        decay: f64,
        trace_scale: f64,
    ) -> Result<Self> {
        if channels == 0 {
            return Err(Error::InvalidParameter("need at least one channel".into()));
        }
        if trace_scale <= 0.0 || decay < 0.0 {
            return Err(Error::InvalidParameter(
                "trace must be positive and decay nonnegative".into(),
            ));
        }
        let modes = mode_order(k_max);
        if channels > 2 * modes.len() {
            return Err(Error::InvalidParameter(format!(
                "cutoff {k_max} supports at most {} channels",
                2 * modes.len()
            )));
        }
        let mut eigenfields = Vec::with_capacity(channels);
        'outer: for m in modes {
            for field in basis_pair(geometry, k_max, m, false) {
                eigenfields.push(field);
                if eigenfields.len() == channels {
                    break 'outer;
                }
            }
        }
        let raw: Vec<f64> = (1..=channels).map(|j| (j as f64).powf(-decay)).collect();
        let raw_sum: f64 = raw.iter().sum();
        let eigenvalues = raw.into_iter().map(|q| q * trace_scale / raw_sum).collect();
        Ok(Self {
            geometry,
            k_max,
            eigenvalues,
            eigenfields,
        })
    }

    pub fn geometry(&self) -> TorusGeometry {
        self.geometry
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn channels(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalue(&self, j: usize) -> f64 {
        self.eigenvalues[j]
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenfield(&self, j: usize) -> &SpectralVelocity {
        &self.eigenfields[j]
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Materialize one increment `sum_j sqrt(q_j) d_beta_j e_j` at cutoff
    /// `k_out >= k_max`.
    pub fn increment_field(&self, delta_beta: &[f64], k_out: usize) -> Result<SpectralVelocity> {
        if delta_beta.len() != self.channels() {
            return Err(Error::InvalidParameter(format!(
                "increment has {} channels, covariance has {}",
                delta_beta.len(),
                self.channels()
            )));
        }
        let mut out = SpectralVelocity::zeros(self.geometry, self.k_max);
        for (j, &db) in delta_beta.iter().enumerate() {
            out.axpy(self.eigenvalues[j].sqrt() * db, &self.eigenfields[j])?;
        }
        Ok(out.pad(k_out))
    }

    /// K-norm squared of an increment, `sum_j q_j d_beta_j^2`.
    pub fn increment_k_norm_sq(&self, delta_beta: &[f64]) -> f64 {
        delta_beta
            .iter()
            .zip(&self.eigenvalues)
            .map(|(&db, &q)| q * db * db)
            .sum()
    }

    /// Largest deviation from orthonormality over all eigenfield pairs.
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.eigenfields.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let inner = self.eigenfields[i].inner_l2(&self.eigenfields[j]);
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner - expect).abs());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> TorusGeometry {
        TorusGeometry::new(2.0 * std::f64::consts::PI).unwrap()
    }

    #[test]
    fn eigenfields_are_orthonormal_and_divergence_free() {
        let cov = CovarianceSpec::divergence_free(torus(), 4, 12, 2.0, 1.0).unwrap();
        assert!(cov.orthonormality_residual() < 1e-12);
        for j in 0..cov.channels() {
            assert!(cov.eigenfield(j).is_divergence_free());
            assert!(cov.eigenfield(j).divergence_residual() < 1e-14);
        }
    }

    #[test]
    fn trace_is_normalized() {
        let cov = CovarianceSpec::divergence_free(torus(), 4, 8, 2.0, 0.7).unwrap();
        approx::assert_relative_eq!(cov.trace(), 0.7, max_relative = 1e-14);
        let evs = cov.eigenvalues();
        for w in evs.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!(evs.iter().all(|&q| q > 0.0));
    }

    #[test]
    fn too_many_channels_rejected() {
        assert!(CovarianceSpec::divergence_free(torus(), 1, 9, 2.0, 1.0).is_err());
    }

    #[test]
    fn increment_field_matches_k_norm() {
        let cov = CovarianceSpec::divergence_free(torus(), 3, 6, 2.0, 1.0).unwrap();
        let db = vec![0.3, -0.2, 0.5, 0.0, 0.1, -0.4];
        let field = cov.increment_field(&db, 6).unwrap();
        // eigenfields orthonormal in L2 = K, so the L2 norm matches the K norm
        approx::assert_relative_eq!(
            field.inner_l2(&field),
            cov.increment_k_norm_sq(&db),
            max_relative = 1e-12
        );
    }
}
