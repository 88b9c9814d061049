use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;

use super::field::SpectralVelocity;

/// Smallest grid size per axis on which products of `factors` fields with
/// cutoff `k_max` have alias-free retained coefficients and exact
/// equal-weight quadrature: `factors * k_max + 1`.
pub fn alias_free_resolution(k_max: usize, factors: usize) -> usize {
    factors * k_max + 1
}

/// Uniform tensor grid with cached FFT plans for pseudo-spectral transforms.
///
/// Grid points are `x_p = p L / G`, `p = 0..G-1` per axis; equal-weight
/// quadrature on this grid integrates trigonometric polynomials of per-axis
/// degree `< G` exactly.
pub struct SpectralGrid {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl SpectralGrid {
    pub fn new(size: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn check_representable(&self, k_max: usize) -> Result<()> {
        if self.size >= 2 * k_max + 1 {
            Ok(())
        } else {
            Err(Error::ResolutionTooLow {
                got: self.size,
                need: 2 * k_max + 1,
            })
        }
    }

    fn fft2(&self, buf: &mut [Complex64], forward: bool) {
        let plan = if forward { &self.forward } else { &self.inverse };
        plan.process(buf);
        transpose_square(buf, self.size);
        plan.process(buf);
        transpose_square(buf, self.size);
    }

    fn wrap(&self, m: i64) -> usize {
        m.rem_euclid(self.size as i64) as usize
    }

    /// Samples of one velocity component at the grid points, with each
    /// coefficient optionally premultiplied (used for derivatives).
    fn component_samples<F>(&self, field: &SpectralVelocity, comp: usize, weight: F) -> Vec<f64>
    where
        F: Fn(i64, i64) -> Complex64,
    {
        let g = self.size;
        let mut buf = vec![Complex64::ZERO; g * g];
        for (m1, m2, v) in field.modes() {
            buf[self.wrap(m1) * g + self.wrap(m2)] = v[comp] * weight(m1, m2);
        }
        self.fft2(&mut buf, false);
        buf.into_iter().map(|z| z.re).collect()
    }

    /// Point values of both components.
    pub fn values(&self, field: &SpectralVelocity) -> Result<[Vec<f64>; 2]> {
        self.check_representable(field.k_max())?;
        let one = |_: i64, _: i64| Complex64::ONE;
        Ok([
            self.component_samples(field, 0, one),
            self.component_samples(field, 1, one),
        ])
    }

    /// Point values of `d u_comp / d x_axis`.
    pub fn derivative(
        &self,
        field: &SpectralVelocity,
        comp: usize,
        axis: usize,
    ) -> Result<Vec<f64>> {
        self.check_representable(field.k_max())?;
        let s = field.geometry().wavenumber_scale();
        Ok(self.component_samples(field, comp, move |m1, m2| {
            let m = if axis == 0 { m1 } else { m2 };
            Complex64::new(0.0, s * m as f64)
        }))
    }

    /// Recover the truncated spectral field from physical samples of both
    /// components. Exact when the sampled function is a trigonometric
    /// polynomial of per-axis degree `<= size - k_max - 1`.
    pub fn field_from_samples(
        &self,
        geometry: TorusGeometry,
        k_max: usize,
        samples: &[Vec<f64>; 2],
    ) -> Result<SpectralVelocity> {
        self.check_representable(k_max)?;
        let g = self.size;
        let norm = 1.0 / (g * g) as f64;
        let mut out = SpectralVelocity::zeros(geometry, k_max);
        for comp in 0..2 {
            let mut buf: Vec<Complex64> = samples[comp]
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect();
            self.fft2(&mut buf, true);
            let k = k_max as i64;
            for m1 in -k..=k {
                for m2 in -k..=k {
                    if (m1, m2) <= (0, 0) {
                        continue;
                    }
                    let z = buf[self.wrap(m1) * g + self.wrap(m2)] * norm;
                    let zc = buf[self.wrap(-m1) * g + self.wrap(-m2)] * norm;
                    // average the conjugate pair so roundoff keeps the field real
                    let val = (z + zc.conj()) * 0.5;
                    let mut v = out.coeff(m1, m2);
                    v[comp] = val;
                    out.set_mode(m1, m2, v)?;
                }
            }
        }
        Ok(out)
    }

    /// Equal-weight quadrature of sampled values: `mean * L^2`.
    pub fn integrate(&self, samples: &[f64], geometry: TorusGeometry) -> f64 {
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        mean * geometry.area()
    }
}

fn transpose_square(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}
