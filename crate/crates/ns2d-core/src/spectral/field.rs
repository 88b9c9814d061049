use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;

/// Divergence-free-capable, mean-zero, Fourier-truncated vector field on the
/// torus.
///
/// Coefficients are stored densely over the `(2K+1) x (2K+1)` square of
/// modes `m = (m1, m2)`, `|m|_inf <= K`; the `m = 0` entry is always zero
/// (mean-zero) and `u_hat(-m) = conj(u_hat(m))` holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVelocity {
    geometry: TorusGeometry,
    k_max: usize,
    /// Row-major over `(i, j)`, mode `m = (i - K, j - K)`; one complex pair
    /// per mode for the two velocity components.
    coeffs: Vec<[Complex64; 2]>,
    divergence_free: bool,
}

/// Iterator over non-zero modes `(m1, m2, u_hat)`.
pub struct ModeIter<'a> {
    field: &'a SpectralVelocity,
    idx: usize,
}

impl<'a> Iterator for ModeIter<'a> {
    type Item = (i64, i64, [Complex64; 2]);

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.field.coeffs.len();
        while self.idx < n {
            let idx = self.idx;
            self.idx += 1;
            let (m1, m2) = self.field.mode_of(idx);
            if m1 == 0 && m2 == 0 {
                continue;
            }
            return Some((m1, m2, self.field.coeffs[idx]));
        }
        None
    }
}

impl SpectralVelocity {
    pub fn zeros(geometry: TorusGeometry, k_max: usize) -> Self {
        let side = 2 * k_max + 1;
        Self {
            geometry,
            k_max,
            coeffs: vec![[Complex64::ZERO; 2]; side * side],
            divergence_free: true,
        }
    }

    /// Build from explicit mode assignments; the conjugate mode is set
    /// automatically so the field stays real valued.
    pub fn from_modes(
        geometry: TorusGeometry,
        k_max: usize,
        modes: &[(i64, i64, [Complex64; 2])],
    ) -> Result<Self> {
        let mut field = Self::zeros(geometry, k_max);
        for &(m1, m2, v) in modes {
            field.set_mode(m1, m2, v)?;
        }
        field.divergence_free = field.divergence_residual() < 1e-14 * (1.0 + field.coeff_norm());
        Ok(field)
    }

    /// Random field with coefficient magnitudes decaying like `|m|^-decay`.
    ///
    /// With `div_free` each mode is projected onto the orthogonal complement
    /// of its wavevector, so the field lies in the divergence-free space.
    pub fn random<R: Rng + ?Sized>(
        geometry: TorusGeometry,
        k_max: usize,
        decay: f64,
        amplitude: f64,
        div_free: bool,
        rng: &mut R,
    ) -> Self {
        let mut field = Self::zeros(geometry, k_max);
        let k = k_max as i64;
        for m1 in -k..=k {
            for m2 in -k..=k {
                // fill one representative per conjugate pair
                if (m1, m2) <= (0, 0) {
                    continue;
                }
                let r = ((m1 * m1 + m2 * m2) as f64).sqrt();
                let scale = amplitude * r.powf(-decay) / std::f64::consts::SQRT_2;
                let mut draw = || -> Complex64 {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    Complex64::new(re, im) * scale
                };
                let mut v = [draw(), draw()];
                if div_free {
                    v = project_mode(m1, m2, v);
                }
                field.write_pair(m1, m2, v);
            }
        }
        field.divergence_free = div_free;
        field
    }

    pub fn geometry(&self) -> TorusGeometry {
        self.geometry
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_free
    }

    pub fn modes(&self) -> ModeIter<'_> {
        ModeIter {
            field: self,
            idx: 0,
        }
    }

    fn index_of(&self, m1: i64, m2: i64) -> usize {
        let k = self.k_max as i64;
        debug_assert!(m1.abs() <= k && m2.abs() <= k);
        let side = 2 * self.k_max + 1;
        ((m1 + k) as usize) * side + (m2 + k) as usize
    }

    fn mode_of(&self, idx: usize) -> (i64, i64) {
        let side = 2 * self.k_max + 1;
        let k = self.k_max as i64;
        ((idx / side) as i64 - k, (idx % side) as i64 - k)
    }

    pub fn coeff(&self, m1: i64, m2: i64) -> [Complex64; 2] {
        let k = self.k_max as i64;
        if m1.abs() > k || m2.abs() > k {
            [Complex64::ZERO; 2]
        } else {
            self.coeffs[self.index_of(m1, m2)]
        }
    }

    /// Assign the coefficient of a single mode and its conjugate partner.
    pub fn set_mode(&mut self, m1: i64, m2: i64, v: [Complex64; 2]) -> Result<()> {
        let k = self.k_max as i64;
        if m1 == 0 && m2 == 0 {
            return Err(Error::InvalidParameter(
                "mean mode m = 0 must stay zero".into(),
            ));
        }
        if m1.abs() > k || m2.abs() > k {
            return Err(Error::InvalidParameter(format!(
                "mode ({m1}, {m2}) outside cutoff {k}"
            )));
        }
        self.write_pair(m1, m2, v);
        Ok(())
    }

    fn write_pair(&mut self, m1: i64, m2: i64, v: [Complex64; 2]) {
        let idx = self.index_of(m1, m2);
        self.coeffs[idx] = v;
        let idx_conj = self.index_of(-m1, -m2);
        self.coeffs[idx_conj] = [v[0].conj(), v[1].conj()];
    }

    /// Max over modes of `|m . u_hat(m)|`, the divergence in mode space.
    pub fn divergence_residual(&self) -> f64 {
        self.modes()
            .map(|(m1, m2, v)| (v[0] * m1 as f64 + v[1] * m2 as f64).norm())
            .fold(0.0, f64::max)
    }

    /// Euclidean norm of the raw coefficient vector (no area factor).
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|v| v[0].norm_sqr() + v[1].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.geometry == other.geometry && self.k_max == other.k_max {
            Ok(())
        } else {
            Err(Error::GeometryMismatch)
        }
    }

    /// Leray projection: per mode, removal of the component parallel to the
    /// wavevector. Idempotent and self-adjoint in the L2 inner product.
    pub fn leray_project(&self) -> Self {
        let mut out = self.clone();
        let k = self.k_max as i64;
        for m1 in -k..=k {
            for m2 in -k..=k {
                if m1 == 0 && m2 == 0 {
                    continue;
                }
                let idx = out.index_of(m1, m2);
                out.coeffs[idx] = project_mode(m1, m2, out.coeffs[idx]);
            }
        }
        out.divergence_free = true;
        out
    }

    /// Stokes operator `A = -Laplacian`: per-mode multiplication by
    /// `|2 pi m / L|^2`. Preserves the divergence-free property.
    pub fn stokes_apply(&self) -> Self {
        let s = self.geometry.wavenumber_scale();
        let s2 = s * s;
        let mut out = self.clone();
        let k = self.k_max as i64;
        for m1 in -k..=k {
            for m2 in -k..=k {
                let idx = out.index_of(m1, m2);
                let mult = s2 * (m1 * m1 + m2 * m2) as f64;
                out.coeffs[idx][0] *= mult;
                out.coeffs[idx][1] *= mult;
            }
        }
        out
    }

    /// Solve `(I + c A) v = self` per mode; `c >= 0`.
    pub fn inverse_helmholtz(&self, c: f64) -> Self {
        let s = self.geometry.wavenumber_scale();
        let s2 = s * s;
        let mut out = self.clone();
        let k = self.k_max as i64;
        for m1 in -k..=k {
            for m2 in -k..=k {
                let idx = out.index_of(m1, m2);
                let mult = 1.0 / (1.0 + c * s2 * (m1 * m1 + m2 * m2) as f64);
                out.coeffs[idx][0] *= mult;
                out.coeffs[idx][1] *= mult;
            }
        }
        out
    }

    /// Restrict to a smaller cutoff (orthogonal projection onto the coarser
    /// mode square).
    pub fn truncate(&self, k_new: usize) -> Self {
        if k_new >= self.k_max {
            return self.clone();
        }
        let mut out = Self::zeros(self.geometry, k_new);
        let k = k_new as i64;
        for m1 in -k..=k {
            for m2 in -k..=k {
                if m1 == 0 && m2 == 0 {
                    continue;
                }
                let idx = out.index_of(m1, m2);
                out.coeffs[idx] = self.coeff(m1, m2);
            }
        }
        out.divergence_free = self.divergence_free;
        out
    }

    /// Embed into a larger cutoff.
    pub fn pad(&self, k_new: usize) -> Self {
        if k_new <= self.k_max {
            return self.truncate(k_new);
        }
        let mut out = Self::zeros(self.geometry, k_new);
        for (m1, m2, v) in self.modes() {
            let idx = out.index_of(m1, m2);
            out.coeffs[idx] = v;
        }
        out.divergence_free = self.divergence_free;
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            c[0] *= factor;
            c[1] *= factor;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            c[0] += o[0];
            c[1] += o[1];
        }
        out.divergence_free = self.divergence_free && other.divergence_free;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// In-place `self += factor * other`.
    pub fn axpy(&mut self, factor: f64, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            c[0] += factor * o[0];
            c[1] += factor * o[1];
        }
        self.divergence_free = self.divergence_free && other.divergence_free;
        Ok(())
    }

    /// L2 inner product over the torus, `integral of u . v`.
    pub fn inner_l2(&self, other: &Self) -> f64 {
        let area = self.geometry.area();
        let mut acc = 0.0;
        for (c, o) in self.coeffs.iter().zip(&other.coeffs) {
            acc += (c[0] * o[0].conj()).re + (c[1] * o[1].conj()).re;
        }
        area * acc
    }

    /// `integral of grad u : grad v`.
    pub fn inner_h1(&self, other: &Self) -> f64 {
        let area = self.geometry.area();
        let s = self.geometry.wavenumber_scale();
        let s2 = s * s;
        let mut acc = 0.0;
        for (m1, m2, c) in self.modes() {
            let o = other.coeff(m1, m2);
            let w = s2 * (m1 * m1 + m2 * m2) as f64;
            acc += w * ((c[0] * o[0].conj()).re + (c[1] * o[1].conj()).re);
        }
        area * acc
    }

    pub fn norm_l2(&self) -> f64 {
        self.inner_l2(self).max(0.0).sqrt()
    }

    pub fn norm_grad_l2(&self) -> f64 {
        self.inner_h1(self).max(0.0).sqrt()
    }

    /// Squared V-norm, `|u|^2 + |grad u|^2`.
    pub fn norm_v_sq(&self) -> f64 {
        self.inner_l2(self) + self.inner_h1(self)
    }

    pub fn norm_stokes_l2(&self) -> f64 {
        let area = self.geometry.area();
        let s = self.geometry.wavenumber_scale();
        let s2 = s * s;
        let mut acc = 0.0;
        for (m1, m2, c) in self.modes() {
            let w = s2 * (m1 * m1 + m2 * m2) as f64;
            acc += w * w * (c[0].norm_sqr() + c[1].norm_sqr());
        }
        (area * acc).sqrt()
    }

    /// Pack the independent real degrees of freedom (one representative per
    /// conjugate mode pair, two complex components each) into a flat vector.
    pub fn pack(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.packed_len());
        let k = self.k_max as i64;
        for m1 in -k..=k {
            for m2 in -k..=k {
                if (m1, m2) <= (0, 0) {
                    continue;
                }
                let c = self.coeff(m1, m2);
                out.extend_from_slice(&[c[0].re, c[0].im, c[1].re, c[1].im]);
            }
        }
        out
    }

    pub fn packed_len(&self) -> usize {
        let side = 2 * self.k_max + 1;
        2 * (side * side - 1)
    }

    /// Inverse of [`pack`]; Hermitian symmetry is restored from the stored
    /// representatives.
    pub fn unpack(geometry: TorusGeometry, k_max: usize, data: &[f64]) -> Result<Self> {
        let mut field = Self::zeros(geometry, k_max);
        if data.len() != field.packed_len() {
            return Err(Error::InvalidParameter(format!(
                "packed length {} does not match cutoff {k_max}",
                data.len()
            )));
        }
        let k = k_max as i64;
        let mut at = 0;
        for m1 in -k..=k {
            for m2 in -k..=k {
                if (m1, m2) <= (0, 0) {
                    continue;
                }
                let v = [
                    Complex64::new(data[at], data[at + 1]),
                    Complex64::new(data[at + 2], data[at + 3]),
                ];
                at += 4;
                field.write_pair(m1, m2, v);
            }
        }
        field.divergence_free =
            field.divergence_residual() < 1e-12 * (1.0 + field.coeff_norm());
        Ok(field)
    }

    /// Point value by direct mode summation (used off the tensor grid,
    /// e.g. at finite element quadrature points).
    pub fn eval_at(&self, x: f64, y: f64) -> [f64; 2] {
        let s = self.geometry.wavenumber_scale();
        let mut out = [0.0; 2];
        for (m1, m2, v) in self.modes() {
            let phase = s * (m1 as f64 * x + m2 as f64 * y);
            let (sin_p, cos_p) = phase.sin_cos();
            // real part of v * exp(i phase)
            out[0] += v[0].re * cos_p - v[0].im * sin_p;
            out[1] += v[1].re * cos_p - v[1].im * sin_p;
        }
        out
    }

    /// Gradient at a point; `out[comp][axis] = d u_comp / d x_axis`.
    pub fn grad_at(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let s = self.geometry.wavenumber_scale();
        let mut out = [[0.0; 2]; 2];
        for (m1, m2, v) in self.modes() {
            let phase = s * (m1 as f64 * x + m2 as f64 * y);
            let (sin_p, cos_p) = phase.sin_cos();
            let k = [s * m1 as f64, s * m2 as f64];
            for comp in 0..2 {
                // real part of i k v exp(i phase)
                let re = -(v[comp].im * cos_p + v[comp].re * sin_p);
                out[comp][0] += k[0] * re;
                out[comp][1] += k[1] * re;
            }
        }
        out
    }

    /// Require the divergence-free flag; errors with the residual otherwise.
    pub fn ensure_divergence_free(&self) -> Result<()> {
        if self.divergence_free {
            Ok(())
        } else {
            Err(Error::NotDivergenceFree {
                residual: self.divergence_residual(),
            })
        }
    }

    pub(crate) fn mark_divergence_free(&mut self) {
        self.divergence_free = true;
    }
}

/// Remove from `v` the component parallel to the integer wavevector `m`.
fn project_mode(m1: i64, m2: i64, v: [Complex64; 2]) -> [Complex64; 2] {
    let n1 = m1 as f64;
    let n2 = m2 as f64;
    let norm_sq = n1 * n1 + n2 * n2;
    if norm_sq == 0.0 {
        return v;
    }
    let dot = (v[0] * n1 + v[1] * n2) / norm_sq;
    [v[0] - dot * n1, v[1] - dot * n2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn torus_2pi() -> TorusGeometry {
        TorusGeometry::new(2.0 * std::f64::consts::PI).unwrap()
    }

    /// (sin y, 0) on the 2 pi torus.
    fn shear(k_max: usize) -> SpectralVelocity {
        SpectralVelocity::from_modes(
            torus_2pi(),
            k_max,
            &[(0, 1, [Complex64::new(0.0, -0.5), Complex64::ZERO])],
        )
        .unwrap()
    }

    #[test]
    fn leray_kills_parallel_component() {
        let c = Complex64::new(0.7, -0.3);
        let field = SpectralVelocity::from_modes(
            torus_2pi(),
            4,
            &[(1, 0, [c, Complex64::ZERO])],
        )
        .unwrap();
        let projected = field.leray_project();
        let v = projected.coeff(1, 0);
        assert!(v[0].norm() < 1e-15 && v[1].norm() < 1e-15);
        assert!(projected.is_divergence_free());
    }

    #[test]
    fn leray_keeps_orthogonal_component() {
        let field = SpectralVelocity::from_modes(
            torus_2pi(),
            4,
            &[(1, 0, [Complex64::ZERO, Complex64::ONE])],
        )
        .unwrap();
        let projected = field.leray_project();
        assert_eq!(projected.coeff(1, 0), field.coeff(1, 0));
    }

    #[test]
    fn leray_idempotent_and_self_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let u = SpectralVelocity::random(torus_2pi(), 8, 1.0, 1.0, false, &mut rng);
            let v = SpectralVelocity::random(torus_2pi(), 8, 1.0, 1.0, false, &mut rng);
            let pu = u.leray_project();
            let ppu = pu.leray_project();
            for (m1, m2, a) in pu.modes() {
                let b = ppu.coeff(m1, m2);
                assert!((a[0] - b[0]).norm() < 1e-12);
                assert!((a[1] - b[1]).norm() < 1e-12);
            }
            let lhs = pu.inner_l2(&v);
            let rhs = u.inner_l2(&v.leray_project());
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn stokes_zero_is_zero() {
        let z = SpectralVelocity::zeros(torus_2pi(), 3);
        let az = z.stokes_apply();
        assert_eq!(az.coeff_norm(), 0.0);
    }

    #[test]
    fn stokes_unit_mode_is_identity_on_2pi_torus() {
        let field = SpectralVelocity::from_modes(
            torus_2pi(),
            2,
            &[(1, 0, [Complex64::ZERO, Complex64::new(0.3, 0.1)])],
        )
        .unwrap();
        let applied = field.stokes_apply();
        assert_eq!(applied.coeff(1, 0), field.coeff(1, 0));
    }

    #[test]
    fn poincare_chain_per_mode() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for side in [1.0, 2.0 * std::f64::consts::PI, 5.5] {
            let geom = TorusGeometry::new(side).unwrap();
            let c = geom.grad_by_stokes_constant();
            for _ in 0..10 {
                let u = SpectralVelocity::random(geom, 6, 1.5, 1.0, true, &mut rng);
                let l2 = u.inner_l2(&u);
                let grad = u.inner_h1(&u);
                let stokes = u.norm_stokes_l2().powi(2);
                assert!(l2 <= c * grad * (1.0 + 1e-12));
                assert!(grad <= c * stokes * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn shear_helmholtz_solve_matches_closed_form() {
        let u = shear(4);
        let c = 0.37;
        let solved = u.inverse_helmholtz(c);
        // single mode |m| = 1 on the 2 pi torus: division by (1 + c)
        let expect = u.scale(1.0 / (1.0 + c));
        for (m1, m2, a) in solved.modes() {
            let b = expect.coeff(m1, m2);
            assert!((a[0] - b[0]).norm() < 1e-15);
            assert!((a[1] - b[1]).norm() < 1e-15);
        }
    }

    #[test]
    fn pack_unpack_roundtrip_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = SpectralVelocity::random(torus_2pi(), 5, 0.8, 2.0, true, &mut rng);
        let packed = u.pack();
        assert_eq!(packed.len(), u.packed_len());
        let back = SpectralVelocity::unpack(u.geometry(), u.k_max(), &packed).unwrap();
        assert_eq!(u.coeff(3, -2), back.coeff(3, -2));
        assert_eq!(u.coeff(-3, 2), back.coeff(-3, 2));
        assert!(back.is_divergence_free());
    }

    #[test]
    fn mean_mode_rejected() {
        let mut u = SpectralVelocity::zeros(torus_2pi(), 2);
        assert!(u.set_mode(0, 0, [Complex64::ONE, Complex64::ZERO]).is_err());
    }

    #[test]
    fn truncate_then_pad_is_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = SpectralVelocity::random(torus_2pi(), 6, 1.0, 1.0, true, &mut rng);
        let t = u.truncate(3).pad(6);
        for (m1, m2, v) in t.modes() {
            if m1.abs() <= 3 && m2.abs() <= 3 {
                assert_eq!(v, u.coeff(m1, m2));
            } else {
                assert_eq!(v, [Complex64::ZERO; 2]);
            }
        }
    }
}
