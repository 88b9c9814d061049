use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::SpectralVelocity;

use super::covariance::{basis_pair, CovarianceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiffusionKind {
    /// State-independent: `G(u) e_j = phi_j`.
    Additive,
    /// Diagonal gains `G(u) e_j = s(|u|_L2) phi_j` with the bounded globally
    /// Lipschitz saturation `s(t) = t / (1 + t)`.
    DiagonalMultiplicative,
}

/// Diffusion coefficient acting channel-wise on the covariance eigenbasis.
///
/// Output channel fields are mutually orthogonal single-mode fields, so the
/// operator norms from the noise space are exactly `max_j` of the per-channel
/// norms; the declared growth and Lipschitz constants are computed from that
/// structure rather than guessed.
#[derive(Debug, Clone)]
pub struct DiffusionSpec {
    kind: DiffusionKind,
    fields: Vec<SpectralVelocity>,
    field_l2: Vec<f64>,
    field_v: Vec<f64>,
    k0: f64,
    k1: f64,
    l1: f64,
}

impl DiffusionSpec {
    /// Additive coefficient with channel fields `scale * e_j / |e_j|_V`,
    /// giving the tight growth constant `K0 = scale^2` in the W12 norm.
    pub fn additive(cov: &CovarianceSpec, scale: f64) -> Result<Self> {
        let fields = (0..cov.channels())
            .map(|j| {
                let e = cov.eigenfield(j);
                e.scale(scale / e.norm_v_sq().sqrt())
            })
            .collect();
        Self::build(DiffusionKind::Additive, fields, scale)
    }

    /// Additive coefficient acting as `scale` times the identity on the
    /// covariance eigenbasis.
    pub fn additive_identity(cov: &CovarianceSpec, scale: f64) -> Result<Self> {
        let fields = (0..cov.channels())
            .map(|j| cov.eigenfield(j).scale(scale))
            .collect();
        Self::build(DiffusionKind::Additive, fields, scale)
    }

    /// Diagonal multiplicative coefficient. With `div_free_range` the output
    /// channels are the (V-normalized) covariance eigenfields themselves and
    /// the coefficient satisfies the divergence-free variant of the growth
    /// conditions; otherwise the channels are gradient-direction modes, which
    /// exercises the general (non-divergence-free) setting.
    pub fn diagonal_multiplicative(
        cov: &CovarianceSpec,
        scale: f64,
        div_free_range: bool,
    ) -> Result<Self> {
        let fields: Vec<SpectralVelocity> = if div_free_range {
            (0..cov.channels())
                .map(|j| {
                    let e = cov.eigenfield(j);
                    e.scale(scale / e.norm_v_sq().sqrt())
                })
                .collect()
        } else {
            // same wavevector enumeration as the covariance, but with the
            // gradient-type (parallel) direction per mode
            let mut out = Vec::with_capacity(cov.channels());
            let mut j = 0;
            while out.len() < cov.channels() {
                let e = cov.eigenfield(j);
                let (m1, m2, _) = e.modes().next().expect("eigenfield has one mode");
                for f in basis_pair(cov.geometry(), cov.k_max(), (m1, m2), true) {
                    if out.len() < cov.channels() {
                        out.push(f.scale(scale / f.norm_v_sq().sqrt()));
                    }
                }
                j += 2;
            }
            out
        };
        Self::build(DiffusionKind::DiagonalMultiplicative, fields, scale)
    }

    fn build(kind: DiffusionKind, fields: Vec<SpectralVelocity>, scale: f64) -> Result<Self> {
        if scale <= 0.0 {
            return Err(Error::InvalidParameter(
                "diffusion scale must be positive".into(),
            ));
        }
        let field_l2: Vec<f64> = fields.iter().map(|f| f.norm_l2()).collect();
        let field_v: Vec<f64> = fields.iter().map(|f| f.norm_v_sq().sqrt()).collect();
        let max_v_sq = field_v.iter().fold(0.0f64, |a, &b| a.max(b * b));
        let (k0, k1, l1) = match kind {
            // saturation gain s(t) = t/(1+t): s <= 1, s <= t, Lip(s) = 1
            DiffusionKind::DiagonalMultiplicative => (max_v_sq, max_v_sq, max_v_sq),
            DiffusionKind::Additive => (max_v_sq, 0.0, 0.0),
        };
        Ok(Self {
            kind,
            fields,
            field_l2,
            field_v,
            k0,
            k1,
            l1,
        })
    }

    pub fn kind(&self) -> DiffusionKind {
        self.kind
    }

    pub fn is_additive(&self) -> bool {
        self.kind == DiffusionKind::Additive
    }

    pub fn channels(&self) -> usize {
        self.fields.len()
    }

    /// Declared growth constant (state-independent part).
    pub fn k0(&self) -> f64 {
        self.k0
    }

    /// Declared growth constant (factor of `|u|^2`).
    pub fn k1(&self) -> f64 {
        self.k1
    }

    /// Declared Lipschitz constant.
    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn output_field(&self, j: usize) -> &SpectralVelocity {
        &self.fields[j]
    }

    /// Scalar gain applied to every channel at a given input L2 norm.
    pub fn gain(&self, input_l2: f64) -> f64 {
        match self.kind {
            DiffusionKind::Additive => 1.0,
            DiffusionKind::DiagonalMultiplicative => input_l2 / (1.0 + input_l2),
        }
    }

    /// Operator norm squared from the noise space into L2 at a given input.
    pub fn op_norm_sq_l2(&self, input_l2: f64) -> f64 {
        let g = self.gain(input_l2);
        self.field_l2.iter().fold(0.0f64, |a, &b| a.max(g * g * b * b))
    }

    /// Operator norm squared from the noise space into W12.
    pub fn op_norm_sq_v(&self, input_l2: f64) -> f64 {
        let g = self.gain(input_l2);
        self.field_v.iter().fold(0.0f64, |a, &b| a.max(g * g * b * b))
    }

    /// `G(u) (sum_j sqrt(q_j) d_beta_j e_j)` as a spectral field at cutoff
    /// `k_out`. Only the L2 norm of `u` enters through the diagonal gain.
    pub fn apply(
        &self,
        cov: &CovarianceSpec,
        input_l2: f64,
        delta_beta: &[f64],
        k_out: usize,
    ) -> Result<SpectralVelocity> {
        if delta_beta.len() != self.channels() || cov.channels() != self.channels() {
            return Err(Error::InvalidParameter(format!(
                "channel mismatch: increment {}, diffusion {}, covariance {}",
                delta_beta.len(),
                self.channels(),
                cov.channels()
            )));
        }
        let gain = self.gain(input_l2);
        let mut out = SpectralVelocity::zeros(cov.geometry(), cov.k_max());
        for (j, &db) in delta_beta.iter().enumerate() {
            let w = cov.eigenvalue(j).sqrt() * db * gain;
            if w != 0.0 {
                out.axpy(w, &self.fields[j])?;
            }
        }
        Ok(out.pad(k_out))
    }

    /// Worst divergence residual over the output channels; zero for the
    /// divergence-free variants.
    pub fn range_divergence_residual(&self) -> f64 {
        self.fields
            .iter()
            .map(|f| f.divergence_residual())
            .fold(0.0, f64::max)
    }

    /// Sample random inputs and report the maximal empirical quotients of the
    /// growth and Lipschitz conditions against the declared constants.
    /// Violations are reported, never thrown.
    pub fn check_conditions<R: Rng + ?Sized>(
        &self,
        cov: &CovarianceSpec,
        n_samples: usize,
        rng: &mut R,
    ) -> GConditionsReport {
        let geom = cov.geometry();
        let mut growth_l2_ratio: f64 = 0.0;
        let mut growth_v_ratio: f64 = 0.0;
        let mut lipschitz_ratio: f64 = 0.0;
        let mut k1_quotient: f64 = 0.0;
        let mut l1_quotient: f64 = 0.0;
        let base_l2 = self.op_norm_sq_l2(0.0);
        let max_field_v_sq = self.field_v.iter().fold(0.0f64, |a, &b| a.max(b * b));
        for _ in 0..n_samples {
            let u = SpectralVelocity::random(geom, cov.k_max(), 1.0, 2.0, true, rng);
            let v = SpectralVelocity::random(geom, cov.k_max(), 1.0, 2.0, true, rng);
            let (ul2, vl2) = (u.norm_l2(), v.norm_l2());
            let gu_l2 = self.op_norm_sq_l2(ul2);
            let gu_v = self.op_norm_sq_v(ul2);
            growth_l2_ratio = growth_l2_ratio.max(gu_l2 / (self.k0 + self.k1 * ul2 * ul2));
            let uv2 = u.norm_v_sq();
            growth_v_ratio = growth_v_ratio.max(gu_v / (self.k0 + self.k1 * uv2));
            if ul2 > 0.0 {
                k1_quotient = k1_quotient.max((gu_l2 - base_l2).max(0.0) / (ul2 * ul2));
            }
            let gain_gap = (self.gain(ul2) - self.gain(vl2)).abs();
            let diff_sq = gain_gap * gain_gap * max_field_v_sq;
            let dist_sq = u.sub(&v).map(|d| d.inner_l2(&d)).unwrap_or(0.0);
            if dist_sq > 0.0 {
                l1_quotient = l1_quotient.max(diff_sq / dist_sq);
                if self.l1 > 0.0 {
                    lipschitz_ratio = lipschitz_ratio.max(diff_sq / (self.l1 * dist_sq));
                }
            }
        }
        GConditionsReport {
            growth_l2_ratio,
            growth_v_ratio,
            lipschitz_ratio,
            k1_quotient,
            l1_quotient,
            range_divergence_residual: self.range_divergence_residual(),
            samples: n_samples,
        }
    }
}

/// Empirical quotients of the growth and Lipschitz conditions; ratios are
/// against the declared constants, so anything above one is a violation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GConditionsReport {
    pub growth_l2_ratio: f64,
    pub growth_v_ratio: f64,
    pub lipschitz_ratio: f64,
    pub k1_quotient: f64,
    pub l1_quotient: f64,
    pub range_divergence_residual: f64,
    pub samples: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TorusGeometry;
    use crate::noise::path::derive_seed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cov(channels: usize) -> CovarianceSpec {
        let geom = TorusGeometry::new(2.0 * std::f64::consts::PI).unwrap();
        CovarianceSpec::divergence_free(geom, 4, channels, 2.0, 1.0).unwrap()
    }

    #[test]
    fn additive_identity_passes_single_channel_through() {
        let cov = cov(1);
        let g = DiffusionSpec::additive_identity(&cov, 1.0).unwrap();
        let delta = 0.37;
        let out = g.apply(&cov, 123.0, &[delta], 4).unwrap();
        let expect = cov.eigenfield(0).scale(cov.eigenvalue(0).sqrt() * delta);
        let gap = out.sub(&expect).unwrap();
        assert!(gap.inner_l2(&gap).sqrt() < 1e-14);
    }

    #[test]
    fn multiplicative_gain_vanishes_at_zero_state() {
        let cov = cov(4);
        let g = DiffusionSpec::diagonal_multiplicative(&cov, 1.0, true).unwrap();
        let out = g.apply(&cov, 0.0, &[0.5, 0.5, 0.5, 0.5], 4).unwrap();
        assert_eq!(out.coeff_norm(), 0.0);
    }

    #[test]
    fn lipschitz_bound_on_applied_increments() {
        let cov = cov(6);
        let g = DiffusionSpec::diagonal_multiplicative(&cov, 0.8, true).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let geom = cov.geometry();
        for i in 0..100u64 {
            let path = WienerLike::sample(&cov, derive_seed(3, &[i]));
            let u = SpectralVelocity::random(geom, 4, 1.0, 1.5, true, &mut rng);
            let v = SpectralVelocity::random(geom, 4, 1.0, 1.5, true, &mut rng);
            let gu = g.apply(&cov, u.norm_l2(), &path.0, 4).unwrap();
            let gv = g.apply(&cov, v.norm_l2(), &path.0, 4).unwrap();
            let lhs = gu.sub(&gv).unwrap().norm_l2();
            let dw_k = cov.increment_k_norm_sq(&path.0).sqrt();
            let rhs = g.l1().sqrt() * u.sub(&v).unwrap().norm_l2() * dw_k;
            assert!(lhs <= rhs * (1.0 + 1e-12), "lhs {lhs} rhs {rhs}");
        }
    }

    struct WienerLike(Vec<f64>);
    impl WienerLike {
        fn sample(cov: &CovarianceSpec, seed: u64) -> Self {
            use rand_distr::{Distribution, StandardNormal};
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Self(
                (0..cov.channels())
                    .map(|_| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        0.25 * z
                    })
                    .collect(),
            )
        }
    }

    #[test]
    fn additive_report_has_zero_state_dependence() {
        let cov = cov(5);
        let g = DiffusionSpec::additive(&cov, 1.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let report = g.check_conditions(&cov, 50, &mut rng);
        assert_eq!(report.k1_quotient, 0.0);
        assert_eq!(report.l1_quotient, 0.0);
        assert!(report.growth_l2_ratio <= 1.0 + 1e-12);
        assert!(report.growth_v_ratio <= 1.0 + 1e-12);
        assert!(report.range_divergence_residual < 1e-14);
    }

    #[test]
    fn declared_constants_dominate_empirical_quotients() {
        let cov = cov(6);
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for div_free in [true, false] {
            let g = DiffusionSpec::diagonal_multiplicative(&cov, 0.9, div_free).unwrap();
            let report = g.check_conditions(&cov, 100, &mut rng);
            assert!(report.growth_l2_ratio <= 1.0 + 1e-12);
            assert!(report.growth_v_ratio <= 1.0 + 1e-12);
            assert!(report.lipschitz_ratio <= 1.0 + 1e-12);
            if div_free {
                assert!(report.range_divergence_residual < 1e-14);
            } else {
                assert!(report.range_divergence_residual > 1e-3);
            }
        }
    }

    #[test]
    fn channel_mismatch_rejected() {
        let cov = cov(4);
        let g = DiffusionSpec::additive(&cov, 1.0).unwrap();
        assert!(g.apply(&cov, 0.0, &[0.1; 3], 4).is_err());
    }
}
