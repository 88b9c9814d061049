use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

use super::covariance::CovarianceSpec;

/// Derive a child seed from a master seed and a tag chain (sample index,
/// stream id). SplitMix64-style mixing; collisions across tags are as good
/// as random.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = master ^ 0x9e37_79b9_7f4a_7c15;
    for &tag in tags {
        state = state.wrapping_add(tag).wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        state = z ^ (z >> 31);
    }
    state
}

/// Brownian increments of the channel motions at dyadic fine resolution.
///
/// Stores the raw `d beta_j` per step with variance `T / N_fine`; covariance
/// weights are applied when an increment is materialized as a field or
/// measured in the noise-space norm.
#[derive(Debug, Clone, PartialEq)]
pub struct WienerPath {
    t_horizon: f64,
    n_fine: usize,
    channels: usize,
    /// `increments[l][j]`, step-major
    increments: Vec<Vec<f64>>,
}

impl WienerPath {
    /// Sample a fresh path; identical `(seed, channels, n_fine, t_horizon)`
    /// give bit-identical increments.
    pub fn sample(
        spec: &CovarianceSpec,
        seed: u64,
        n_fine: usize,
        t_horizon: f64,
    ) -> Result<Self> {
        if !n_fine.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "fine resolution {n_fine} must be a power of two"
            )));
        }
        if t_horizon <= 0.0 {
            return Err(Error::InvalidParameter("horizon must be positive".into()));
        }
        let channels = spec.channels();
        let std = (t_horizon / n_fine as f64).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let increments = (0..n_fine)
            .map(|_| {
                (0..channels)
                    .map(|_| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        std * z
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            t_horizon,
            n_fine,
            channels,
            increments,
        })
    }

    pub fn zeros(channels: usize, n_fine: usize, t_horizon: f64) -> Self {
        Self {
            t_horizon,
            n_fine,
            channels,
            increments: vec![vec![0.0; channels]; n_fine],
        }
    }

    pub fn n_steps(&self) -> usize {
        self.n_fine
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn t_horizon(&self) -> f64 {
        self.t_horizon
    }

    /// Channel increments of step `l` (0-based).
    pub fn increment(&self, l: usize) -> &[f64] {
        &self.increments[l]
    }

    /// Sum consecutive blocks of `factor` fine increments into one coarse
    /// step; the coarse path is the restriction of the same Brownian motion.
    ///
    /// Summation is pairwise (repeated halving), so composing coarsenings is
    /// bit-identical to coarsening in one go.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 || self.n_fine % factor != 0 || !factor.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "factor {factor} does not divide fine resolution {}",
                self.n_fine
            )));
        }
        let mut out = self.clone();
        let mut remaining = factor;
        while remaining > 1 {
            let n_coarse = out.n_fine / 2;
            let mut increments = vec![vec![0.0; out.channels]; n_coarse];
            for (l, coarse) in increments.iter_mut().enumerate() {
                for (j, c) in coarse.iter_mut().enumerate() {
                    *c = out.increments[2 * l][j] + out.increments[2 * l + 1][j];
                }
            }
            out = Self {
                t_horizon: out.t_horizon,
                n_fine: n_coarse,
                channels: out.channels,
                increments,
            };
            remaining /= 2;
        }
        Ok(out)
    }

    /// Coarsen to exactly `n_steps` steps.
    pub fn coarsen_to(&self, n_steps: usize) -> Result<Self> {
        if n_steps == 0 || self.n_fine % n_steps != 0 {
            return Err(Error::InvalidParameter(format!(
                "cannot coarsen {} fine steps to {n_steps}",
                self.n_fine
            )));
        }
        self.coarsen(self.n_fine / n_steps)
    }

    /// Order-independent checksum of the increment payload, for manifests.
    pub fn checksum(&self) -> u64 {
        let mut acc = 0xcbf2_9ce4_8422_2325u64;
        for step in &self.increments {
            for &v in step {
                acc ^= v.to_bits();
                acc = acc.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TorusGeometry;

    fn cov(channels: usize) -> CovarianceSpec {
        let geom = TorusGeometry::new(2.0 * std::f64::consts::PI).unwrap();
        CovarianceSpec::divergence_free(geom, 4, channels, 2.0, 1.0).unwrap()
    }

    #[test]
    fn identical_seeds_give_identical_paths() {
        let spec = cov(6);
        let a = WienerPath::sample(&spec, 99, 64, 1.0).unwrap();
        let b = WienerPath::sample(&spec, 99, 64, 1.0).unwrap();
        assert_eq!(a, b);
        let c = WienerPath::sample(&spec, 100, 64, 1.0).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn non_dyadic_resolution_rejected() {
        let spec = cov(4);
        assert!(WienerPath::sample(&spec, 1, 48, 1.0).is_err());
    }

    #[test]
    fn ito_isometry_within_monte_carlo_error() {
        let spec = cov(8);
        let n_fine = 16;
        let k = 1.0 / n_fine as f64;
        let mut acc = 0.0;
        let mut count = 0usize;
        for seed in 0..700u64 {
            let path = WienerPath::sample(&spec, derive_seed(5, &[seed]), n_fine, 1.0).unwrap();
            for l in 0..n_fine {
                acc += spec.increment_k_norm_sq(path.increment(l));
                count += 1;
            }
        }
        let mean = acc / count as f64;
        let expected = k * spec.trace();
        assert!(
            (mean - expected).abs() < 0.05 * expected,
            "mean {mean}, expected {expected}"
        );
    }

    #[test]
    fn coarsening_sums_blocks_exactly() {
        let spec = cov(3);
        let path = WienerPath::sample(&spec, 7, 32, 2.0).unwrap();
        let c2 = path.coarsen(2).unwrap();
        let c4 = path.coarsen(4).unwrap();
        let c2c2 = c2.coarsen(2).unwrap();
        assert_eq!(c2c2, c4);
        // factor n_fine collapses to the total path sum (up to reassociation)
        let total = path.coarsen(32).unwrap();
        assert_eq!(total.n_steps(), 1);
        for j in 0..3 {
            let direct: f64 = (0..32).map(|l| path.increment(l)[j]).sum();
            assert!((total.increment(0)[j] - direct).abs() < 1e-14);
        }
        // identity coarsening
        assert_eq!(path.coarsen(1).unwrap(), path);
    }

    #[test]
    fn gaussian_exponential_moment_matches_product_formula() {
        // E exp(beta |dW|_K^2) = prod_j (1 - 2 beta k q_j)^(-1/2)
        let spec = cov(5);
        let n_fine = 8;
        let k = 1.0 / n_fine as f64;
        let beta = 1.0; // 2 beta k TrQ = 0.25 < 1
        assert!(2.0 * beta * k * spec.trace() < 1.0);
        let mut acc = 0.0;
        let mut count = 0usize;
        for seed in 0..4000u64 {
            let path = WienerPath::sample(&spec, derive_seed(11, &[seed]), n_fine, 1.0).unwrap();
            for l in 0..n_fine {
                acc += (beta * spec.increment_k_norm_sq(path.increment(l))).exp();
                count += 1;
            }
        }
        let mean = acc / count as f64;
        let analytic: f64 = spec
            .eigenvalues()
            .iter()
            .map(|&q| (1.0 - 2.0 * beta * k * q).powf(-0.5))
            .product();
        assert!(
            (mean - analytic).abs() < 0.1 * analytic,
            "mean {mean}, analytic {analytic}"
        );
    }

    #[test]
    fn derive_seed_spreads_tags() {
        let a = derive_seed(1, &[0]);
        let b = derive_seed(1, &[1]);
        let c = derive_seed(2, &[0]);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(derive_seed(1, &[0]), a);
    }
}
