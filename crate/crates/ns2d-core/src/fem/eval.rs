use crate::spectral::SpectralVelocity;

use super::space::FemSpacePair;
use super::state::FemState;

/// A spectral field sampled at every quadrature point of a finite element
/// space: values, gradients, and the ingredients for cross norms and load
/// vectors.
///
/// Sampling a trigonometric polynomial is exact pointwise, so cross-space
/// integrals are as accurate as the element quadrature itself.
#[derive(Debug, Clone)]
pub struct SpectralOnMesh {
    /// `values[tri * 7 + q] = [u_x, u_y]`
    values: Vec<[f64; 2]>,
    /// `gradients[tri * 7 + q][comp][axis]`
    gradients: Vec<[[f64; 2]; 2]>,
}

impl SpectralOnMesh {
    pub fn sample(field: &SpectralVelocity, space: &FemSpacePair) -> Self {
        let n = space.n_triangles();
        let mut values = Vec::with_capacity(7 * n);
        let mut gradients = Vec::with_capacity(7 * n);
        for tri in 0..n {
            for q in 0..7 {
                let p = space.quad_point(tri, q);
                values.push(field.eval_at(p[0], p[1]));
                gradients.push(field.grad_at(p[0], p[1]));
            }
        }
        Self { values, gradients }
    }

    pub fn value(&self, tri: usize, q: usize) -> [f64; 2] {
        self.values[tri * 7 + q]
    }

    pub fn gradient(&self, tri: usize, q: usize) -> [[f64; 2]; 2] {
        self.gradients[tri * 7 + q]
    }

    /// Load vector pair `(integral z . phi_i)` for both components.
    pub fn load_vector(&self, space: &FemSpacePair) -> [Vec<f64>; 2] {
        let n_s = space.n_scalar();
        let mut out = [vec![0.0; n_s], vec![0.0; n_s]];
        for tri in 0..space.n_triangles() {
            let dofs = *space.p2_dofs(tri);
            for q in 0..7 {
                let w = space.weight(tri, q);
                let z = self.value(tri, q);
                let vals = space.p2_values_at(q);
                for a in 0..6 {
                    out[0][dofs[a]] += w * z[0] * vals[a];
                    out[1][dofs[a]] += w * z[1] * vals[a];
                }
            }
        }
        out
    }

    /// `integral |z - U|^2` by element quadrature.
    pub fn cross_norm_l2_sq(&self, space: &FemSpacePair, state: &FemState) -> f64 {
        let mut acc = 0.0;
        for tri in 0..space.n_triangles() {
            for q in 0..7 {
                let w = space.weight(tri, q);
                let z = self.value(tri, q);
                let u = [
                    space.eval_scalar(state.component(0), tri, q),
                    space.eval_scalar(state.component(1), tri, q),
                ];
                let dx = z[0] - u[0];
                let dy = z[1] - u[1];
                acc += w * (dx * dx + dy * dy);
            }
        }
        acc
    }

    /// `integral |grad z - grad U|^2` by element quadrature.
    pub fn cross_norm_grad_sq(&self, space: &FemSpacePair, state: &FemState) -> f64 {
        let mut acc = 0.0;
        for tri in 0..space.n_triangles() {
            for q in 0..7 {
                let w = space.weight(tri, q);
                let zg = self.gradient(tri, q);
                let ug = [
                    space.eval_scalar_gradient(state.component(0), tri, q),
                    space.eval_scalar_gradient(state.component(1), tri, q),
                ];
                for comp in 0..2 {
                    for axis in 0..2 {
                        let d = zg[comp][axis] - ug[comp][axis];
                        acc += w * d * d;
                    }
                }
            }
        }
        acc
    }

    /// `integral |z|^2` (quadrature of the sampled field itself).
    pub fn norm_l2_sq(&self, space: &FemSpacePair) -> f64 {
        let mut acc = 0.0;
        for tri in 0..space.n_triangles() {
            for q in 0..7 {
                let w = space.weight(tri, q);
                let z = self.value(tri, q);
                acc += w * (z[0] * z[0] + z[1] * z[1]);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TorusGeometry;
    use num_complex::Complex64;

    #[test]
    fn zero_fields_have_zero_cross_norm() {
        let geom = TorusGeometry::new(1.0).unwrap();
        let space = FemSpacePair::build(geom, 3).unwrap();
        let z = SpectralVelocity::zeros(geom, 2);
        let sampled = SpectralOnMesh::sample(&z, &space);
        let u = FemState::zeros(&space);
        assert_eq!(sampled.cross_norm_l2_sq(&space, &u), 0.0);
        assert_eq!(sampled.cross_norm_grad_sq(&space, &u), 0.0);
    }

    #[test]
    fn sampled_norm_approaches_spectral_norm_under_refinement() {
        let geom = TorusGeometry::new(2.0 * std::f64::consts::PI).unwrap();
        let z = SpectralVelocity::from_modes(
            geom,
            2,
            &[(0, 1, [Complex64::new(0.0, -0.5), Complex64::ZERO])],
        )
        .unwrap();
        let exact = z.inner_l2(&z);
        let mut errs = Vec::new();
        for m in [4usize, 8, 16] {
            let space = FemSpacePair::build(geom, m).unwrap();
            let sampled = SpectralOnMesh::sample(&z, &space);
            errs.push((sampled.norm_l2_sq(&space) - exact).abs());
        }
        assert!(errs[2] < errs[1] && errs[1] < errs[0]);
        assert!(errs[2] < 1e-6 * exact);
    }

    #[test]
    fn load_vector_pairs_with_constants_to_zero() {
        // mean-zero field: (z, const) = 0, so the load against the constant
        // function (all-ones coefficient vector) vanishes
        let geom = TorusGeometry::new(1.0).unwrap();
        let space = FemSpacePair::build(geom, 4).unwrap();
        let z = SpectralVelocity::from_modes(
            geom,
            2,
            &[(1, 0, [Complex64::ZERO, Complex64::new(0.3, 0.0)])],
        )
        .unwrap();
        let load = SpectralOnMesh::sample(&z, &space).load_vector(&space);
        for comp in 0..2 {
            let total: f64 = load[comp].iter().sum();
            assert!(total.abs() < 1e-10, "component {comp} total {total}");
        }
    }
}
