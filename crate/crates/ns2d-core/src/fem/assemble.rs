use crate::linalg::CsrMatrix;

use super::space::FemSpacePair;
use super::state::FemState;

/// Sparse realizations of the bilinear forms on the Taylor-Hood pair.
///
/// Velocity operators are stored for one scalar component (both components
/// see the same operator); the divergence couplings `div_x`, `div_y` map a
/// velocity component to pressure test values, `B_c[i, j] = (d_c phi_j,
/// lambda_i)`.
#[derive(Debug, Clone)]
pub struct AssembledOperators {
    mass_scalar: CsrMatrix,
    stiffness_scalar: CsrMatrix,
    div_x: CsrMatrix,
    div_y: CsrMatrix,
    mass_pressure: CsrMatrix,
    stiffness_pressure: CsrMatrix,
    velocity_mean: Vec<f64>,
    pressure_mean: Vec<f64>,
}

impl AssembledOperators {
    pub fn mass_scalar(&self) -> &CsrMatrix {
        &self.mass_scalar
    }

    pub fn stiffness_scalar(&self) -> &CsrMatrix {
        &self.stiffness_scalar
    }

    pub fn div_x(&self) -> &CsrMatrix {
        &self.div_x
    }

    pub fn div_y(&self) -> &CsrMatrix {
        &self.div_y
    }

    pub fn div_component(&self, c: usize) -> &CsrMatrix {
        if c == 0 {
            &self.div_x
        } else {
            &self.div_y
        }
    }

    pub fn mass_pressure(&self) -> &CsrMatrix {
        &self.mass_pressure
    }

    pub fn stiffness_pressure(&self) -> &CsrMatrix {
        &self.stiffness_pressure
    }

    /// Integrals of the scalar P2 basis functions.
    pub fn velocity_mean(&self) -> &[f64] {
        &self.velocity_mean
    }

    /// Integrals of the P1 basis functions.
    pub fn pressure_mean(&self) -> &[f64] {
        &self.pressure_mean
    }
}

impl FemSpacePair {
    /// Assemble all state-independent operators with exact quadrature.
    pub fn assemble(&self) -> AssembledOperators {
        let n_s = self.n_scalar();
        let n_p = self.n_pressure();
        let n_tri = self.n_triangles();
        let mut mass = Vec::with_capacity(36 * n_tri);
        let mut stiff = Vec::with_capacity(36 * n_tri);
        let mut div_x = Vec::with_capacity(18 * n_tri);
        let mut div_y = Vec::with_capacity(18 * n_tri);
        let mut mass_p = Vec::with_capacity(9 * n_tri);
        let mut stiff_p = Vec::with_capacity(9 * n_tri);
        let mut vel_mean = vec![0.0; n_s];
        let mut press_mean = vec![0.0; n_p];
        for tri in 0..n_tri {
            let p2 = *self.p2_dofs(tri);
            let p1 = *self.p1_dofs(tri);
            let g1 = *self.p1_gradients(tri);
            for q in 0..7 {
                let w = self.weight(tri, q);
                let v2 = *self.p2_values_at(q);
                let v1 = *self.p1_values_at(q);
                let g2 = *self.p2_gradients(tri, q);
                for a in 0..6 {
                    vel_mean[p2[a]] += w * v2[a];
                    for b in 0..6 {
                        mass.push((p2[a], p2[b], w * v2[a] * v2[b]));
                        stiff.push((
                            p2[a],
                            p2[b],
                            w * (g2[a][0] * g2[b][0] + g2[a][1] * g2[b][1]),
                        ));
                    }
                }
                for i in 0..3 {
                    press_mean[p1[i]] += w * v1[i];
                    for b in 0..6 {
                        div_x.push((p1[i], p2[b], w * v1[i] * g2[b][0]));
                        div_y.push((p1[i], p2[b], w * v1[i] * g2[b][1]));
                    }
                    for j in 0..3 {
                        mass_p.push((p1[i], p1[j], w * v1[i] * v1[j]));
                        stiff_p.push((
                            p1[i],
                            p1[j],
                            w * (g1[i][0] * g1[j][0] + g1[i][1] * g1[j][1]),
                        ));
                    }
                }
            }
        }
        AssembledOperators {
            mass_scalar: CsrMatrix::from_triplets(n_s, n_s, mass),
            stiffness_scalar: CsrMatrix::from_triplets(n_s, n_s, stiff),
            div_x: CsrMatrix::from_triplets(n_p, n_s, div_x),
            div_y: CsrMatrix::from_triplets(n_p, n_s, div_y),
            mass_pressure: CsrMatrix::from_triplets(n_p, n_p, mass_p),
            stiffness_pressure: CsrMatrix::from_triplets(n_p, n_p, stiff_p),
            velocity_mean: vel_mean,
            pressure_mean: press_mean,
        }
    }

    /// Convection operator at frozen transport field `w`:
    /// `C[i, j] = ([w . grad] phi_j, phi_i) + 1/2 ([div w] phi_j, phi_i)`.
    ///
    /// The stabilization term makes the matrix skew symmetric under exact
    /// quadrature, so the form vanishes on equal test and trial fields.
    /// Acts per velocity component.
    pub fn convection(&self, w: &FemState) -> CsrMatrix {
        let n_s = self.n_scalar();
        let n_tri = self.n_triangles();
        let wx = w.component(0);
        let wy = w.component(1);
        let mut trips = Vec::with_capacity(36 * n_tri);
        for tri in 0..n_tri {
            let p2 = *self.p2_dofs(tri);
            for q in 0..7 {
                let wt = self.weight(tri, q);
                let v2 = *self.p2_values_at(q);
                let g2 = *self.p2_gradients(tri, q);
                let mut w_val = [0.0; 2];
                let mut w_div = 0.0;
                for a in 0..6 {
                    w_val[0] += wx[p2[a]] * v2[a];
                    w_val[1] += wy[p2[a]] * v2[a];
                    w_div += wx[p2[a]] * g2[a][0] + wy[p2[a]] * g2[a][1];
                }
                for i in 0..6 {
                    for j in 0..6 {
                        let transport = (w_val[0] * g2[j][0] + w_val[1] * g2[j][1]) * v2[i];
                        let stab = 0.5 * w_div * v2[j] * v2[i];
                        trips.push((p2[i], p2[j], wt * (transport + stab)));
                    }
                }
            }
        }
        CsrMatrix::from_triplets(n_s, n_s, trips)
    }
}
