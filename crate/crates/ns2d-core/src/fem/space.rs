use crate::error::Result;
use crate::geometry::TorusGeometry;

use super::mesh::PeriodicMesh;
use super::quadrature::{degree5_rule, p1_values, p2_values, TriangleMap};

/// Taylor-Hood pair on a periodic mesh: P2 velocity components (vertex and
/// edge-midpoint dofs) over P1 pressures (vertex dofs), both mean zero.
#[derive(Debug, Clone)]
pub struct FemSpacePair {
    mesh: PeriodicMesh,
    /// Per triangle: six scalar P2 dof ids (3 vertices, 3 opposite-edge
    /// midpoints).
    tri_p2: Vec<[usize; 6]>,
    /// Per triangle: three P1 dof ids.
    tri_p1: Vec<[usize; 3]>,
    /// Per triangle: quadrature point physical coordinates.
    quad_points: Vec<[[f64; 2]; 7]>,
    /// Per triangle: weight times area per quadrature point.
    quad_weights: Vec<[f64; 7]>,
    /// Per triangle: physical P2 gradients per quadrature point.
    grads_p2: Vec<[[[f64; 2]; 6]; 7]>,
    /// Per triangle: physical P1 gradients (constant over the triangle).
    grads_p1: Vec<[[f64; 2]; 3]>,
    /// P2 values per quadrature point (triangle independent).
    vals_p2: [[f64; 6]; 7],
    vals_p1: [[f64; 3]; 7],
}

impl FemSpacePair {
    pub fn build(geometry: TorusGeometry, m: usize) -> Result<Self> {
        let mesh = PeriodicMesh::build(geometry, m)?;
        let rule = degree5_rule();
        let mut vals_p2 = [[0.0; 6]; 7];
        let mut vals_p1 = [[0.0; 3]; 7];
        for (q, (l, _)) in rule.iter().enumerate() {
            vals_p2[q] = p2_values(*l);
            vals_p1[q] = p1_values(*l);
        }
        let n_tri = mesh.n_triangles();
        let n_vertices = mesh.n_vertices();
        let mut tri_p2 = Vec::with_capacity(n_tri);
        let mut tri_p1 = Vec::with_capacity(n_tri);
        let mut quad_points = Vec::with_capacity(n_tri);
        let mut quad_weights = Vec::with_capacity(n_tri);
        let mut grads_p2 = Vec::with_capacity(n_tri);
        let mut grads_p1 = Vec::with_capacity(n_tri);
        for tri in mesh.triangles() {
            tri_p2.push([
                tri.vertices[0],
                tri.vertices[1],
                tri.vertices[2],
                n_vertices + tri.edges[0],
                n_vertices + tri.edges[1],
                n_vertices + tri.edges[2],
            ]);
            tri_p1.push(tri.vertices);
            let map = TriangleMap::new(&tri.corners);
            let mut pts = [[0.0; 2]; 7];
            let mut wts = [0.0; 7];
            let mut g2 = [[[0.0; 2]; 6]; 7];
            for (q, (l, w)) in rule.iter().enumerate() {
                pts[q] = map.physical_point(&tri.corners, *l);
                wts[q] = w * map.area;
                g2[q] = map.p2_physical_gradients(*l);
            }
            quad_points.push(pts);
            quad_weights.push(wts);
            grads_p2.push(g2);
            grads_p1.push(map.p1_physical_gradients());
        }
        Ok(Self {
            mesh,
            tri_p2,
            tri_p1,
            quad_points,
            quad_weights,
            grads_p2,
            grads_p1,
            vals_p2,
            vals_p1,
        })
    }

    pub fn mesh(&self) -> &PeriodicMesh {
        &self.mesh
    }

    pub fn geometry(&self) -> TorusGeometry {
        self.mesh.geometry()
    }

    pub fn h(&self) -> f64 {
        self.mesh.h()
    }

    /// Scalar P2 dofs per velocity component.
    pub fn n_scalar(&self) -> usize {
        self.mesh.n_vertices() + self.mesh.n_edges()
    }

    pub fn n_velocity(&self) -> usize {
        2 * self.n_scalar()
    }

    pub fn n_pressure(&self) -> usize {
        self.mesh.n_vertices()
    }

    pub fn n_triangles(&self) -> usize {
        self.mesh.n_triangles()
    }

    pub fn n_quad_points(&self) -> usize {
        7 * self.n_triangles()
    }

    pub fn p2_dofs(&self, tri: usize) -> &[usize; 6] {
        &self.tri_p2[tri]
    }

    pub fn p1_dofs(&self, tri: usize) -> &[usize; 3] {
        &self.tri_p1[tri]
    }

    pub fn p2_values_at(&self, q: usize) -> &[f64; 6] {
        &self.vals_p2[q]
    }

    pub fn p1_values_at(&self, q: usize) -> &[f64; 3] {
        &self.vals_p1[q]
    }

    pub fn p2_gradients(&self, tri: usize, q: usize) -> &[[f64; 2]; 6] {
        &self.grads_p2[tri][q]
    }

    pub fn p1_gradients(&self, tri: usize) -> &[[f64; 2]; 3] {
        &self.grads_p1[tri]
    }

    pub fn weight(&self, tri: usize, q: usize) -> f64 {
        self.quad_weights[tri][q]
    }

    pub fn quad_point(&self, tri: usize, q: usize) -> [f64; 2] {
        self.quad_points[tri][q]
    }

    /// Value of a scalar P2 coefficient vector at quadrature point `(tri, q)`.
    pub fn eval_scalar(&self, coeffs: &[f64], tri: usize, q: usize) -> f64 {
        let dofs = self.p2_dofs(tri);
        let vals = self.p2_values_at(q);
        (0..6).map(|a| coeffs[dofs[a]] * vals[a]).sum()
    }

    /// Gradient of a scalar P2 coefficient vector at `(tri, q)`.
    pub fn eval_scalar_gradient(&self, coeffs: &[f64], tri: usize, q: usize) -> [f64; 2] {
        let dofs = self.p2_dofs(tri);
        let grads = self.p2_gradients(tri, q);
        let mut out = [0.0; 2];
        for a in 0..6 {
            out[0] += coeffs[dofs[a]] * grads[a][0];
            out[1] += coeffs[dofs[a]] * grads[a][1];
        }
        out
    }

    /// Value of a P1 pressure vector at `(tri, q)`.
    pub fn eval_pressure(&self, coeffs: &[f64], tri: usize, q: usize) -> f64 {
        let dofs = self.p1_dofs(tri);
        let vals = self.p1_values_at(q);
        (0..3).map(|a| coeffs[dofs[a]] * vals[a]).sum()
    }
}
