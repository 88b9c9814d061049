use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;

/// Uniform periodic triangulation: `m x m` squares, each split into two
/// triangles along the lower-left to upper-right diagonal.
///
/// Identified counts are `m^2` vertices, `3 m^2` edges and `2 m^2`
/// triangles, so the Euler characteristic of the torus is zero. The largest
/// triangle diameter is `h = sqrt(2) L / m`.
#[derive(Debug, Clone)]
pub struct PeriodicMesh {
    geometry: TorusGeometry,
    m: usize,
}

/// One triangle: vertex classes, edge classes and unwrapped corner
/// coordinates (corners on the far boundary keep coordinate `L`, which is
/// consistent for periodic integrands).
#[derive(Debug, Clone, Copy)]
pub struct Triangle {
    pub vertices: [usize; 3],
    /// Edge classes ordered opposite the matching vertex.
    pub edges: [usize; 3],
    pub corners: [[f64; 2]; 3],
    /// False for the lower-right triangle of a square, true for the upper-left.
    pub upper: bool,
}

impl PeriodicMesh {
    pub fn build(geometry: TorusGeometry, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!(
                "mesh subdivision must be at least 2, got {m}"
            )));
        }
        Ok(Self { geometry, m })
    }

    pub fn geometry(&self) -> TorusGeometry {
        self.geometry
    }

    pub fn subdivision(&self) -> usize {
        self.m
    }

    pub fn n_vertices(&self) -> usize {
        self.m * self.m
    }

    pub fn n_edges(&self) -> usize {
        3 * self.m * self.m
    }

    pub fn n_triangles(&self) -> usize {
        2 * self.m * self.m
    }

    /// Maximal triangle diameter.
    pub fn h(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.geometry.side() / self.m as f64
    }

    fn vertex_class(&self, i: usize, j: usize) -> usize {
        (i % self.m) + self.m * (j % self.m)
    }

    fn square_class(&self, i: usize, j: usize) -> usize {
        (i % self.m) + self.m * (j % self.m)
    }

    /// Edge classes: 3 per square, enumerated (horizontal bottom, vertical
    /// left, diagonal).
    fn edge_h(&self, i: usize, j: usize) -> usize {
        3 * self.square_class(i, j)
    }

    fn edge_v(&self, i: usize, j: usize) -> usize {
        3 * self.square_class(i, j) + 1
    }

    fn edge_d(&self, i: usize, j: usize) -> usize {
        3 * self.square_class(i, j) + 2
    }

    /// Triangle `t` of `2 m^2`; `t = 2 (i + m j) + upper`.
    pub fn triangle(&self, t: usize) -> Triangle {
        let m = self.m;
        debug_assert!(t < self.n_triangles());
        let upper = t % 2 == 1;
        let sq = t / 2;
        let i = sq % m;
        let j = sq / m;
        let d = self.geometry.side() / m as f64;
        let at = |a: usize, b: usize| [a as f64 * d, b as f64 * d];
        if !upper {
            // (i,j) -> (i+1,j) -> (i+1,j+1)
            Triangle {
                vertices: [
                    self.vertex_class(i, j),
                    self.vertex_class(i + 1, j),
                    self.vertex_class(i + 1, j + 1),
                ],
                edges: [
                    self.edge_v(i + 1, j), // opposite v0
                    self.edge_d(i, j),     // opposite v1
                    self.edge_h(i, j),     // opposite v2
                ],
                corners: [at(i, j), at(i + 1, j), at(i + 1, j + 1)],
                upper,
            }
        } else {
            // (i,j) -> (i+1,j+1) -> (i,j+1)
            Triangle {
                vertices: [
                    self.vertex_class(i, j),
                    self.vertex_class(i + 1, j + 1),
                    self.vertex_class(i, j + 1),
                ],
                edges: [
                    self.edge_h(i, j + 1), // opposite v0
                    self.edge_v(i, j),     // opposite v1
                    self.edge_d(i, j),     // opposite v2
                ],
                corners: [at(i, j), at(i + 1, j + 1), at(i, j + 1)],
                upper,
            }
        }
    }

    pub fn triangles(&self) -> impl Iterator<Item = Triangle> + '_ {
        (0..self.n_triangles()).map(|t| self.triangle(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_euler_characteristic() {
        let geom = TorusGeometry::new(1.0).unwrap();
        for m in [2usize, 3, 8] {
            let mesh = PeriodicMesh::build(geom, m).unwrap();
            assert_eq!(mesh.n_triangles(), 2 * m * m);
            assert_eq!(mesh.n_vertices(), m * m);
            assert_eq!(mesh.n_edges(), 3 * m * m);
            let euler = mesh.n_vertices() as i64 - mesh.n_edges() as i64
                + mesh.n_triangles() as i64;
            assert_eq!(euler, 0);
        }
    }

    #[test]
    fn m2_has_eight_triangles_and_four_vertex_classes() {
        let geom = TorusGeometry::new(1.0).unwrap();
        let mesh = PeriodicMesh::build(geom, 2).unwrap();
        assert_eq!(mesh.n_triangles(), 8);
        assert_eq!(mesh.n_vertices(), 4);
    }

    #[test]
    fn mesh_size_closed_form_and_halving() {
        let geom = TorusGeometry::new(1.0).unwrap();
        let mesh4 = PeriodicMesh::build(geom, 4).unwrap();
        approx::assert_relative_eq!(mesh4.h(), std::f64::consts::SQRT_2 / 4.0);
        let mesh8 = PeriodicMesh::build(geom, 8).unwrap();
        assert_eq!(mesh8.h(), mesh4.h() / 2.0);
    }

    #[test]
    fn too_coarse_rejected() {
        let geom = TorusGeometry::new(1.0).unwrap();
        assert!(PeriodicMesh::build(geom, 1).is_err());
    }

    #[test]
    fn every_edge_class_is_shared_by_exactly_two_triangles() {
        let geom = TorusGeometry::new(1.0).unwrap();
        let mesh = PeriodicMesh::build(geom, 3).unwrap();
        let mut counts = vec![0usize; mesh.n_edges()];
        for tri in mesh.triangles() {
            for e in tri.edges {
                counts[e] += 1;
            }
        }
        assert!(counts.iter().all(|&c| c == 2));
    }

    #[test]
    fn corner_coordinates_are_consistent_with_edge_identification() {
        // shared edges must carry the same physical midpoint modulo L
        let geom = TorusGeometry::new(2.0).unwrap();
        let mesh = PeriodicMesh::build(geom, 4).unwrap();
        let l = geom.side();
        let mut midpoint: Vec<Option<[f64; 2]>> = vec![None; mesh.n_edges()];
        for tri in mesh.triangles() {
            for (k, &e) in tri.edges.iter().enumerate() {
                let a = tri.corners[(k + 1) % 3];
                let b = tri.corners[(k + 2) % 3];
                let mid = [
                    ((a[0] + b[0]) / 2.0).rem_euclid(l),
                    ((a[1] + b[1]) / 2.0).rem_euclid(l),
                ];
                match midpoint[e] {
                    None => midpoint[e] = Some(mid),
                    Some(prev) => {
                        for c in 0..2 {
                            let diff = (prev[c] - mid[c]).abs();
                            let wrapped = diff.min((diff - l).abs());
                            assert!(wrapped < 1e-12, "edge {e}: {prev:?} vs {mid:?}");
                        }
                    }
                }
            }
        }
    }
}
