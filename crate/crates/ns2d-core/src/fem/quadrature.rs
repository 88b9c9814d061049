//! Degree-5 triangle quadrature and the P2/P1 reference bases.

/// Seven-point rule, exact for polynomials of total degree 5. Barycentric
/// coordinates with weights normalized to sum to one; multiply by the
/// triangle area.
pub fn degree5_rule() -> [([f64; 3], f64); 7] {
    let sqrt15 = 15.0f64.sqrt();
    let w1 = (155.0 + sqrt15) / 1200.0;
    let a1 = (6.0 + sqrt15) / 21.0;
    let b1 = (9.0 - 2.0 * sqrt15) / 21.0;
    let w2 = (155.0 - sqrt15) / 1200.0;
    let a2 = (6.0 - sqrt15) / 21.0;
    let b2 = (9.0 + 2.0 * sqrt15) / 21.0;
    [
        ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 9.0 / 40.0),
        ([b1, a1, a1], w1),
        ([a1, b1, a1], w1),
        ([a1, a1, b1], w1),
        ([b2, a2, a2], w2),
        ([a2, b2, a2], w2),
        ([a2, a2, b2], w2),
    ]
}

/// P2 basis values at barycentric coordinates: three vertex functions, then
/// the edge functions opposite each vertex.
pub fn p2_values(l: [f64; 3]) -> [f64; 6] {
    [
        l[0] * (2.0 * l[0] - 1.0),
        l[1] * (2.0 * l[1] - 1.0),
        l[2] * (2.0 * l[2] - 1.0),
        4.0 * l[1] * l[2],
        4.0 * l[2] * l[0],
        4.0 * l[0] * l[1],
    ]
}

/// Gradients of the P2 basis with respect to barycentric coordinates; each
/// entry is `d phi / d lambda_k`.
pub fn p2_barycentric_gradients(l: [f64; 3]) -> [[f64; 3]; 6] {
    [
        [4.0 * l[0] - 1.0, 0.0, 0.0],
        [0.0, 4.0 * l[1] - 1.0, 0.0],
        [0.0, 0.0, 4.0 * l[2] - 1.0],
        [0.0, 4.0 * l[2], 4.0 * l[1]],
        [4.0 * l[2], 0.0, 4.0 * l[0]],
        [4.0 * l[1], 4.0 * l[0], 0.0],
    ]
}

pub fn p1_values(l: [f64; 3]) -> [f64; 3] {
    l
}

/// Physical gradients on a triangle with corners `c`: barycentric gradients
/// are chained with `grad lambda_k`, which is constant per triangle.
pub struct TriangleMap {
    pub grad_lambda: [[f64; 2]; 3],
    pub area: f64,
}

impl TriangleMap {
    pub fn new(corners: &[[f64; 2]; 3]) -> Self {
        let [c0, c1, c2] = corners;
        let det = (c1[0] - c0[0]) * (c2[1] - c0[1]) - (c2[0] - c0[0]) * (c1[1] - c0[1]);
        let area = det.abs() / 2.0;
        // grad lambda_k is orthogonal to the opposite edge
        let grad = |a: &[f64; 2], b: &[f64; 2]| {
            // lambda for the vertex opposite edge (a -> b)
            [(a[1] - b[1]) / det, (b[0] - a[0]) / det]
        };
        Self {
            grad_lambda: [grad(c1, c2), grad(c2, c0), grad(c0, c1)],
            area,
        }
    }

    pub fn physical_point(&self, corners: &[[f64; 2]; 3], l: [f64; 3]) -> [f64; 2] {
        [
            l[0] * corners[0][0] + l[1] * corners[1][0] + l[2] * corners[2][0],
            l[0] * corners[0][1] + l[1] * corners[1][1] + l[2] * corners[2][1],
        ]
    }

    pub fn p2_physical_gradients(&self, l: [f64; 3]) -> [[f64; 2]; 6] {
        let bary = p2_barycentric_gradients(l);
        let mut out = [[0.0; 2]; 6];
        for (i, g) in bary.iter().enumerate() {
            for k in 0..3 {
                out[i][0] += g[k] * self.grad_lambda[k][0];
                out[i][1] += g[k] * self.grad_lambda[k][1];
            }
        }
        out
    }

    pub fn p1_physical_gradients(&self) -> [[f64; 2]; 3] {
        self.grad_lambda
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_degree_five_exactly() {
        // reference triangle (0,0)-(1,0)-(0,1): integral of x^a y^b is
        // a! b! / (a + b + 2)!
        let corners = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let map = TriangleMap::new(&corners);
        let fact = |n: usize| (1..=n).product::<usize>() as f64;
        for a in 0..=5usize {
            for b in 0..=(5 - a) {
                let mut acc = 0.0;
                for (l, w) in degree5_rule() {
                    let p = map.physical_point(&corners, l);
                    acc += w * p[0].powi(a as i32) * p[1].powi(b as i32);
                }
                acc *= map.area;
                let exact = fact(a) * fact(b) / fact(a + b + 2);
                approx::assert_relative_eq!(acc, exact, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn p2_partition_of_unity_and_gradients() {
        let l = [0.3, 0.5, 0.2];
        let vals = p2_values(l);
        approx::assert_relative_eq!(vals.iter().sum::<f64>(), 1.0, max_relative = 1e-14);
        let grads = p2_barycentric_gradients(l);
        for k in 0..3 {
            let sum: f64 = grads.iter().map(|g| g[k]).sum();
            approx::assert_relative_eq!(sum, 1.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn triangle_map_area_and_gradients() {
        let corners = [[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]];
        let map = TriangleMap::new(&corners);
        approx::assert_relative_eq!(map.area, 2.0);
        // lambda_0 = 1 - (x + y)/2
        approx::assert_relative_eq!(map.grad_lambda[0][0], -0.5);
        approx::assert_relative_eq!(map.grad_lambda[0][1], -0.5);
    }
}
