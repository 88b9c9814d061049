//! Mesh-refinement behavior of the discrete projections and the stability
//! of the inf-sup constant.

use ns2d_core::fem::{
    bb_quotient, inf_sup_constant, project_div_free, project_pressure, FemSpacePair,
    SpectralOnMesh,
};
use ns2d_core::spectral::SpectralVelocity;
use ns2d_core::TorusGeometry;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn torus() -> TorusGeometry {
    TorusGeometry::new(2.0 * std::f64::consts::PI).unwrap()
}

/// Probe field with near-critical regularity: coefficient decay `|m|^-3`
/// puts the second derivatives at the edge of square-summability, which is
/// the regularity class the projection error bounds are stated for.
fn rough_div_free_probe(k_max: usize, seed: u64) -> SpectralVelocity {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpectralVelocity::random(torus(), k_max, 3.0, 1.0, true, &mut rng)
}

fn fit_slope(hs: &[f64], errs: &[f64]) -> f64 {
    let n = hs.len() as f64;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let var: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    cov / var
}

#[test]
fn div_free_projection_error_orders() {
    let z = rough_div_free_probe(32, 42);
    let mut hs = Vec::new();
    let mut l2_errs = Vec::new();
    let mut grad_errs = Vec::new();
    for m in [8usize, 16, 32] {
        let space = FemSpacePair::build(torus(), m).unwrap();
        let ops = space.assemble();
        let sampled = SpectralOnMesh::sample(&z, &space);
        let state = project_div_free(&space, &ops, &z, 1e-10).unwrap();
        hs.push(space.h());
        l2_errs.push(sampled.cross_norm_l2_sq(&space, &state).sqrt());
        grad_errs.push(sampled.cross_norm_grad_sq(&space, &state).sqrt());
    }
    let l2_slope = fit_slope(&hs, &l2_errs);
    let grad_slope = fit_slope(&hs, &grad_errs);
    println!("projection L2 errors {l2_errs:?} slope {l2_slope:.3}");
    println!("projection grad errors {grad_errs:?} slope {grad_slope:.3}");
    assert!(
        (1.7..=2.3).contains(&l2_slope),
        "L2 slope {l2_slope} outside [1.7, 2.3]"
    );
    assert!(
        (0.7..=1.3).contains(&grad_slope),
        "gradient slope {grad_slope} outside [0.7, 1.3]"
    );
}

#[test]
fn projection_fixes_its_range() {
    // project, then project again: the second application must return the
    // same coefficients up to solver tolerance
    let z = rough_div_free_probe(6, 7);
    let space = FemSpacePair::build(torus(), 8).unwrap();
    let ops = space.assemble();
    let first = project_div_free(&space, &ops, &z, 1e-11).unwrap();
    // build the load of the projected state by quadrature of its own values
    // (feed the FE field back through the saddle solve)
    let load = {
        let mut load = [vec![0.0; space.n_scalar()], vec![0.0; space.n_scalar()]];
        for tri in 0..space.n_triangles() {
            for q in 0..7 {
                let w = space.weight(tri, q);
                let u = [
                    space.eval_scalar(first.component(0), tri, q),
                    space.eval_scalar(first.component(1), tri, q),
                ];
                let dofs = *space.p2_dofs(tri);
                let vals = *space.p2_values_at(q);
                for a in 0..6 {
                    load[0][dofs[a]] += w * u[0] * vals[a];
                    load[1][dofs[a]] += w * u[1] * vals[a];
                }
            }
        }
        load
    };
    let problem = ns2d_core::fem::SaddleProblem::projection(&space, &ops, 1e-11).unwrap();
    let zeros = vec![0.0; space.n_pressure()];
    let second = problem.solve(None, &load[0], &load[1], &zeros).unwrap().state;
    let diff: f64 = first
        .velocity()
        .iter()
        .zip(second.velocity())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let scale: f64 = first.velocity().iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!(diff <= 1e-8 * scale.max(1.0), "projection moved by {diff}");
}

#[test]
fn pressure_projection_error_order() {
    // scalar probe at the edge of H1: decay exponent 2
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let probe = SpectralVelocity::random(torus(), 24, 2.0, 1.0, false, &mut rng);
    let f = |x: f64, y: f64| probe.eval_at(x, y)[0];
    let mut hs = Vec::new();
    let mut errs = Vec::new();
    for m in [8usize, 16, 32] {
        let space = FemSpacePair::build(torus(), m).unwrap();
        let ops = space.assemble();
        let p = project_pressure(&space, &ops, f, 1e-11).unwrap();
        // quadrature error against the smooth probe
        let mut err_sq = 0.0;
        for tri in 0..space.n_triangles() {
            for q in 0..7 {
                let w = space.weight(tri, q);
                let pt = space.quad_point(tri, q);
                let mut val = 0.0;
                let dofs = *space.p1_dofs(tri);
                let vals = *space.p1_values_at(q);
                for a in 0..3 {
                    val += p[dofs[a]] * vals[a];
                }
                let d = f(pt[0], pt[1]) - val;
                err_sq += w * d * d;
            }
        }
        hs.push(space.h());
        errs.push(err_sq.sqrt());
    }
    let slope = fit_slope(&hs, &errs);
    println!("pressure projection errors {errs:?} slope {slope:.3}");
    assert!(
        (0.7..=1.3).contains(&slope),
        "pressure slope {slope} outside [0.7, 1.3]"
    );
}

#[test]
fn inf_sup_constant_stable_across_meshes() {
    let mut constants = Vec::new();
    for m in [4usize, 8, 16] {
        let space = FemSpacePair::build(torus(), m).unwrap();
        let ops = space.assemble();
        let c = inf_sup_constant(&space, &ops).unwrap();
        assert!(c > 0.0);
        constants.push(c);
    }
    println!("inf-sup constants {constants:?}");
    let max = constants.iter().cloned().fold(f64::MIN, f64::max);
    let min = constants.iter().cloned().fold(f64::MAX, f64::min);
    assert!(
        (max - min) / max < 0.25,
        "inf-sup varies more than 25%: {constants:?}"
    );
}

#[test]
fn bb_quotient_bounded_below_by_infsup() {
    let space = FemSpacePair::build(torus(), 8).unwrap();
    let ops = space.assemble();
    let beta = inf_sup_constant(&space, &ops).unwrap();
    // p = sin(2 pi x / L) interpolated at pressure nodes, mean removed
    let p = project_pressure(&space, &ops, |x, _| x.sin(), 1e-11).unwrap();
    let q = bb_quotient(&space, &ops, &p).unwrap();
    assert!(q > 0.0);
    assert!(q >= beta - 1e-8, "quotient {q} below inf-sup constant {beta}");
}
