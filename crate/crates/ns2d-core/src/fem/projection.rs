use crate::error::Result;
use crate::linalg::cg;
use crate::spectral::SpectralVelocity;

use super::assemble::AssembledOperators;
use super::eval::SpectralOnMesh;
use super::saddle::SaddleProblem;
use super::space::FemSpacePair;
use super::state::FemState;

/// Orthogonal L2 projection of a smooth field onto the discretely
/// divergence-free subspace, realized as a constrained mass-matrix saddle
/// solve. The returned state satisfies `(z - U, Phi) = 0` for all
/// discretely divergence-free `Phi` up to the solver tolerance.
pub fn project_div_free(
    space: &FemSpacePair,
    ops: &AssembledOperators,
    z: &SpectralVelocity,
    tol: f64,
) -> Result<FemState> {
    let sampled = SpectralOnMesh::sample(z, space);
    project_div_free_sampled(space, ops, &sampled, tol)
}

/// Same as [`project_div_free`] for a field already sampled on the mesh.
pub fn project_div_free_sampled(
    space: &FemSpacePair,
    ops: &AssembledOperators,
    sampled: &SpectralOnMesh,
    tol: f64,
) -> Result<FemState> {
    let load = sampled.load_vector(space);
    let problem = SaddleProblem::projection(space, ops, tol)?;
    let zeros = vec![0.0; space.n_pressure()];
    let solution = problem.solve(None, &load[0], &load[1], &zeros)?;
    Ok(solution.state)
}

/// Orthogonal L2 projection of a scalar function onto the P1 pressure
/// space with the mean removed; plain SPD mass solve.
pub fn project_pressure<F>(
    space: &FemSpacePair,
    ops: &AssembledOperators,
    f: F,
    tol: f64,
) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> f64,
{
    let n_p = space.n_pressure();
    let mut load = vec![0.0; n_p];
    for tri in 0..space.n_triangles() {
        let dofs = *space.p1_dofs(tri);
        for q in 0..7 {
            let w = space.weight(tri, q);
            let p = space.quad_point(tri, q);
            let val = f(p[0], p[1]);
            let vals = space.p1_values_at(q);
            for a in 0..3 {
                load[dofs[a]] += w * val * vals[a];
            }
        }
    }
    let diag = ops.mass_pressure().diagonal();
    let inv_diag: Vec<f64> = diag.iter().map(|d| 1.0 / d).collect();
    let (mut p, _) = cg(
        |x| ops.mass_pressure().matvec(x),
        |r| r.iter().zip(&inv_diag).map(|(v, d)| v * d).collect(),
        &load,
        tol,
        2000,
    )?;
    // remove the mean, integral p / |D|
    let mean: f64 = ops
        .pressure_mean()
        .iter()
        .zip(&p)
        .map(|(m, v)| m * v)
        .sum::<f64>()
        / space.geometry().area();
    for v in &mut p {
        *v -= mean;
    }
    Ok(p)
}
