use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::assemble::AssembledOperators;
use super::space::FemSpacePair;

/// Discrete inf-sup (LBB) constant of the velocity-pressure pair:
/// the smallest nonzero generalized singular value of the divergence
/// coupling measured in the `(|grad .|, |.|)` norm pair,
///
/// `beta^2 = min eig of  B S^+ B^T q = lambda M_p q`
///
/// over mean-zero pressures. Dense solve; intended for desk-scale meshes.
pub fn inf_sup_constant(space: &FemSpacePair, ops: &AssembledOperators) -> Result<f64> {
    let n_s = space.n_scalar();
    let n_p = space.n_pressure();
    // stiffness with the constant nullspace penalized per component
    let mut s = ops.stiffness_scalar().to_dense();
    let mv = ops.velocity_mean();
    let shift = s.trace() / n_s as f64;
    let area = space.geometry().area();
    for i in 0..n_s {
        for j in 0..n_s {
            s[(i, j)] += shift * mv[i] * mv[j] / (area * area);
        }
    }
    let s_chol = nalgebra::Cholesky::new(s)
        .ok_or_else(|| Error::EigenFailure("velocity stiffness factorization failed".into()))?;
    // G = B_x S^+ B_x^T + B_y S^+ B_y^T, built column by column
    let mut g = DMatrix::zeros(n_p, n_p);
    for c in 0..2 {
        let b = ops.div_component(c);
        let bt = b.to_dense().transpose(); // n_s x n_p
        for col in 0..n_p {
            let rhs = bt.column(col).clone_owned();
            let x = s_chol.solve(&rhs);
            // g[..][col] += B x
            let bx = b.matvec(x.as_slice());
            for row in 0..n_p {
                g[(row, col)] += bx[row];
            }
        }
    }
    // symmetric generalized eigenproblem via the pressure mass Cholesky
    let mp = ops.mass_pressure().to_dense();
    let mp_chol = nalgebra::Cholesky::new(mp)
        .ok_or_else(|| Error::EigenFailure("pressure mass factorization failed".into()))?;
    let l_inv_g = mp_chol.l().clone().solve_lower_triangular(&g).ok_or_else(|| {
        Error::EigenFailure("triangular solve failed in inf-sup reduction".into())
    })?;
    let reduced_t = mp_chol
        .l()
        .clone()
        .solve_lower_triangular(&l_inv_g.transpose())
        .ok_or_else(|| Error::EigenFailure("triangular solve failed in inf-sup reduction".into()))?;
    // symmetrize against roundoff
    let reduced = (&reduced_t + reduced_t.transpose()) * 0.5;
    let eigen = reduced.symmetric_eigen();
    let max_eig = eigen
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, &b| a.max(b.abs()));
    // drop the constant-pressure null eigenvalue, keep the smallest positive
    let mut min_pos = f64::INFINITY;
    for &lambda in eigen.eigenvalues.iter() {
        if lambda > 1e-10 * max_eig && lambda < min_pos {
            min_pos = lambda;
        }
    }
    if !min_pos.is_finite() {
        return Err(Error::EigenFailure(
            "no positive generalized singular value found".into(),
        ));
    }
    Ok(min_pos.sqrt())
}

/// Babuska-Brezzi quotient `sup_Phi (div Phi, p) / (|grad Phi| |p|)` for one
/// given pressure vector, by a single stiffness solve. Lower bound for the
/// inf-sup constant; used as an independent cross-check of the eigensolve.
pub fn bb_quotient(
    space: &FemSpacePair,
    ops: &AssembledOperators,
    pressure: &[f64],
) -> Result<f64> {
    let n_s = space.n_scalar();
    let mut s = ops.stiffness_scalar().to_dense();
    let mv = ops.velocity_mean();
    let shift = s.trace() / n_s as f64;
    let area = space.geometry().area();
    for i in 0..n_s {
        for j in 0..n_s {
            s[(i, j)] += shift * mv[i] * mv[j] / (area * area);
        }
    }
    let s_chol = nalgebra::Cholesky::new(s)
        .ok_or_else(|| Error::EigenFailure("velocity stiffness factorization failed".into()))?;
    let mut num = 0.0;
    for c in 0..2 {
        let mut bt_p = vec![0.0; n_s];
        ops.div_component(c)
            .matvec_transpose_add(1.0, pressure, &mut bt_p);
        let x = s_chol.solve(&nalgebra::DVector::from_column_slice(&bt_p));
        num += x
            .as_slice()
            .iter()
            .zip(&bt_p)
            .map(|(a, b)| a * b)
            .sum::<f64>();
    }
    let p_norm_sq: f64 = {
        let mp = ops.mass_pressure().matvec(pressure);
        pressure.iter().zip(&mp).map(|(a, b)| a * b).sum()
    };
    if p_norm_sq <= 0.0 {
        return Err(Error::InvalidParameter("zero pressure in quotient".into()));
    }
    Ok((num / p_norm_sq).max(0.0).sqrt())
}
