//! Conjugate gradients and restarted GMRES over plain `f64` slices.
//!
//! Operators and preconditioners are closures so callers can compose sparse
//! matrices, dense factorizations and rank-one corrections without a trait
//! hierarchy.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct IterStats {
    pub iterations: usize,
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Preconditioned conjugate gradients for symmetric positive definite
/// operators. `precond` applies an approximate inverse (pass the inverse
/// diagonal for Jacobi).
pub fn cg<A, M>(
    apply: A,
    precond: M,
    b: &[f64],
    tol_rel: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, IterStats)>
where
    A: Fn(&[f64]) -> Vec<f64>,
    M: Fn(&[f64]) -> Vec<f64>,
{
    let n = b.len();
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok((
            vec![0.0; n],
            IterStats {
                iterations: 0,
                residual: 0.0,
            },
        ));
    }
    let target = tol_rel * b_norm;
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z = precond(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for it in 0..max_iter {
        let ap = apply(&p);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::SolverFailure {
                iterations: it,
                residual: norm(&r),
                target,
            });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let res = norm(&r);
        if res <= target {
            return Ok((
                x,
                IterStats {
                    iterations: it + 1,
                    residual: res,
                },
            ));
        }
        z = precond(&r);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::SolverFailure {
        iterations: max_iter,
        residual: norm(&r),
        target,
    })
}

/// Right-preconditioned restarted GMRES.
///
/// Solves `A x = b` with `x = M(y)`; the Arnoldi residual equals the true
/// residual, so the returned stats are meaningful for the original system.
pub fn gmres<A, M>(
    apply: A,
    precond: M,
    b: &[f64],
    tol_rel: f64,
    restart: usize,
    max_restarts: usize,
) -> Result<(Vec<f64>, IterStats)>
where
    A: Fn(&[f64]) -> Vec<f64>,
    M: Fn(&[f64]) -> Vec<f64>,
{
    let n = b.len();
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok((
            vec![0.0; n],
            IterStats {
                iterations: 0,
                residual: 0.0,
            },
        ));
    }
    let target = tol_rel * b_norm;
    let mut x = vec![0.0; n];
    let mut total_iters = 0usize;
    let mut last_res = b_norm;

    for _cycle in 0..=max_restarts {
        // r = b - A x
        let ax = apply(&x);
        let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm(&r);
        last_res = beta;
        if beta <= target {
            return Ok((
                x,
                IterStats {
                    iterations: total_iters,
                    residual: beta,
                },
            ));
        }
        for v in &mut r {
            *v /= beta;
        }
        let m = restart.min(n);
        let mut basis: Vec<Vec<f64>> = vec![r];
        let mut h = vec![vec![0.0f64; 0]; 0]; // h[j] has length j + 2
        let mut cs: Vec<f64> = Vec::new();
        let mut sn: Vec<f64> = Vec::new();
        let mut g = vec![beta];
        let mut converged_at = None;

        for j in 0..m {
            total_iters += 1;
            let w0 = precond(&basis[j]);
            let mut w = apply(&w0);
            let mut hj = vec![0.0; j + 2];
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(&w, v);
                hj[i] = hij;
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= hij * vk;
                }
            }
            let wn = norm(&w);
            hj[j + 1] = wn;
            // apply accumulated Givens rotations
            for i in 0..j {
                let t = cs[i] * hj[i] + sn[i] * hj[i + 1];
                hj[i + 1] = -sn[i] * hj[i] + cs[i] * hj[i + 1];
                hj[i] = t;
            }
            let denom = (hj[j] * hj[j] + hj[j + 1] * hj[j + 1]).sqrt();
            let (c, s) = if denom == 0.0 {
                (1.0, 0.0)
            } else {
                (hj[j] / denom, hj[j + 1] / denom)
            };
            cs.push(c);
            sn.push(s);
            hj[j] = c * hj[j] + s * hj[j + 1];
            hj[j + 1] = 0.0;
            g.push(-s * g[j]);
            g[j] *= c;
            h.push(hj);
            let res = g[j + 1].abs();
            last_res = res;
            if res <= target || wn == 0.0 {
                converged_at = Some(j + 1);
                break;
            }
            for v in &mut w {
                *v /= wn;
            }
            basis.push(w);
        }

        // back substitution for the least squares coefficients
        let k = converged_at.unwrap_or_else(|| basis.len().min(m));
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut acc = g[i];
            for jj in (i + 1)..k {
                acc -= h[jj][i] * y[jj];
            }
            y[i] = acc / h[i][i];
        }
        let mut update = vec![0.0; n];
        for (i, yi) in y.iter().enumerate() {
            for (u, v) in update.iter_mut().zip(&basis[i]) {
                *u += yi * v;
            }
        }
        let update = precond(&update);
        for (xi, ui) in x.iter_mut().zip(&update) {
            *xi += ui;
        }
        if converged_at.is_some() {
            let ax = apply(&x);
            let res = b
                .iter()
                .zip(&ax)
                .map(|(bi, ai)| (bi - ai) * (bi - ai))
                .sum::<f64>()
                .sqrt();
            return Ok((
                x,
                IterStats {
                    iterations: total_iters,
                    residual: res,
                },
            ));
        }
    }
    Err(Error::SolverFailure {
        iterations: total_iters,
        residual: last_res,
        target,
    })
}
