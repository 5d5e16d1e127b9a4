//! Lanczos approximation of `e^{−τS}u` for a Hermitian positive operator `S`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

const MAX_DIM: usize = 48;
const MAX_HALVINGS: usize = 20;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `e^{−τT}e₁` for the symmetric tridiagonal `T` given by `alpha`, `beta`.
fn tridiag_exp(alpha: &[f64], beta: &[f64], tau: f64) -> Vec<f64> {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let q = &eig.eigenvectors;
    (0..m)
        .map(|r| {
            (0..m)
                .map(|c| q[(r, c)] * (-tau * eig.eigenvalues[c]).exp() * q[(0, c)])
                .sum()
        })
        .collect()
}

/// One Krylov attempt. `None` when the error estimate stays above `tol`.
fn attempt<F>(apply: &F, u: &[Complex64], tau: f64, tol: f64) -> Option<Vec<Complex64>>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let beta0 = norm(u);
    if beta0 == 0.0 {
        return Some(u.to_vec());
    }
    let mut basis: Vec<Vec<Complex64>> = vec![u.iter().map(|z| z / beta0).collect()];
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for j in 0..MAX_DIM {
        let mut w = apply(&basis[j]);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        for v in &basis {
            let c = dot(v, &w);
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi -= c * vi;
            }
        }
        let b = norm(&w);
        let coeffs = tridiag_exp(&alpha, &beta, tau);
        let err = beta0 * b * coeffs[j].abs();
        let breakdown = b <= 1e-14 * alpha.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
        if err <= tol || breakdown {
            let mut out = vec![Complex64::new(0.0, 0.0); u.len()];
            for (c, v) in coeffs.iter().zip(&basis) {
                for (o, vi) in out.iter_mut().zip(v) {
                    *o += vi * (beta0 * c);
                }
            }
            return Some(out);
        }
        beta.push(b);
        basis.push(w.into_iter().map(|z| z / b).collect());
    }
    None
}

/// `e^{−τS}u` with absolute error target `tol`, substepping as needed.
pub(crate) fn expv<F>(apply: &F, u: &[Complex64], tau: f64, tol: f64) -> Option<Vec<Complex64>>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let mut pieces = 1usize;
    for _ in 0..MAX_HALVINGS {
        let sub = tau / pieces as f64;
        let mut cur = u.to_vec();
        let mut ok = true;
        for _ in 0..pieces {
            match attempt(apply, &cur, sub, tol / pieces as f64) {
                Some(next) => cur = next,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some(cur);
        }
        pieces *= 2;
    }
    None
}
