//! Singular value decomposition by one-sided Jacobi.
//!
//! One-sided Jacobi orthogonalizes pairs of columns with plane rotations,
//! which gives high relative accuracy even for small singular values. The
//! returned factors are full square unitaries, `A = U Σ V†` with `Σ`
//! rectangular-diagonal, so callers can use them directly as the local
//! bases of a Schmidt decomposition.

use num_complex::Complex64 as C64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;
const PAIR_EPS: f64 = 1e-15;

/// Full SVD `A = U Σ V†`; `u` is rows×rows, `v` is cols×cols,
/// `values` holds the min(rows, cols) singular values, nonincreasing.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub values: Vec<f64>,
    pub v: ComplexMatrix,
}

/// Singular values only, nonincreasing.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.values)
}

/// Full singular value decomposition.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("non-finite matrix entry".into()));
    }
    if a.rows() < a.cols() {
        let s = svd(&a.adjoint())?;
        return Ok(Svd {
            u: s.v,
            values: s.values,
            v: s.u,
        });
    }
    one_sided_jacobi(a)
}

// Requires rows >= cols.
fn one_sided_jacobi(a: &ComplexMatrix) -> Result<Svd> {
    let m = a.rows();
    let n = a.cols();
    if n == 0 {
        return Ok(Svd {
            u: ComplexMatrix::identity(m),
            values: Vec::new(),
            v: ComplexMatrix::zeros(0, 0),
        });
    }
    let mut g = a.clone();
    let mut v = ComplexMatrix::identity(n);

    let mut converged = n == 1;
    for _sweep in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        converged = true;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = C64::new(0.0, 0.0);
                for i in 0..m {
                    let gp = g.get(i, p);
                    let gq = g.get(i, q);
                    app += gp.norm_sqr();
                    aqq += gq.norm_sqr();
                    apq += gp.conj() * gq;
                }
                if app == 0.0 || aqq == 0.0 {
                    continue;
                }
                let gamma = apq.norm();
                if gamma <= PAIR_EPS * (app * aqq).sqrt() {
                    continue;
                }
                converged = false;
                let phase = (apq / gamma).conj(); // makes the pair inner product real
                let tau = (aqq - app) / (2.0 * gamma);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..m {
                    let gp = g.get(i, p);
                    let gq = g.get(i, q) * phase;
                    g.set(i, p, gp * c - gq * s);
                    g.set(i, q, gp * s + gq * c);
                }
                for i in 0..n {
                    let vp = v.get(i, p);
                    let vq = v.get(i, q) * phase;
                    v.set(i, p, vp * c - vq * s);
                    v.set(i, q, vp * s + vq * c);
                }
            }
        }
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "one-sided Jacobi SVD did not converge in {MAX_SWEEPS} sweeps ({m}x{n})"
        )));
    }

    let mut norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| g.get(i, j).norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));
    norms = order.iter().map(|&j| norms[j]).collect();

    let v_sorted = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));

    let sigma_max = norms.first().copied().unwrap_or(0.0);
    let cutoff = sigma_max * PAIR_EPS * (m.max(n) as f64);
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(m);
    for (rank_pos, &j) in order.iter().enumerate() {
        let sigma = norms[rank_pos];
        if sigma > cutoff && sigma > 0.0 {
            u_cols.push((0..m).map(|i| g.get(i, j) / sigma).collect());
        }
    }
    complete_orthonormal(&mut u_cols, m);
    let u = ComplexMatrix::from_fn(m, m, |i, j| u_cols[j][i]);

    Ok(Svd {
        u,
        values: norms,
        v: v_sorted,
    })
}

/// Extend a set of orthonormal columns to a full orthonormal basis of C^m,
/// greedily taking whichever canonical basis vector has the largest
/// component outside the current span.
pub(crate) fn complete_orthonormal(cols: &mut Vec<Vec<C64>>, m: usize) {
    while cols.len() < m {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for k in 0..m {
            let mut r = vec![C64::new(0.0, 0.0); m];
            r[k] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for col in cols.iter() {
                    let overlap: C64 = col.iter().zip(&r).map(|(ci, ri)| ci.conj() * ri).sum();
                    for (ri, ci) in r.iter_mut().zip(col) {
                        *ri -= overlap * ci;
                    }
                }
            }
            let norm = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
                best = Some((norm, r));
            }
        }
        let (norm, mut r) = best.expect("m > 0");
        debug_assert!(norm > 1e-8, "orthonormal completion degenerate");
        for z in r.iter_mut() {
            *z /= norm;
        }
        cols.push(r);
    }
}

/// Orthonormalize the columns of a matrix by twice-iterated modified
/// Gram–Schmidt. The implied R factor has a positive diagonal. Errors if
/// the columns are numerically dependent.
pub fn orthonormalize_columns(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let m = a.rows();
    let k = a.cols();
    if k > m {
        return Err(Error::InvalidShape(format!(
            "cannot orthonormalize {k} columns in dimension {m}"
        )));
    }
    let mut cols: Vec<Vec<C64>> = (0..k).map(|j| a.col(j)).collect();
    for j in 0..k {
        let original_norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for _ in 0..2 {
            for i in 0..j {
                let (head, tail) = cols.split_at_mut(j);
                let qi = &head[i];
                let vj = &mut tail[0];
                let overlap: C64 = qi.iter().zip(vj.iter()).map(|(q, v)| q.conj() * v).sum();
                for (v, q) in vj.iter_mut().zip(qi) {
                    *v -= overlap * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-12 * f64::max(1.0, original_norm) {
            return Err(Error::Numeric(format!(
                "column {j} is numerically dependent on the previous ones"
            )));
        }
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    Ok(ComplexMatrix::from_fn(m, k, |i, j| cols[j][i]))
}

/// Closest unitary to a square matrix (polar factor `W V†` of its SVD).
/// Zero singular directions are completed deterministically.
pub(crate) fn polar_unitary(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::InvalidShape(
            "polar factor needs a square matrix".into(),
        ));
    }
    let s = svd(a)?;
    s.u.mul(&s.v.adjoint())
}

/// Moore–Penrose pseudoinverse with relative rank cutoff.
pub(crate) fn pseudoinverse(a: &ComplexMatrix, rel_cutoff: f64) -> Result<ComplexMatrix> {
    let s = svd(a)?;
    let sigma_max = s.values.first().copied().unwrap_or(0.0);
    let cut = sigma_max * rel_cutoff;
    // V Σ⁺ U†
    let mut out = ComplexMatrix::zeros(a.cols(), a.rows());
    for (k, &sigma) in s.values.iter().enumerate() {
        if sigma <= cut || sigma == 0.0 {
            continue;
        }
        let inv = 1.0 / sigma;
        for i in 0..a.cols() {
            let vik = s.v.get(i, k);
            for j in 0..a.rows() {
                let cur = out.get(i, j);
                out.set(i, j, cur + vik * s.u.get(j, k).conj() * inv);
            }
        }
    }
    Ok(out)
}
