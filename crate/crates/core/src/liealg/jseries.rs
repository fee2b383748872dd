//! j_g(X) = det(sinh(ad X/2)/(ad X/2)) and its square root, computed by
//! truncated matrix series, Gaussian elimination over the series ring and
//! a Newton iteration for the root.

use num_traits::{One, Zero};

use super::poly::{Poly, Truncation, XSeries};
use super::{ad_endomorphism, MetrizedLie};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::rational::{factorial, Rational};

fn mat_mul_truncated(a: &[Vec<Poly>], b: &[Vec<Poly>], k: usize) -> Vec<Vec<Poly>> {
    let n = a.len();
    let d = a[0][0].nvars();
    let mut out = vec![vec![Poly::zero(d); n]; n];
    for i in 0..n {
        for (l, bl) in b.iter().enumerate() {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                if !bl[j].is_zero() {
                    let p = a[i][l].mul_truncated(&bl[j], Some(k));
                    out[i][j].add_scaled(&p, &Rational::one());
                }
            }
        }
    }
    out
}

/// sinh(ad X/2)/(ad X/2) = Σ (ad X/2)^{2n}/(2n+1)!, through X-degree `k`.
fn sinh_ratio_matrix(l: &MetrizedLie, k: usize) -> Result<Vec<Vec<Poly>>> {
    let d = l.dim;
    let ad = ad_endomorphism(l)?;
    let half = Rational::new(1.into(), 2.into());
    let a: Vec<Vec<Poly>> = ad.iter().map(|r| r.iter().map(|p| p.scaled(&half)).collect()).collect();
    let a2 = mat_mul_truncated(&a, &a, k);
    let mut m: Vec<Vec<Poly>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { Poly::one(d) } else { Poly::zero(d) }).collect())
        .collect();
    let mut power = a2.clone();
    let mut n = 1;
    while 2 * n <= k {
        let c = Rational::new(1.into(), factorial(2 * n as u64 + 1));
        for i in 0..d {
            for j in 0..d {
                m[i][j].add_scaled(&power[i][j], &c);
            }
        }
        n += 1;
        if 2 * n <= k {
            power = mat_mul_truncated(&power, &a2, k);
        }
    }
    Ok(m)
}

/// 1/p through degree `k`, for p with nonzero constant term.
pub fn poly_inverse(p: &Poly, k: usize) -> Result<Poly> {
    let c0 = p.constant_term();
    if c0.is_zero() {
        return Err(Error::InvariantViolation("series inverse of a non-unit".into()));
    }
    let d = p.nvars();
    let c0inv = c0.recip();
    // p/c0 = 1 − u, 1/p = (1/c0) Σ u^i
    let u = Poly::one(d).minus(&p.scaled(&c0inv)).truncated(k);
    let mut sum = Poly::one(d);
    let mut power = Poly::one(d);
    for _ in 0..k {
        power = power.mul_truncated(&u, Some(k));
        if power.is_zero() {
            break;
        }
        sum.add_scaled(&power, &Rational::one());
    }
    Ok(sum.scaled(&c0inv))
}

/// Determinant over polynomials truncated at degree `k`. Pivots must be
/// units (constant term nonzero).
fn det_truncated(mut m: Vec<Vec<Poly>>, k: usize) -> Result<Poly> {
    let n = m.len();
    let d = m[0][0].nvars();
    let mut det = Poly::one(d);
    for j in 0..n {
        let p = (j..n)
            .find(|&r| !m[r][j].constant_term().is_zero())
            .ok_or_else(|| Error::InvariantViolation("no unit pivot in series determinant".into()))?;
        if p != j {
            m.swap(p, j);
            det = det.scaled(&-Rational::one());
        }
        let inv = poly_inverse(&m[j][j], k)?;
        det = det.mul_truncated(&m[j][j], Some(k));
        for r in j + 1..n {
            if m[r][j].is_zero() {
                continue;
            }
            let factor = m[r][j].mul_truncated(&inv, Some(k));
            for c in j + 1..n {
                if m[j][c].is_zero() {
                    continue;
                }
                let t = factor.mul_truncated(&m[j][c], Some(k));
                m[r][c].add_scaled(&t, &-Rational::one());
            }
            m[r][j] = Poly::zero(d);
        }
    }
    Ok(det)
}

/// j_g through X-degree `x_degree`.
pub fn j_series(l: &MetrizedLie, x_degree: usize, limits: &Limits) -> Result<XSeries> {
    Limits::check("X-degree", x_degree, limits.x_degree_cap)?;
    let m = sinh_ratio_matrix(l, x_degree)?;
    let det = det_truncated(m, x_degree)?;
    Ok(XSeries::from_poly(0, det, Truncation::XDegree(x_degree)))
}

/// Square root with constant term 1 by Newton iteration y ← (y + f/y)/2.
pub fn series_sqrt(f: &Poly, k: usize) -> Result<Poly> {
    if !f.constant_term().is_one() {
        return Err(Error::InvariantViolation("series square root needs constant term 1".into()));
    }
    let d = f.nvars();
    let half = Rational::new(1.into(), 2.into());
    let f = f.truncated(k);
    let mut y = Poly::one(d);
    let mut known = 1;
    loop {
        let q = f.mul_truncated(&poly_inverse(&y, k)?, Some(k));
        let next = y.plus(&q).scaled(&half);
        if next == y {
            break;
        }
        y = next;
        if known > k {
            break;
        }
        known *= 2;
    }
    if y.mul_truncated(&y, Some(k)) != f {
        return Err(Error::InvariantViolation("Newton square root did not converge".into()));
    }
    Ok(y)
}

/// j_g^{1/2} through X-degree `x_degree`.
pub fn j_half_series(l: &MetrizedLie, x_degree: usize, limits: &Limits) -> Result<XSeries> {
    let j = j_series(l, x_degree, limits)?;
    let root = series_sqrt(&j.part(0), x_degree)?;
    Ok(XSeries::from_poly(0, root, Truncation::XDegree(x_degree)))
}
