//! The Duflo operator: a series in X acting on polynomials in ξ as a
//! constant-coefficient differential operator, X^c ↦ ∂/∂ξ_c.

use num_bigint::BigInt;
use num_traits::One;

use super::poly::{Poly, Truncation, XSeries};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// ∂^α ξ^β = β!/(β−α)! ξ^{β−α}, or `None` when α ≰ β.
fn differentiate(alpha: &[u8], beta: &[u8]) -> Option<(Vec<u8>, BigInt)> {
    let mut out = Vec::with_capacity(beta.len());
    let mut factor = BigInt::one();
    for (&a, &b) in alpha.iter().zip(beta) {
        if a > b {
            return None;
        }
        for k in 0..a {
            factor *= BigInt::from(b - k);
        }
        out.push(b - a);
    }
    Some((out, factor))
}

/// D(f)p. ħ-powers add. When `f` is known only through X-degree K, `p`
/// may have degree at most K, since higher terms of `f` would act on it.
pub fn duflo_apply(f: &XSeries, p: &XSeries) -> Result<XSeries> {
    if f.nvars() != p.nvars() {
        return Err(Error::DimensionMismatch(f.nvars(), p.nvars()));
    }
    if let Truncation::XDegree(k) = f.truncation() {
        let required = p.x_degree().unwrap_or(0);
        if required > k {
            return Err(Error::InsufficientTruncation { available: k, required });
        }
    }
    let result_truncation = match p.truncation() {
        Truncation::XDegree(_) => {
            return Err(Error::InvalidArgument("D(f) needs a polynomial or ħ-truncated argument".into()))
        }
        t => t,
    };
    let n = p.nvars();
    let mut out = XSeries::zero(n, result_truncation);
    for (hf, pf) in f.parts() {
        for (hp, pp) in p.parts() {
            let mut part = Poly::zero(n);
            for (alpha, qa) in pf.terms() {
                for (beta, qb) in pp.terms() {
                    if let Some((m, k)) = differentiate(alpha, beta) {
                        part.add_term(m, qa * qb * Rational::from_integer(k));
                    }
                }
            }
            out.add_part(hf + hp, &part);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn exact(p: Poly) -> XSeries {
        XSeries::from_poly(0, p, Truncation::Exact)
    }

    #[test]
    fn identity_and_degree_drop() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = exact(x.mul(&y).plus(&x));
        assert_eq!(duflo_apply(&exact(Poly::one(2)), &p).unwrap(), p);
        assert!(duflo_apply(&exact(x.mul(&x)), &exact(y.clone())).unwrap().is_zero());
    }

    #[test]
    fn laplacian_of_the_square_norm() {
        let sq = (0..3).fold(Poly::zero(3), |acc, i| acc.plus(&Poly::var(3, i).pow(2)));
        let r = duflo_apply(&exact(sq.clone()), &exact(sq)).unwrap();
        assert_eq!(r, exact(Poly::constant(3, int(6))));
    }

    #[test]
    fn truncation_and_dimension_are_checked() {
        let f = XSeries::from_poly(0, Poly::one(1), Truncation::XDegree(2));
        let p = exact(Poly::var(1, 0).pow(3));
        assert_eq!(
            duflo_apply(&f, &p),
            Err(Error::InsufficientTruncation { available: 2, required: 3 })
        );
        assert!(matches!(duflo_apply(&exact(Poly::one(2)), &p), Err(Error::DimensionMismatch(2, 1))));
    }
}
