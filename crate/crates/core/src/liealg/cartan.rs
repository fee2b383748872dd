//! Restriction to the Cartan subalgebra, the product formulas over
//! positive roots, and lifting Weyl-invariant polynomials back to g*.
//!
//! Polynomials on h* use the coordinates `y_k = λ(H_k)`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::poly::{univariate, Poly, Truncation, XSeries};
use super::{MetrizedLie, RootData};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::linalg::{mat_vec, solve_rectangular};
use crate::rational::{factorial, Rational};

fn roots(l: &MetrizedLie) -> Result<&RootData> {
    l.roots
        .as_ref()
        .ok_or_else(|| Error::UnsupportedAlgebra(format!("{} has no root data", l.name)))
}

/// X ↦ ħλ: `X^{H_k} = ħ (G⁻¹ y)_k`, root coordinates zero. A term of
/// X-degree n picks up ħ^n, so an X-degree truncation becomes an ħ one.
pub fn restrict_x_to_cartan(l: &MetrizedLie, s: &XSeries) -> Result<XSeries> {
    let r = roots(l)?;
    let mut values = vec![Poly::zero(r.rank); l.dim];
    for (k, &a) in r.cartan_indices.iter().enumerate() {
        values[a] = Poly::linear(&r.gram_inverse[k]);
    }
    let truncation = match s.truncation() {
        Truncation::XDegree(k) => Truncation::HbarDegree(k as i32),
        Truncation::Exact => Truncation::Exact,
        Truncation::HbarDegree(_) => {
            return Err(Error::InvalidArgument("Cartan restriction of X needs an X-graded series".into()))
        }
    };
    let mut out = XSeries::zero(r.rank, truncation);
    for (h, p) in s.parts() {
        let q = p.substitute(&values, None)?;
        for n in 0..=q.degree().unwrap_or(0) {
            out.add_part(h + n as i32, &q.homogeneous_part(n));
        }
    }
    Ok(out)
}

/// ξ ↦ λ: `ξ_{H_k} = y_k`, root coordinates zero.
pub fn restrict_xi_to_cartan(l: &MetrizedLie, s: &XSeries) -> Result<XSeries> {
    let r = roots(l)?;
    let mut values = vec![Poly::zero(r.rank); l.dim];
    for (k, &a) in r.cartan_indices.iter().enumerate() {
        values[a] = Poly::var(r.rank, k);
    }
    s.map_parts(r.rank, |p| p.substitute(&values, None))
}

/// Coefficients of sinh(z/2)/(z/2) through z^k.
fn sinh_ratio(k: usize) -> Vec<Rational> {
    (0..=k)
        .map(|i| {
            if i % 2 == 1 {
                Rational::zero()
            } else {
                // z^{2n} / (4^n (2n+1)!)
                let n = i / 2;
                Rational::new(1.into(), factorial(i as u64 + 1) * num_bigint::BigInt::from(4u32).pow(n as u32))
            }
        })
        .collect()
}

/// Σ c_i ħ^i ℓ^i for a univariate series `c` and linear form `ℓ`.
fn along(c: &[Rational], ell: &Poly, k: usize) -> XSeries {
    let mut out = XSeries::zero(ell.nvars(), Truncation::HbarDegree(k as i32));
    let mut power = Poly::one(ell.nvars());
    for (i, q) in c.iter().enumerate().take(k + 1) {
        if !q.is_zero() {
            out.add_part(i as i32, &power.scaled(q));
        }
        power = power.mul(ell);
    }
    out
}

/// j^{1/2}(ħλ) as the product over positive roots of
/// sinh(ħ(λ,α)/2)/(ħ(λ,α)/2), through ħ^{x_degree}.
pub fn restrict_j_to_cartan(l: &MetrizedLie, x_degree: usize, limits: &Limits) -> Result<XSeries> {
    Limits::check("X-degree", x_degree, limits.x_degree_cap)?;
    let r = roots(l)?;
    let f = sinh_ratio(x_degree);
    let mut out = XSeries::one(r.rank, Truncation::HbarDegree(x_degree as i32));
    for alpha in &r.positive_roots {
        let ell = Poly::linear(&r.root_functional(alpha));
        out = out.mul(&along(&f, &ell, x_degree))?;
    }
    Ok(out)
}

/// The unknot value Π_{α>0} [ħ(ρ,α)/2 / sinh(ħ(ρ,α)/2)]·[sinh(ħ(λ,α)/2) /
/// (ħ(λ,α)/2)] through ħ^{x_degree}.
pub fn unknot_rt_series(l: &MetrizedLie, x_degree: usize, limits: &Limits) -> Result<XSeries> {
    Limits::check("X-degree", x_degree, limits.x_degree_cap)?;
    let r = roots(l)?;
    let k = x_degree;
    let f = sinh_ratio(k);
    let g = univariate::inverse(&f, k + 1)?;
    let mut out = XSeries::one(r.rank, Truncation::HbarDegree(k as i32));
    for alpha in &r.positive_roots {
        let ell = Poly::linear(&r.root_functional(alpha));
        let rho_alpha = Poly::constant(r.rank, r.pairing(&r.rho, alpha));
        out = out.mul(&along(&g, &rho_alpha, k))?.mul(&along(&f, &ell, k))?;
    }
    Ok(out)
}

/// Coordinates `Ξ^a = g^{ab} ξ_b` of the element of g dual to ξ.
fn xi_vector(l: &MetrizedLie) -> Result<Vec<Poly>> {
    let inv = l.inverse_metric()?;
    Ok((0..l.dim).map(|a| Poly::linear(&inv[a])).collect())
}

/// The quadratic Casimir `(ξ, ξ) = g^{ab} ξ_a ξ_b` on g*.
pub fn casimir(l: &MetrizedLie) -> Result<Poly> {
    let inv = l.inverse_metric()?;
    let mut p = Poly::zero(l.dim);
    for a in 0..l.dim {
        for b in 0..l.dim {
            if !inv[a][b].is_zero() {
                p.add_scaled(&Poly::var(l.dim, a).mul(&Poly::var(l.dim, b)), &inv[a][b]);
            }
        }
    }
    Ok(p)
}

/// `tr(Ξ^k)` for `k = 2..=N` in the defining representation, as
/// polynomials in ξ.
pub fn invariant_generators(l: &MetrizedLie) -> Result<Vec<Poly>> {
    let mats = l
        .matrices
        .as_ref()
        .ok_or_else(|| Error::UnsupportedAlgebra(format!("{} has no matrix realization", l.name)))?;
    let n = mats[0].len();
    let xi = xi_vector(l)?;
    let d = l.dim;
    let entry = |i: usize, j: usize| {
        let mut p = Poly::zero(d);
        for (a, x) in mats.iter().enumerate() {
            if !x[i][j].is_zero() {
                p.add_scaled(&xi[a], &x[i][j]);
            }
        }
        p
    };
    let m: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    let mut power = m.clone();
    let mut out = Vec::new();
    for _ in 2..=n {
        let mut next = vec![vec![Poly::zero(d); n]; n];
        for i in 0..n {
            for k in 0..n {
                if power[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    next[i][j].add_scaled(&power[i][k].mul(&m[k][j]), &Rational::one());
                }
            }
        }
        power = next;
        out.push((0..n).fold(Poly::zero(d), |acc, i| acc.plus(&power[i][i])));
    }
    Ok(out)
}

/// Exponent vectors `e` with `Σ weights[i]·e[i] = total`.
fn weighted_compositions(weights: &[usize], total: usize) -> Vec<Vec<usize>> {
    if weights.is_empty() {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for e in 0..=total / weights[0] {
        for mut rest in weighted_compositions(&weights[1..], total - e * weights[0]) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// The invariant polynomial on g* whose restriction to h* is `p`, found by
/// writing `p` in the restricted generators. Fails if `p` is not Weyl
/// invariant.
pub fn lift_invariant(l: &MetrizedLie, p: &Poly) -> Result<Poly> {
    let r = roots(l)?;
    if p.nvars() != r.rank {
        return Err(Error::DimensionMismatch(p.nvars(), r.rank));
    }
    let gens = invariant_generators(l)?;
    let restricted: Vec<Poly> = gens
        .iter()
        .map(|q| Ok(restrict_xi_to_cartan(l, &XSeries::from_poly(0, q.clone(), Truncation::Exact))?.part(0)))
        .collect::<Result<_>>()?;
    let weights: Vec<usize> = (2..2 + gens.len()).collect();
    let mut out = Poly::zero(l.dim);
    for degree in 0..=p.degree().unwrap_or(0) {
        let target = p.homogeneous_part(degree);
        if target.is_zero() {
            continue;
        }
        let exps = weighted_compositions(&weights, degree);
        let columns: Vec<Poly> = exps
            .iter()
            .map(|e| e.iter().zip(&restricted).fold(Poly::one(r.rank), |acc, (&k, q)| acc.mul(&q.pow(k))))
            .collect();
        let monomials: BTreeSet<Vec<u8>> = columns
            .iter()
            .chain(std::iter::once(&target))
            .flat_map(|c| c.terms().map(|(m, _)| m.clone()))
            .collect();
        let a: Vec<Vec<Rational>> = monomials
            .iter()
            .map(|m| columns.iter().map(|c| c.coefficient(m)).collect())
            .collect();
        let b: Vec<Rational> = monomials.iter().map(|m| target.coefficient(m)).collect();
        let coeffs = solve_rectangular(&a, &b).ok_or_else(|| {
            Error::InvalidArgument(format!("degree-{degree} part is not Weyl invariant"))
        })?;
        debug_assert_eq!(mat_vec(&a, &coeffs), b);
        for (e, q) in exps.iter().zip(&coeffs) {
            if q.is_zero() {
                continue;
            }
            let term = e.iter().zip(&gens).fold(Poly::one(l.dim), |acc, (&k, g)| acc.mul(&g.pow(k)));
            out.add_scaled(&term, q);
        }
    }
    Ok(out)
}

/// Evaluates every ħ-part at a point of h*, giving the coefficients of a
/// series in ħ alone.
pub(crate) fn hbar_coefficients(s: &XSeries, point: &[Rational], k: usize) -> Result<Vec<Rational>> {
    (0..=k as i32).map(|h| s.part(h).evaluate(point)).collect()
}
