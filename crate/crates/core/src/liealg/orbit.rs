//! The orbit integral S_g for sl2: averaging a polynomial on g* over the
//! coadjoint orbit through ρ, normalized to mass 1.
//!
//! The orbit is a sphere `(s, s) = (ρ, ρ)` in the three-dimensional g*,
//! so the moments are those of the invariant measure on a sphere: odd
//! moments vanish and
//! `E[s_{a_1} ⋯ s_{a_{2k}}] = R^{2k} / (n(n+2)⋯(n+2k−2)) · Σ_pairings Π g_{ab}`
//! with `R² = (ρ, ρ)` and `n = 3`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{Poly, XSeries};
use super::MetrizedLie;
use crate::error::{Error, Result};
use crate::rational::{binomial_rational, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitMeasure {
    pub algebra: String,
    pub radius_squared: Rational,
    /// `g_{ab}`, the covariance shape of the measure.
    metric: Vec<Vec<Rational>>,
}

impl OrbitMeasure {
    pub fn for_lie(l: &MetrizedLie) -> Result<OrbitMeasure> {
        if l.name != "sl2" {
            return Err(Error::UnsupportedAlgebra(format!(
                "orbit integration is closed-form for sl2 only, not {}",
                l.name
            )));
        }
        let r = l
            .roots
            .as_ref()
            .ok_or_else(|| Error::UnsupportedAlgebra("sl2 without root data".into()))?;
        Ok(OrbitMeasure {
            algebra: l.name.clone(),
            radius_squared: r.pairing(&r.rho, &r.rho),
            metric: l.metric.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.len()
    }

    /// `E[s^γ]` for an exponent vector γ.
    pub fn moment(&self, gamma: &[u8]) -> Rational {
        let mut indices = Vec::new();
        for (a, &e) in gamma.iter().enumerate() {
            indices.extend(std::iter::repeat_n(a, e as usize));
        }
        if indices.len() % 2 == 1 {
            return Rational::zero();
        }
        let k = indices.len() / 2;
        let n = self.dim();
        let mut scale = Rational::one();
        for i in 0..k {
            scale *= &self.radius_squared;
            scale /= Rational::from_integer(BigInt::from(n + 2 * i));
        }
        scale * self.pairings(&indices)
    }

    /// Σ over perfect matchings of `indices` of Π g_{ab}.
    fn pairings(&self, indices: &[usize]) -> Rational {
        if indices.is_empty() {
            return Rational::one();
        }
        let first = indices[0];
        let mut total = Rational::zero();
        for j in 1..indices.len() {
            let g = &self.metric[first][indices[j]];
            if g.is_zero() {
                continue;
            }
            let rest: Vec<usize> = indices[1..]
                .iter()
                .enumerate()
                .filter(|&(i, _)| i + 1 != j)
                .map(|(_, &v)| v)
                .collect();
            total += g * self.pairings(&rest);
        }
        total
    }

    /// `p ↦ E_s[p(ξ + s)]`.
    pub fn integrate(&self, p: &Poly) -> Result<Poly> {
        let n = self.dim();
        if p.nvars() != n {
            return Err(Error::DimensionMismatch(p.nvars(), n));
        }
        let mut out = Poly::zero(n);
        for (beta, q) in p.terms() {
            // (ξ + s)^β = Σ_{γ ≤ β} C(β, γ) ξ^{β−γ} s^γ
            let mut gamma = vec![0u8; n];
            loop {
                let m = self.moment(&gamma);
                if !m.is_zero() {
                    let mut c = q * m;
                    for (&b, &g) in beta.iter().zip(&gamma) {
                        c *= binomial_rational(&Rational::from_integer(BigInt::from(b)), g as u64);
                    }
                    out.add_term(beta.iter().zip(&gamma).map(|(b, g)| b - g).collect(), c);
                }
                // next γ ≤ β in odometer order
                let mut i = 0;
                while i < n && gamma[i] == beta[i] {
                    gamma[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                gamma[i] += 1;
            }
        }
        Ok(out)
    }
}

/// S_g on an ħ-graded series of polynomials on g*, part by part.
pub fn sg_integrate(l: &MetrizedLie, p: &XSeries) -> Result<XSeries> {
    let m = OrbitMeasure::for_lie(l)?;
    p.map_parts(m.dim(), |q| m.integrate(q))
}
