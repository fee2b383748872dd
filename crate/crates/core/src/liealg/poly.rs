//! Exact multivariate polynomials and ħ-graded truncated series.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_fraction_string, Rational};
use crate::report::ResidualTerm;

/// Exponent vector of a monomial.
pub type Monomial = Vec<u8>;

fn monomial_degree(m: &[u8]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

/// Polynomial with rational coefficients in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, q: Rational) -> Poly {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], q);
        p
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(m, Rational::one());
        p
    }

    /// Σ coeffs[i]·x_i.
    pub fn linear(coeffs: &[Rational]) -> Poly {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, q) in coeffs.iter().enumerate() {
            let mut m = vec![0; n];
            m[i] = 1;
            p.add_term(m, q.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u8]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.nvars])
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| monomial_degree(m)).max()
    }

    pub fn add_term(&mut self, m: Monomial, q: Rational) {
        debug_assert_eq!(m.len(), self.nvars);
        if q.is_zero() {
            return;
        }
        let e = self.terms.entry(m);
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &Poly, q: &Rational) {
        assert_eq!(self.nvars, other.nvars, "polynomial variable counts differ");
        if q.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * q);
        }
    }

    pub fn plus(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_scaled(other, &Rational::one());
        p
    }

    pub fn minus(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_scaled(other, &-Rational::one());
        p
    }

    pub fn scaled(&self, q: &Rational) -> Poly {
        let mut p = Poly::zero(self.nvars);
        p.add_scaled(self, q);
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_truncated(other, None)
    }

    /// Product keeping monomials of total degree at most `max_degree`.
    pub fn mul_truncated(&self, other: &Poly, max_degree: Option<usize>) -> Poly {
        assert_eq!(self.nvars, other.nvars, "polynomial variable counts differ");
        let mut out = Poly::zero(self.nvars);
        let right: Vec<(&Monomial, &Rational, usize)> =
            other.terms.iter().map(|(m, q)| (m, q, monomial_degree(m))).collect();
        for (ma, qa) in &self.terms {
            let da = monomial_degree(ma);
            for &(mb, qb, db) in &right {
                if max_degree.is_some_and(|k| da + db > k) {
                    continue;
                }
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, qa * qb);
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn truncated(&self, max_degree: usize) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| monomial_degree(m) <= max_degree)
                .map(|(m, q)| (m.clone(), q.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, degree: usize) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| monomial_degree(m) == degree)
                .map(|(m, q)| (m.clone(), q.clone()))
                .collect(),
        }
    }

    /// ∂/∂x_i.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, q) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            out.add_term(m2, q * Rational::from_integer(m[i].into()));
        }
        out
    }

    /// Replaces x_i by `values[i]`; all substituted polynomials share a
    /// variable count, which becomes that of the result.
    pub fn substitute(&self, values: &[Poly], max_degree: Option<usize>) -> Result<Poly> {
        if values.len() != self.nvars {
            return Err(Error::DimensionMismatch(self.nvars, values.len()));
        }
        let n = values.first().map_or(0, |v| v.nvars);
        if let Some(v) = values.iter().find(|v| v.nvars != n) {
            return Err(Error::DimensionMismatch(n, v.nvars));
        }
        let mut powers: Vec<Vec<Poly>> = values.iter().map(|v| vec![Poly::one(n), v.clone()]).collect();
        let mut out = Poly::zero(n);
        for (m, q) in &self.terms {
            let mut t = Poly::constant(n, q.clone());
            for (i, &e) in m.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_truncated(&values[i], max_degree);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul_truncated(&powers[i][e as usize], max_degree);
                }
            }
            out.add_scaled(&t, &Rational::one());
        }
        Ok(out)
    }

    /// Value at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(self.nvars, point.len()));
        }
        let mut total = Rational::zero();
        for (m, q) in &self.terms {
            let mut t = q.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Term-by-term difference `self − other` as residual records.
    pub fn residual(&self, other: &Poly, names: &[String]) -> Result<Vec<ResidualTerm>> {
        self.check_vars(other)?;
        Ok(self
            .minus(other)
            .terms
            .iter()
            .map(|(m, q)| ResidualTerm {
                term: monomial_name(m, names),
                coefficient: to_fraction_string(q),
            })
            .collect())
    }
}

/// `x^2*y` style name of a monomial, `1` for the constant.
pub fn monomial_name(m: &[u8], names: &[String]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            let v = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
            if e == 1 {
                v
            } else {
                format!("{v}^{e}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, q)| format!("{}·{}", to_fraction_string(q), monomial_name(m, &[])))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// How far an [`XSeries`] is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// A polynomial, known exactly.
    Exact,
    /// All monomials of X-degree at most the bound are known.
    XDegree(usize),
    /// All ħ-powers at most the bound are known.
    HbarDegree(i32),
}

impl Truncation {
    fn meet(self, other: Truncation) -> Result<Truncation> {
        use Truncation::*;
        Ok(match (self, other) {
            (Exact, t) | (t, Exact) => t,
            (XDegree(a), XDegree(b)) => XDegree(a.min(b)),
            (HbarDegree(a), HbarDegree(b)) => HbarDegree(a.min(b)),
            (a, b) => {
                return Err(Error::InvalidArgument(format!(
                    "cannot combine series truncated as {a:?} and {b:?}"
                )))
            }
        })
    }

    fn keeps(self, hbar: i32, x_degree: usize) -> bool {
        match self {
            Truncation::Exact => true,
            Truncation::XDegree(k) => x_degree <= k,
            Truncation::HbarDegree(k) => hbar <= k,
        }
    }
}

/// Sum of ħ^k·p_k with polynomial coefficients p_k; ħ is a bookkeeping
/// exponent and may be negative.
#[derive(Clone, PartialEq, Eq)]
pub struct XSeries {
    nvars: usize,
    parts: BTreeMap<i32, Poly>,
    truncation: Truncation,
}

impl XSeries {
    pub fn zero(nvars: usize, truncation: Truncation) -> XSeries {
        XSeries {
            nvars,
            parts: BTreeMap::new(),
            truncation,
        }
    }

    pub fn one(nvars: usize, truncation: Truncation) -> XSeries {
        XSeries::from_poly(0, Poly::one(nvars), truncation)
    }

    pub fn from_poly(hbar: i32, p: Poly, truncation: Truncation) -> XSeries {
        let mut s = XSeries::zero(p.nvars(), truncation);
        s.add_part(hbar, &p);
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> XSeries {
        self.truncation = truncation;
        self.prune();
        self
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (i32, &Poly)> {
        self.parts.iter().map(|(&k, p)| (k, p))
    }

    pub fn part(&self, hbar: i32) -> Poly {
        self.parts.get(&hbar).cloned().unwrap_or_else(|| Poly::zero(self.nvars))
    }

    /// Largest X-degree present.
    pub fn x_degree(&self) -> Option<usize> {
        self.parts.values().filter_map(Poly::degree).max()
    }

    fn prune(&mut self) {
        let t = self.truncation;
        for p in self.parts.values_mut() {
            p.terms.retain(|m, _| match t {
                Truncation::XDegree(k) => monomial_degree(m) <= k,
                _ => true,
            });
        }
        self.parts.retain(|&h, p| !p.is_zero() && t.keeps(h, 0));
    }

    pub fn add_part(&mut self, hbar: i32, p: &Poly) {
        assert_eq!(p.nvars(), self.nvars, "series variable counts differ");
        self.parts.entry(hbar).or_insert_with(|| Poly::zero(self.nvars)).add_scaled(p, &Rational::one());
        self.prune();
    }

    pub fn add_scaled(&mut self, other: &XSeries, q: &Rational) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(self.nvars, other.nvars));
        }
        self.truncation = self.truncation.meet(other.truncation)?;
        for (&h, p) in &other.parts {
            self.parts
                .entry(h)
                .or_insert_with(|| Poly::zero(self.nvars))
                .add_scaled(p, q);
        }
        self.prune();
        Ok(())
    }

    pub fn plus(&self, other: &XSeries) -> Result<XSeries> {
        let mut s = self.clone();
        s.add_scaled(other, &Rational::one())?;
        Ok(s)
    }

    pub fn minus(&self, other: &XSeries) -> Result<XSeries> {
        let mut s = self.clone();
        s.add_scaled(other, &-Rational::one())?;
        Ok(s)
    }

    pub fn scaled(&self, q: &Rational) -> XSeries {
        let mut s = XSeries::zero(self.nvars, self.truncation);
        for (&h, p) in &self.parts {
            s.parts.insert(h, p.scaled(q));
        }
        s.prune();
        s
    }

    /// Product; the truncation is the tighter of the two.
    pub fn mul(&self, other: &XSeries) -> Result<XSeries> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(self.nvars, other.nvars));
        }
        let t = self.truncation.meet(other.truncation)?;
        let x_cap = match t {
            Truncation::XDegree(k) => Some(k),
            _ => None,
        };
        let mut out = XSeries::zero(self.nvars, t);
        for (&ha, pa) in &self.parts {
            for (&hb, pb) in &other.parts {
                if !t.keeps(ha + hb, 0) {
                    continue;
                }
                let p = pa.mul_truncated(pb, x_cap);
                out.parts
                    .entry(ha + hb)
                    .or_insert_with(|| Poly::zero(self.nvars))
                    .add_scaled(&p, &Rational::one());
            }
        }
        out.prune();
        Ok(out)
    }

    /// Maps each polynomial part through `f`, keeping ħ-powers.
    pub fn map_parts(&self, nvars: usize, mut f: impl FnMut(&Poly) -> Result<Poly>) -> Result<XSeries> {
        let mut out = XSeries::zero(nvars, self.truncation);
        for (&h, p) in &self.parts {
            let q = f(p)?;
            if q.nvars() != nvars {
                return Err(Error::DimensionMismatch(nvars, q.nvars()));
            }
            out.parts.insert(h, q);
        }
        out.prune();
        Ok(out)
    }

    /// Residual `self − other` over the terms both sides know.
    pub fn residual(&self, other: &XSeries, names: &[String]) -> Result<Vec<ResidualTerm>> {
        let diff = self.minus(other)?;
        let mut out = Vec::new();
        for (&h, p) in &diff.parts {
            for (m, q) in p.terms() {
                let x = monomial_name(m, names);
                let term = if h == 0 { x } else { format!("hbar^{h}*{x}") };
                out.push(ResidualTerm {
                    term,
                    coefficient: to_fraction_string(q),
                });
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for XSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XSeries[{:?}]{{", self.truncation)?;
        for (i, (h, p)) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "ħ^{h}: {p:?}")?;
        }
        write!(f, "}}")
    }
}

/// Truncated one-variable power series helpers on coefficient vectors.
pub(crate) mod univariate {
    use super::*;

    /// 1/a for a series with constant term 1.
    pub fn inverse(a: &[Rational], len: usize) -> Result<Vec<Rational>> {
        if a.first().is_none_or(|c| !c.is_one()) {
            return Err(Error::InvariantViolation("series inverse needs constant term 1".into()));
        }
        let mut out = vec![Rational::zero(); len];
        out[0] = Rational::one();
        for n in 1..len {
            let mut s = Rational::zero();
            for k in 1..=n.min(a.len() - 1) {
                s += &a[k] * &out[n - k];
            }
            out[n] = -s;
        }
        Ok(out)
    }
}
