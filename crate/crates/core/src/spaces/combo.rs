use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::diagrams::{canonical_form, validate_diagram, CanonicalDiagram, SpaceKind, UniTrivalentDiagram};
use crate::error::{Error, Result};
use crate::rational::{to_fraction_string, Rational};

/// A finite formal linear combination of canonical diagrams.
///
/// Zero coefficients are never stored. Terms may have mixed degrees; use
/// [`Combo::homogeneous_parts`] before handing a combo to a per-degree
/// operation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Combo {
    kind: SpaceKind,
    terms: BTreeMap<CanonicalDiagram, Rational>,
}

impl Combo {
    pub fn zero(kind: SpaceKind) -> Combo {
        Combo {
            kind,
            terms: BTreeMap::new(),
        }
    }

    /// The unit: the empty diagram with coefficient 1.
    pub fn one(kind: SpaceKind) -> Combo {
        Combo::term(kind, CanonicalDiagram::empty(kind.has_skeleton()), Rational::one())
    }

    pub fn term(kind: SpaceKind, d: CanonicalDiagram, coeff: Rational) -> Combo {
        let mut c = Combo::zero(kind);
        c.add_term(d, coeff);
        c
    }

    /// Validates `d` against `kind`, canonicalizes it and applies the AS sign.
    pub fn from_diagram(d: &UniTrivalentDiagram, kind: SpaceKind) -> Result<Combo> {
        validate_diagram(d, kind)?;
        let mut c = Combo::zero(kind);
        c.add_diagram(d, Rational::one())?;
        Ok(c)
    }

    /// Adds `coeff · d` without validating against the kind policy.
    pub(crate) fn add_diagram(&mut self, d: &UniTrivalentDiagram, coeff: Rational) -> Result<()> {
        if let Some((sign, c)) = canonical_form(d)?.into_parts() {
            self.add_term(c, if sign < 0 { -coeff } else { coeff });
        }
        Ok(())
    }

    pub fn add_term(&mut self, d: CanonicalDiagram, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(d) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += scale · other`.
    pub fn add_scaled(&mut self, other: &Combo, scale: &Rational) -> Result<()> {
        self.check_kind(other)?;
        for (d, q) in &other.terms {
            self.add_term(d.clone(), q * scale);
        }
        Ok(())
    }

    pub fn scaled(&self, scale: &Rational) -> Combo {
        let mut out = Combo::zero(self.kind);
        if scale.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(d, q)| (d.clone(), q * scale)).collect();
        out
    }

    pub fn plus(&self, other: &Combo) -> Result<Combo> {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one())?;
        Ok(out)
    }

    pub fn minus(&self, other: &Combo) -> Result<Combo> {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one())?;
        Ok(out)
    }

    pub fn check_kind(&self, other: &Combo) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch {
                expected: self.kind.name().into(),
                found: other.kind.name().into(),
            });
        }
        Ok(())
    }

    pub fn expect_kind(&self, kinds: &[SpaceKind]) -> Result<()> {
        if kinds.contains(&self.kind) {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                expected: kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join("|"),
                found: self.kind.name().into(),
            })
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    /// The same terms viewed in another space (no validation).
    pub(crate) fn with_kind(mut self, kind: SpaceKind) -> Combo {
        self.kind = kind;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalDiagram, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, d: &CanonicalDiagram) -> Rational {
        self.terms.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|d| d.degree()).max()
    }

    pub fn max_legs(&self) -> usize {
        self.terms.keys().map(|d| d.legs()).max().unwrap_or(0)
    }

    /// Splits by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<usize, Combo> {
        let mut out: BTreeMap<usize, Combo> = BTreeMap::new();
        for (d, q) in &self.terms {
            out.entry(d.degree())
                .or_insert_with(|| Combo::zero(self.kind))
                .terms
                .insert(d.clone(), q.clone());
        }
        out
    }

    pub fn degree_part(&self, degree: usize) -> Combo {
        self.filter(|d| d.degree() == degree)
    }

    pub fn truncated(&self, max_degree: usize) -> Combo {
        self.filter(|d| d.degree() <= max_degree)
    }

    fn filter(&self, keep: impl Fn(&CanonicalDiagram) -> bool) -> Combo {
        Combo {
            kind: self.kind,
            terms: self
                .terms
                .iter()
                .filter(|(d, _)| keep(d))
                .map(|(d, q)| (d.clone(), q.clone()))
                .collect(),
        }
    }

    /// Rescales so that the first term has coefficient 1.
    pub(crate) fn normalized(&self) -> Combo {
        match self.terms.values().next() {
            None => self.clone(),
            Some(lead) => self.scaled(&lead.recip()),
        }
    }
}

impl fmt::Debug for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.kind)?;
        for (i, (d, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·<{}>", to_fraction_string(q), d)?;
        }
        write!(f, "]")
    }
}
