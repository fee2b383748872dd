//! Exact elimination of the relation matrix over a spanning set.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::relations::relations_over;
use super::Combo;
use crate::config::Limits;
use crate::diagrams::{enumerate_diagrams, CanonicalDiagram, SpaceKind};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Sparse row: strictly increasing column indices, nonzero entries.
pub(crate) type SparseRow = Vec<(usize, Rational)>;

/// One graded piece of a diagram space modulo its relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramSpace {
    kind: SpaceKind,
    degree: usize,
    spanning: Vec<CanonicalDiagram>,
    index: HashMap<CanonicalDiagram, usize>,
    basis: Vec<usize>,
    /// Per spanning diagram: coordinates over `basis` (positions into it).
    reduction: Vec<SparseRow>,
}

impl DiagramSpace {
    pub(crate) fn from_parts(
        kind: SpaceKind,
        degree: usize,
        spanning: Vec<CanonicalDiagram>,
        basis: Vec<usize>,
        reduction: Vec<SparseRow>,
    ) -> DiagramSpace {
        let index = spanning.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        DiagramSpace {
            kind,
            degree,
            spanning,
            index,
            basis,
            reduction,
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn spanning(&self) -> &[CanonicalDiagram] {
        &self.spanning
    }

    /// Indices into [`spanning`](Self::spanning) of the basis diagrams.
    pub fn basis_indices(&self) -> &[usize] {
        &self.basis
    }

    pub fn basis(&self) -> impl Iterator<Item = &CanonicalDiagram> + '_ {
        self.basis.iter().map(move |&i| &self.spanning[i])
    }

    pub fn basis_element(&self, i: usize) -> &CanonicalDiagram {
        &self.spanning[self.basis[i]]
    }

    pub(crate) fn reduction_rows(&self) -> &[SparseRow] {
        &self.reduction
    }

    /// Coordinates of a spanning diagram over the basis.
    pub fn reduce_diagram(&self, d: &CanonicalDiagram) -> Result<&[(usize, Rational)]> {
        match self.index.get(d) {
            Some(&i) => Ok(&self.reduction[i]),
            None => Err(Error::NotInSpanningSet {
                degree: self.degree,
                kind: self.kind.name().into(),
                diagram: d.bytes().into(),
            }),
        }
    }

    /// The combo `Σ coords[i] · basis[i]`.
    pub fn combo_from_coords(&self, coords: &[Rational]) -> Combo {
        let mut out = Combo::zero(self.kind);
        for (i, q) in coords.iter().enumerate() {
            out.add_term(self.basis_element(i).clone(), q.clone());
        }
        out
    }
}

/// Builds the quotient by exact elimination. Columns follow the spanning
/// order (bytes), and each relation's pivot is its smallest column, so the
/// lexicographically smallest diagrams are eliminated first and the result
/// is the unique reduced echelon form of the relation space.
pub fn build_quotient(degree: usize, kind: SpaceKind, limits: &Limits) -> Result<DiagramSpace> {
    let spanning = enumerate_diagrams(degree, kind, limits)?;
    let relations = relations_over(&spanning, kind)?;
    let index: HashMap<&CanonicalDiagram, usize> = spanning.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut rows: Vec<SparseRow> = Vec::with_capacity(relations.len());
    for r in &relations {
        let mut row = SparseRow::new();
        for (d, q) in r.terms() {
            let col = *index.get(d).ok_or_else(|| {
                Error::InvariantViolation(format!("relation term outside the spanning set: {d}"))
            })?;
            row.push((col, q.clone()));
        }
        row.sort_by_key(|(c, _)| *c);
        rows.push(row);
    }
    let (basis, reduction) = eliminate(spanning.len(), rows);
    Ok(DiagramSpace::from_parts(kind, degree, spanning, basis, reduction))
}

/// Reduced echelon form with smallest-column pivots. Returns the free
/// columns and, for every column, its expression over the free columns.
pub(crate) fn eliminate(ncols: usize, rows: Vec<SparseRow>) -> (Vec<usize>, Vec<SparseRow>) {
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut row in rows {
        while let Some((lead, _)) = row.first() {
            match pivots.get(lead) {
                Some(p) => {
                    let f = row[0].1.clone();
                    row = axpy(&row, &-f, p);
                }
                None => break,
            }
        }
        if let Some((lead, q)) = row.first().cloned() {
            let inv = q.recip();
            for e in row.iter_mut() {
                e.1 *= &inv;
            }
            pivots.insert(lead, row);
        }
    }

    // back substitution, largest pivot first
    let keys: Vec<usize> = pivots.keys().rev().copied().collect();
    for c in keys {
        let mut row = pivots.remove(&c).expect("pivot row");
        loop {
            let next = row
                .iter()
                .skip(1)
                .find(|(j, _)| pivots.contains_key(j))
                .map(|(j, q)| (*j, q.clone()));
            match next {
                Some((j, q)) => row = axpy(&row, &-q, &pivots[&j]),
                None => break,
            }
        }
        pivots.insert(c, row);
    }

    let basis: Vec<usize> = (0..ncols).filter(|c| !pivots.contains_key(c)).collect();
    let position: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let reduction = (0..ncols)
        .map(|c| match pivots.get(&c) {
            None => vec![(position[&c], Rational::one())],
            Some(row) => row[1..].iter().map(|(j, q)| (position[j], -q.clone())).collect(),
        })
        .collect();
    (basis, reduction)
}

/// `a + f·b` for sorted sparse rows.
pub(crate) fn axpy(a: &SparseRow, f: &Rational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, f * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + f * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Coordinates of a homogeneous combo of the space's degree and kind.
pub fn reduce_combo(c: &Combo, s: &DiagramSpace) -> Result<Vec<Rational>> {
    if c.kind() != s.kind {
        return Err(Error::KindMismatch {
            expected: s.kind.name().into(),
            found: c.kind().name().into(),
        });
    }
    let mut out = vec![Rational::zero(); s.dimension()];
    for (d, q) in c.terms() {
        for (i, r) in s.reduce_diagram(d)? {
            out[*i] += q * r;
        }
    }
    Ok(out)
}

pub fn space_dimension(degree: usize, kind: SpaceKind, limits: &Limits) -> Result<usize> {
    Ok(build_quotient(degree, kind, limits)?.dimension())
}
