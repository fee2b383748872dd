//! Spanning-set generation.
//!
//! For each split of the `2·degree` vertices into external (legs or
//! skeleton vertices) and internal ones, half-edges are paired one at a
//! time, always extending the lowest unpaired half-edge of an already
//! touched vertex. Untouched legs are interchangeable, as are untouched
//! internal vertices and the free slots of a single vertex, so only one
//! representative of each is tried. Skeleton vertices are distinguishable
//! and all are tried. Self-loops at internal vertices are skipped because
//! they vanish by AS. Every leaf is canonicalized and deduplicated.

use std::collections::BTreeSet;

use super::{canonical_form, validate_diagram, CanonicalDiagram, SpaceKind, UniTrivalentDiagram, VertexKind};
use crate::config::Limits;
use crate::error::Result;

const NONE: usize = usize::MAX;

/// All distinct nonzero canonical diagrams of the given degree and kind,
/// sorted by their bytes.
pub fn enumerate_diagrams(degree: usize, kind: SpaceKind, limits: &Limits) -> Result<Vec<CanonicalDiagram>> {
    limits.check_degree(degree)?;
    let mut out = BTreeSet::new();
    let total = 2 * degree;
    for external in 0..=total {
        let internal = total - external;
        let ext_kind = if kind.has_skeleton() {
            VertexKind::Skeleton
        } else {
            VertexKind::Leg
        };
        let mut kinds = vec![ext_kind; external];
        kinds.extend(std::iter::repeat_n(VertexKind::Internal, internal));
        let mut g = Generator::new(kinds, kind);
        g.recurse(&mut out)?;
    }
    Ok(out.into_iter().collect())
}

struct Generator {
    kinds: Vec<VertexKind>,
    first: Vec<usize>,
    owner: Vec<usize>,
    mate: Vec<usize>,
    touched: Vec<bool>,
    space: SpaceKind,
}

impl Generator {
    fn new(kinds: Vec<VertexKind>, space: SpaceKind) -> Self {
        let mut first = Vec::new();
        let mut owner = Vec::new();
        for (v, k) in kinds.iter().enumerate() {
            first.push(owner.len());
            for _ in 0..k.slot_count() {
                owner.push(v);
            }
        }
        let n = owner.len();
        Generator {
            touched: vec![false; kinds.len()],
            kinds,
            first,
            owner,
            mate: vec![NONE; n],
            space,
        }
    }

    fn free_slot(&self, v: usize) -> Option<usize> {
        let f = self.first[v];
        (f..f + self.kinds[v].slot_count()).find(|&h| self.mate[h] == NONE)
    }

    fn recurse(&mut self, out: &mut BTreeSet<CanonicalDiagram>) -> Result<()> {
        let n = self.kinds.len();
        let mut h = (0..n)
            .filter(|&v| self.touched[v])
            .find_map(|v| self.free_slot(v));
        let mut newly_touched = NONE;
        if h.is_none() {
            match (0..n).find(|&v| !self.touched[v]) {
                None => return self.leaf(out),
                Some(v) => {
                    self.touched[v] = true;
                    newly_touched = v;
                    h = Some(self.first[v]);
                }
            }
        }
        let h = h.expect("some half-edge to extend");
        let hv = self.owner[h];

        let mut candidates = Vec::new();
        let mut seen_untouched_leg = false;
        let mut seen_untouched_internal = false;
        for w in 0..n {
            if self.touched[w] {
                if w == hv && self.kinds[w] == VertexKind::Internal {
                    continue;
                }
                if let Some(c) = self.free_slot(w) {
                    if c != h {
                        candidates.push(c);
                    }
                }
            } else {
                match self.kinds[w] {
                    VertexKind::Skeleton => candidates.push(self.first[w]),
                    VertexKind::Leg if !seen_untouched_leg => {
                        seen_untouched_leg = true;
                        candidates.push(self.first[w]);
                    }
                    VertexKind::Internal if !seen_untouched_internal => {
                        seen_untouched_internal = true;
                        candidates.push(self.first[w]);
                    }
                    _ => {}
                }
            }
        }

        for c in candidates {
            let w = self.owner[c];
            let was = self.touched[w];
            self.touched[w] = true;
            self.mate[h] = c;
            self.mate[c] = h;
            self.recurse(out)?;
            self.mate[h] = NONE;
            self.mate[c] = NONE;
            self.touched[w] = was;
        }
        if newly_touched != NONE {
            self.touched[newly_touched] = false;
        }
        Ok(())
    }

    fn leaf(&self, out: &mut BTreeSet<CanonicalDiagram>) -> Result<()> {
        let mut d = if self.space.has_skeleton() {
            UniTrivalentDiagram::on_interval()
        } else {
            UniTrivalentDiagram::chinese()
        };
        for &k in &self.kinds {
            d.add_vertex(k);
        }
        for h in 0..self.mate.len() {
            if h < self.mate[h] {
                d.join(h, self.mate[h]);
            }
        }
        if validate_diagram(&d, self.space).is_err() {
            return Ok(());
        }
        if let Some((_, c)) = canonical_form(&d)?.into_parts() {
            out.insert(c);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{strut, theta};

    fn canon(d: &UniTrivalentDiagram) -> CanonicalDiagram {
        canonical_form(d).unwrap().into_parts().unwrap().1
    }

    #[test]
    fn degree_zero_is_the_empty_diagram() {
        for kind in SpaceKind::ALL {
            let ds = enumerate_diagrams(0, kind, &Limits::default()).unwrap();
            assert_eq!(ds, vec![CanonicalDiagram::empty(kind.has_skeleton())]);
        }
    }

    #[test]
    fn degree_one_chinese_characters() {
        let l = Limits::default();
        let mut expected = vec![canon(&strut()), canon(&theta())];
        expected.sort();
        assert_eq!(enumerate_diagrams(1, SpaceKind::BPrime, &l).unwrap(), expected);
        assert_eq!(enumerate_diagrams(1, SpaceKind::B, &l).unwrap(), vec![canon(&strut())]);
    }

    #[test]
    fn cap_is_enforced() {
        let l = Limits::default();
        assert!(enumerate_diagrams(7, SpaceKind::BPrime, &l).is_err());
    }

    #[test]
    fn output_is_sorted_and_deterministic() {
        let l = Limits::default();
        let a = enumerate_diagrams(3, SpaceKind::APrime, &l).unwrap();
        let b = enumerate_diagrams(3, SpaceKind::APrime, &l).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }
}
