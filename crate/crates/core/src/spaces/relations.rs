//! IHX and STU relation instances over a spanning set.

use std::collections::BTreeSet;

use num_traits::One;
use rayon::prelude::*;

use super::Combo;
use crate::config::Limits;
use crate::diagrams::{enumerate_diagrams, CanonicalDiagram, SpaceKind, UniTrivalentDiagram, VertexKind};
use crate::error::Result;
use crate::rational::Rational;

/// All distinct (up to scale) nonzero IHX instances, plus STU instances for
/// interval kinds, generated from every site of every spanning diagram.
pub fn relation_generators(degree: usize, kind: SpaceKind, limits: &Limits) -> Result<Vec<Combo>> {
    let spanning = enumerate_diagrams(degree, kind, limits)?;
    relations_over(&spanning, kind)
}

pub(crate) fn relations_over(spanning: &[CanonicalDiagram], kind: SpaceKind) -> Result<Vec<Combo>> {
    let per_diagram: Vec<Result<Vec<Combo>>> = spanning
        .par_iter()
        .map(|c| {
            let d = c.to_diagram();
            let mut out = ihx_instances(&d, kind)?;
            if kind.has_skeleton() {
                out.extend(stu_instances(&d, kind)?);
            }
            Ok(out)
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in per_diagram {
        for c in r? {
            if !c.is_zero() && seen.insert(c.normalized()) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// One IHX combo per internal edge of `d`.
///
/// With the edge between `u = (e, a, b)` and `v = (f, c, d)` (cyclic orders
/// rotated so the shared edge comes first), the relation is
/// `u(a,b)v(c,d) + u(b,c)v(a,d) + u(c,a)v(b,d) = 0`, i.e. the Jacobi identity
/// `[[A,B],C] + [[B,C],A] + [[C,A],B] = 0` under the Lie weight system.
pub fn ihx_instances(d: &UniTrivalentDiagram, kind: SpaceKind) -> Result<Vec<Combo>> {
    let mut out = Vec::new();
    for u in 0..d.vertex_count() {
        if d.kind(u) != VertexKind::Internal {
            continue;
        }
        for i in 0..3 {
            let e = d.slots(u)[i];
            let f = d.mate_of(e);
            let v = d.owner(f);
            if d.kind(v) != VertexKind::Internal || v == u || e > f {
                continue;
            }
            let j = d.slots(v).iter().position(|&h| h == f).expect("mate slot");
            let us = rotated(d.slots(u), i);
            let vs = rotated(d.slots(v), j);
            let slots = [us[1], us[2], vs[1], vs[2]];
            // ends a, b, c, d are the original occupants of these slots
            let layouts: [[usize; 4]; 3] = [[0, 1, 2, 3], [1, 2, 0, 3], [2, 0, 1, 3]];
            let mut combo = Combo::zero(kind);
            for layout in layouts {
                combo.add_diagram(&rewire(d, &slots, &layout), Rational::one())?;
            }
            out.push(combo);
        }
    }
    Ok(out)
}

/// One STU combo `S − T + U` per skeleton vertex attached to an internal
/// vertex. With the internal vertex `(e, a, b)` and `e` going to the
/// skeleton, `T` places `a` then `b` on the skeleton and `U` places `b`
/// then `a`.
pub fn stu_instances(d: &UniTrivalentDiagram, kind: SpaceKind) -> Result<Vec<Combo>> {
    let mut out = Vec::new();
    let order = match d.skeleton_order() {
        Some(o) => o.to_vec(),
        None => return Ok(out),
    };
    for (pos, &s) in order.iter().enumerate() {
        let hs = d.slots(s)[0];
        let e = d.mate_of(hs);
        let u = d.owner(e);
        if d.kind(u) != VertexKind::Internal {
            continue;
        }
        let i = d.slots(u).iter().position(|&h| h == e).expect("mate slot");
        let us = rotated(d.slots(u), i);
        let (pa, pb) = (d.mate_of(us[1]), d.mate_of(us[2]));
        if d.owner(pa) == u {
            // self-loop at u: S vanishes and T = U
            continue;
        }
        let mut combo = Combo::zero(kind);
        combo.add_diagram(d, Rational::one())?;
        for (first, second, coeff) in [(pa, pb, -Rational::one()), (pb, pa, Rational::one())] {
            let (mut g, hmap) = d.without(|w| w == s || w == u);
            let t1 = g.add_skeleton_vertex();
            let t2 = g.add_skeleton_vertex();
            g.join(t1, hmap[first].expect("kept half-edge"));
            g.join(t2, hmap[second].expect("kept half-edge"));
            let (v1, v2) = (g.owner(t1), g.owner(t2));
            let mut new_order: Vec<usize> = g.skeleton_order().expect("interval")[..order.len() - 1].to_vec();
            new_order.insert(pos, v1);
            new_order.insert(pos + 1, v2);
            g.set_skeleton_order(new_order);
            combo.add_diagram(&g, coeff)?;
        }
        out.push(combo);
    }
    Ok(out)
}

fn rotated(slots: &[usize], i: usize) -> [usize; 3] {
    [slots[i], slots[(i + 1) % 3], slots[(i + 2) % 3]]
}

/// Copy of `d` where the end originally at `slots[layout[k]]` now sits at
/// `slots[k]`.
fn rewire(d: &UniTrivalentDiagram, slots: &[usize; 4], layout: &[usize; 4]) -> UniTrivalentDiagram {
    let mut g = d.clone();
    let partner: Vec<usize> = slots.iter().map(|&s| d.mate_of(s)).collect();
    let mut new_slot = [0usize; 4];
    for (k, &end) in layout.iter().enumerate() {
        new_slot[end] = slots[k];
    }
    for &s in slots {
        g.unpair(s);
    }
    for end in 0..4 {
        let target = match slots.iter().position(|&s| s == partner[end]) {
            Some(other_end) => new_slot[other_end],
            None => partner[end],
        };
        g.join(new_slot[end], target);
    }
    g
}
