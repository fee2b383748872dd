//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use jacobi::diagrams::{
    canonical_form, enumerate_diagrams, validate_diagram, CanonicalDiagram, SpaceKind, UniTrivalentDiagram, VertexKind,
};
use jacobi::rational::{factorial, int, one, zero, Rational};
use jacobi::spaces::Combo;
use jacobi::{Error, Limits, Result};
use num_bigint::BigInt;

/// Glues leg `i` of `c` to leg `injection[i]` of `cp` by fusing the two
/// edges through them. Works on the disjoint union by repeated edge
/// fusion; `None` when a loop without vertices appears.
pub fn raw_glue(c: &UniTrivalentDiagram, cp: &UniTrivalentDiagram, injection: &[usize]) -> Option<UniTrivalentDiagram> {
    let n = c.vertex_count();
    let h_off = c.half_edge_count();
    let kinds: Vec<VertexKind> = c.kinds().iter().chain(cp.kinds()).copied().collect();
    let mut slots: Vec<Vec<usize>> = (0..n).map(|v| c.slots(v).to_vec()).collect();
    slots.extend((0..cp.vertex_count()).map(|v| cp.slots(v).iter().map(|h| h + h_off).collect::<Vec<_>>()));
    let mut mate: Vec<Option<usize>> = (0..h_off).map(|h| c.mate(h)).collect();
    mate.extend((0..cp.half_edge_count()).map(|h| cp.mate(h).map(|m| m + h_off)));

    let legs_c = c.legs();
    let legs_cp: Vec<usize> = cp.legs().into_iter().map(|v| v + n).collect();
    let mut removed = vec![false; kinds.len()];
    for (i, &j) in injection.iter().enumerate() {
        let a = slots[legs_c[i]][0];
        let b = slots[legs_cp[j]][0];
        let x = mate[a].expect("paired");
        let y = mate[b].expect("paired");
        if x == b {
            return None;
        }
        mate[a] = None;
        mate[b] = None;
        mate[x] = Some(y);
        mate[y] = Some(x);
        removed[legs_c[i]] = true;
        removed[legs_cp[j]] = true;
    }

    let mut out = UniTrivalentDiagram::chinese();
    let mut hmap = vec![usize::MAX; mate.len()];
    for v in 0..kinds.len() {
        if removed[v] {
            continue;
        }
        let nv = out.add_vertex_with_slots(kinds[v], slots[v].len());
        for (k, &h) in slots[v].iter().enumerate() {
            hmap[h] = out.slots(nv)[k];
        }
    }
    for h in 0..mate.len() {
        if let Some(m) = mate[h] {
            if hmap[h] != usize::MAX && h < m {
                out.join(hmap[h], hmap[m]);
            }
        }
    }
    Some(out)
}

/// Ordered selections of `k` distinct elements of `0..n`.
pub fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in 0..n {
            if !cur.contains(&j) {
                cur.push(j);
                go(k, n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(k, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Ĉ(C′) summed over every injection, one at a time.
pub fn raw_glue_all(c: &UniTrivalentDiagram, cp: &UniTrivalentDiagram) -> Result<Combo> {
    let mut out = Combo::zero(SpaceKind::BPrime);
    for inj in injections(c.legs().len(), cp.legs().len()) {
        let g = raw_glue(c, cp, &inj).ok_or(Error::VertexFreeLoop)?;
        out.add_scaled(&Combo::from_diagram(&g, SpaceKind::BPrime)?, &one())?;
    }
    Ok(out)
}

/// Every nonzero canonical diagram of the given degree and kind, found by
/// trying all pairings of half-edges for every split into external and
/// trivalent vertices.
pub fn brute_force_diagrams(degree: usize, kind: SpaceKind) -> BTreeSet<CanonicalDiagram> {
    let mut out = BTreeSet::new();
    let ext = if kind.has_skeleton() {
        VertexKind::Skeleton
    } else {
        VertexKind::Leg
    };
    for external in 0..=2 * degree {
        let internal = 2 * degree - external;
        let mut base = if kind.has_skeleton() {
            UniTrivalentDiagram::on_interval()
        } else {
            UniTrivalentDiagram::chinese()
        };
        for _ in 0..external {
            base.add_vertex(ext);
        }
        for _ in 0..internal {
            base.add_vertex(VertexKind::Internal);
        }
        let halves = base.half_edge_count();
        if halves % 2 == 1 {
            continue;
        }
        let mut free: Vec<usize> = (0..halves).collect();
        all_pairings(&mut base, &mut free, &mut |d| {
            if validate_diagram(d, kind).is_ok() {
                if let Ok(form) = canonical_form(d) {
                    if let Some((_, c)) = form.into_parts() {
                        out.insert(c);
                    }
                }
            }
        });
    }
    out
}

fn all_pairings(d: &mut UniTrivalentDiagram, free: &mut Vec<usize>, visit: &mut impl FnMut(&UniTrivalentDiagram)) {
    if free.is_empty() {
        visit(d);
        return;
    }
    let a = free.remove(0);
    for i in 0..free.len() {
        let b = free.remove(i);
        d.join(a, b);
        all_pairings(d, free, visit);
        free.insert(i, b);
    }
    free.insert(0, a);
}

/// B_0..=B_n as n!·[xⁿ] of the reciprocal of (eˣ − 1)/x.
pub fn bernoulli_oracle(n: usize) -> Vec<Rational> {
    let e: Vec<Rational> = (0..=n)
        .map(|k| Rational::new(BigInt::from(1), factorial(k as u64 + 1)))
        .collect();
    let mut inv = vec![zero(); n + 1];
    inv[0] = one();
    for k in 1..=n {
        let mut s = zero();
        for j in 1..=k {
            s += &e[j] * &inv[k - j];
        }
        inv[k] = -s;
    }
    inv.iter()
        .enumerate()
        .map(|(k, q)| q * Rational::from_integer(factorial(k as u64)))
        .collect()
}

/// b_{2n} from the classical number.
pub fn expected_modified_bernoulli(two_n: usize, classical: &Rational) -> Rational {
    classical / (int(2 * two_n as i64) * Rational::from_integer(factorial(two_n as u64)))
}

/// Nonzero ℬ′ diagrams of degree 0..=3, the pool random characters are
/// drawn from.
pub fn character_pool() -> &'static Vec<Vec<CanonicalDiagram>> {
    static POOL: OnceLock<Vec<Vec<CanonicalDiagram>>> = OnceLock::new();
    POOL.get_or_init(|| {
        (0..=3)
            .map(|m| enumerate_diagrams(m, SpaceKind::BPrime, &Limits::default()).expect("enumerate"))
            .collect()
    })
}

/// Wheel ω₂ glued into two adjacent, resp. opposite, legs of ω₄.
pub fn adjacent_and_opposite() -> (UniTrivalentDiagram, UniTrivalentDiagram) {
    let w2 = jacobi::diagrams::wheel(2);
    let w4 = jacobi::diagrams::wheel(4);
    (
        raw_glue(&w2, &w4, &[0, 1]).expect("no loop"),
        raw_glue(&w2, &w4, &[0, 2]).expect("no loop"),
    )
}
