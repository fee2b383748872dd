//! Modified Bernoulli numbers, wheels, Ω, the gluing operators Ĉ and the
//! diagram-level wheeling check.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra_maps::{times_product, union_product, Engine};
use crate::config::Limits;
use crate::diagrams::{self, append, CanonicalDiagram, SpaceKind, UniTrivalentDiagram};
use crate::error::{Error, Result};
use crate::rational::{binomial_rational, factorial, int, to_fraction_string, Rational};
use crate::report::{CheckRecord, ResidualTerm};
use crate::spaces::{reduce_combo, Combo};

/// Truncated one-variable series product, coefficients `0..len`.
fn series_mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficient of `x^{2n}` in `(1/2) log(sinh(x/2) / (x/2))`.
pub fn modified_bernoulli(two_n: usize) -> Result<Rational> {
    if two_n == 0 || !two_n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "modified Bernoulli numbers have positive even index, got {two_n}"
        )));
    }
    let len = two_n + 1;
    // u = sinh(x/2)/(x/2) - 1 = sum_{k>=1} x^{2k} / (4^k (2k+1)!)
    let mut u = vec![Rational::zero(); len];
    for k in (2..len).step_by(2) {
        u[k] = Rational::new(BigInt::one(), BigInt::from(2u32).pow(k as u32) * factorial(k as u64 + 1));
    }
    // log(1+u) = sum_{m>=1} (-1)^{m+1} u^m / m; u has order 2
    let mut log = vec![Rational::zero(); len];
    let mut power = u.clone();
    for m in 1..=two_n / 2 {
        let c = Rational::new(BigInt::from(if m % 2 == 1 { 1 } else { -1 }), BigInt::from(m));
        for (l, p) in log.iter_mut().zip(&power) {
            *l += &c * p;
        }
        power = series_mul(&power, &u, len);
    }
    Ok(&log[two_n] / int(2))
}

/// Classical Bernoulli numbers `B_0..=B_n` (with `B_1 = -1/2`) by the
/// recurrence `sum_{k<=m} C(m+1, k) B_k = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += binomial_rational(&int(m as i64 + 1), k as u64) * bk;
        }
        b.push(-acc / int(m as i64 + 1));
    }
    b
}

/// `b_{2n}` next to the classical `B_{2n}` they are tied to.
#[derive(Clone, Debug, PartialEq)]
pub struct BernoulliTable {
    /// Rows `(2n, b_{2n}, B_{2n})`.
    pub rows: Vec<(usize, Rational, Rational)>,
}

impl BernoulliTable {
    pub fn new(max_n: usize) -> Result<BernoulliTable> {
        let classical = bernoulli_numbers(2 * max_n);
        let rows = (1..=max_n)
            .map(|n| Ok((2 * n, modified_bernoulli(2 * n)?, classical[2 * n].clone())))
            .collect::<Result<_>>()?;
        Ok(BernoulliTable { rows })
    }

    /// Rows where `b_{2n} != B_{2n} / (4n (2n)!)`.
    pub fn mismatches(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|(two_n, b, big)| {
                let expected = big / Rational::from_integer(BigInt::from(2 * two_n) * factorial(*two_n as u64));
                *b != expected
            })
            .map(|(two_n, _, _)| *two_n)
            .collect()
    }
}

/// The wheel with `two_n` spokes.
pub fn wheel_diagram(two_n: usize) -> Result<UniTrivalentDiagram> {
    if two_n == 0 || !two_n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "Ω uses even wheels only, got {two_n} (odd wheels vanish; use diagrams::wheel to build one)"
        )));
    }
    Ok(diagrams::wheel(two_n))
}

/// Ω truncated at `max_degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaElement {
    pub max_degree: usize,
    pub value: Combo,
}

impl OmegaElement {
    /// Ω̂ applied to `target`, keeping output degrees up to `max_degree`.
    /// Each term of Ω has as many legs as its degree, so the truncation
    /// must reach the largest leg count in `target`.
    pub fn hat(&self, target: &Combo, max_degree: usize) -> Result<Combo> {
        hat_apply(&self.value, Some(self.max_degree), target, max_degree)
    }
}

pub fn omega_series(max_degree: usize, limits: &Limits) -> Result<OmegaElement> {
    Limits::check("Ω truncation degree", max_degree, limits.omega_cap)?;
    let mut log = Combo::zero(SpaceKind::BPrime);
    for two_n in (2..=max_degree).step_by(2) {
        let w = Combo::from_diagram(&wheel_diagram(two_n)?, SpaceKind::BPrime)?;
        log.add_scaled(&w, &modified_bernoulli(two_n)?)?;
    }
    let mut value = Combo::one(SpaceKind::BPrime);
    let mut power = Combo::one(SpaceKind::BPrime);
    for k in 1..=max_degree / 2 {
        power = union_product(&power, &log)?.truncated(max_degree).scaled(&Rational::new(
            BigInt::one(),
            BigInt::from(k),
        ));
        value.add_scaled(&power, &Rational::one())?;
    }
    Ok(OmegaElement { max_degree, value })
}

/// Ĉ(C′): the sum over all injections of the legs of `c` into the legs of
/// `cp`, each leg pair fused into an internal edge.
pub fn glue_all_legs(c: &UniTrivalentDiagram, cp: &UniTrivalentDiagram) -> Result<Combo> {
    let mut out = Combo::zero(SpaceKind::BPrime);
    for_each_gluing(c, cp, |g, n| out.add_diagram(g, Rational::from_integer(BigInt::from(n))))?;
    Ok(out)
}

/// Number of injections `glue_all_legs` sums over.
pub fn gluing_count(c: &UniTrivalentDiagram, cp: &UniTrivalentDiagram) -> Result<usize> {
    let mut n = 0;
    for_each_gluing(c, cp, |_, k| {
        n += k;
        Ok(())
    })?;
    Ok(n)
}

/// Position of half-edge `h` among the slots of its vertex.
fn slot_position(d: &UniTrivalentDiagram, h: usize) -> usize {
    d.slots(d.owner(h)).iter().position(|&x| x == h).expect("half-edge in its vertex")
}

/// Whether the order-preserving map `a[i] ↦ b[i]` is an isomorphism of the
/// two components, cyclic orders included.
fn same_layout(d: &UniTrivalentDiagram, a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let index_in = |list: &[usize], v: usize| list.binary_search(&v).ok();
    a.iter().zip(b).all(|(&u, &v)| {
        d.kind(u) == d.kind(v)
            && d.slots(u).iter().zip(d.slots(v)).all(|(&hu, &hv)| {
                let (mu, mv) = (d.mate_of(hu), d.mate_of(hv));
                index_in(a, d.owner(mu)) == index_in(b, d.owner(mv)) && slot_position(d, mu) == slot_position(d, mv)
            })
    })
}

/// Leg symmetries of a target visible without canonicalization: the two
/// legs of a strut swap, and components with identical layout permute as
/// blocks. Returns per component its class, whether it is a strut, and its
/// legs as positions in `legs()` order.
fn leg_blocks(d: &UniTrivalentDiagram) -> Vec<(usize, bool, Vec<usize>)> {
    let legs = d.legs();
    let comps = d.components();
    let mut classes: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for (i, comp) in comps.iter().enumerate() {
        let class = (0..i).find(|&j| same_layout(d, &comps[j], comp)).map_or(i, |j| classes[j]);
        classes.push(class);
        let positions: Vec<usize> = comp.iter().filter_map(|v| legs.binary_search(v).ok()).collect();
        let strut = comp.len() == 2 && positions.len() == 2;
        if !positions.is_empty() {
            out.push((class, strut, positions));
        }
    }
    out.sort_by_key(|(class, _, _)| *class);
    out
}

/// Calls `visit` once per orbit of injections under the target's visible
/// leg symmetries, with the orbit size.
fn for_each_gluing(
    c: &UniTrivalentDiagram,
    cp: &UniTrivalentDiagram,
    mut visit: impl FnMut(&UniTrivalentDiagram, usize) -> Result<()>,
) -> Result<()> {
    for d in [c, cp] {
        if !d.is_chinese() {
            return Err(Error::KindMismatch {
                expected: "Chinese character".into(),
                found: "skeleton diagram".into(),
            });
        }
    }
    let mut joined = c.clone();
    let voff = c.vertex_count();
    append(&mut joined, cp);
    let from: Vec<usize> = c.legs().iter().map(|&v| joined.slots(v)[0]).collect();
    let into: Vec<usize> = cp.legs().iter().map(|&v| joined.slots(v + voff)[0]).collect();
    if from.len() > into.len() {
        return Ok(());
    }
    let blocks = leg_blocks(cp);
    let mut orbits: HashMap<Vec<u32>, (usize, Vec<usize>)> = HashMap::new();
    let mut used = vec![false; into.len()];
    let mut chosen = Vec::with_capacity(from.len());
    let mut pre = vec![u32::MAX; into.len()];
    injections(&mut used, &mut chosen, from.len(), &mut |chosen| {
        pre.iter_mut().for_each(|p| *p = u32::MAX);
        for (i, &t) in chosen.iter().enumerate() {
            pre[t] = i as u32;
        }
        let mut key = Vec::with_capacity(into.len() + blocks.len());
        let mut start = 0;
        while start < blocks.len() {
            let class = blocks[start].0;
            let end = (start..blocks.len()).find(|&k| blocks[k].0 != class).unwrap_or(blocks.len());
            let mut tuples: Vec<Vec<u32>> = blocks[start..end]
                .iter()
                .map(|(_, strut, pos)| {
                    let mut t: Vec<u32> = pos.iter().map(|&p| pre[p]).collect();
                    if *strut {
                        t.sort_unstable();
                    }
                    t
                })
                .collect();
            tuples.sort_unstable();
            for t in tuples {
                key.extend(t);
            }
            key.push(u32::MAX - 1);
            start = end;
        }
        orbits.entry(key).or_insert_with(|| (0, chosen.to_vec())).0 += 1;
        Ok(())
    })?;
    let mut orbits: Vec<(Vec<u32>, (usize, Vec<usize>))> = orbits.into_iter().collect();
    orbits.sort_unstable();
    for (_, (n, chosen)) in orbits {
        let g = fuse(&joined, &from, &chosen.iter().map(|&j| into[j]).collect::<Vec<_>>())?;
        visit(&g, n)?;
    }
    Ok(())
}

fn injections(
    used: &mut [bool],
    chosen: &mut Vec<usize>,
    k: usize,
    f: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if chosen.len() == k {
        return f(chosen);
    }
    for j in 0..used.len() {
        if !used[j] {
            used[j] = true;
            chosen.push(j);
            injections(used, chosen, k, f)?;
            chosen.pop();
            used[j] = false;
        }
    }
    Ok(())
}

/// Removes the leg half-edges `a[i]` and `b[i]` (pairwise fused) and joins
/// what they were attached to, following chains through fused legs.
fn fuse(d: &UniTrivalentDiagram, a: &[usize], b: &[usize]) -> Result<UniTrivalentDiagram> {
    let mut through: HashMap<usize, usize> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        through.insert(x, y);
        through.insert(y, x);
    }
    let removed_vertex: Vec<bool> = (0..d.vertex_count())
        .map(|v| d.slots(v).iter().any(|h| through.contains_key(h)))
        .collect();
    let (mut g, hmap) = d.without(|v| removed_vertex[v]);
    let mut visited = 0;
    for h in 0..d.half_edge_count() {
        let Some(nh) = hmap[h] else { continue };
        let mut y = d.mate_of(h);
        if !through.contains_key(&y) {
            continue;
        }
        while let Some(&z) = through.get(&y) {
            visited += 1;
            y = d.mate_of(z);
        }
        g.join(nh, hmap[y].expect("chain ends at a kept half-edge"));
    }
    // each chain is walked from both ends
    if visited != through.len() {
        return Err(Error::VertexFreeLoop);
    }
    Ok(g)
}

/// The operator Ĉ for a combo `c`, applied to `target` and truncated at
/// `max_degree`. `leg_truncation = Some(n)` declares `c` to be a series
/// known completely for all terms with at most `n` legs; it must cover
/// every leg count occurring in `target`.
pub fn hat_apply(c: &Combo, leg_truncation: Option<usize>, target: &Combo, max_degree: usize) -> Result<Combo> {
    c.expect_kind(&[SpaceKind::BPrime, SpaceKind::B])?;
    target.expect_kind(&[SpaceKind::BPrime, SpaceKind::B])?;
    if let Some(n) = leg_truncation {
        let required = target.max_legs();
        if n < required {
            return Err(Error::InsufficientTruncation {
                available: n,
                required,
            });
        }
    }
    let mut out = Combo::zero(SpaceKind::BPrime);
    for (dt, qt) in target.terms() {
        let gt = dt.to_diagram();
        for (dc, qc) in c.terms() {
            if dc.legs() > dt.legs() || dt.degree() + dc.degree() - dc.legs() > max_degree {
                continue;
            }
            out.add_scaled(&glue_all_legs(&dc.to_diagram(), &gt)?, &(qt * qc))?;
        }
    }
    Ok(out)
}

/// Checks `χ(Ω̂(C₁ ∪ C₂)) = χ(Ω̂(C₁)) × χ(Ω̂(C₂))` in 𝒜′ coordinates for all
/// ordered pairs of ℬ′ basis diagrams with total degree at most
/// `max_degree`. The right side is evaluated on coordinates: each factor
/// is reduced to the 𝒜′ basis and the products of basis diagrams are
/// reduced once and reused.
pub fn verify_wheeling(max_degree: usize, engine: &Engine) -> Result<Vec<CheckRecord>> {
    let limits = engine.limits();
    Limits::check("wheeling degree", max_degree, limits.wheeling_cap)?;
    limits.check_degree(max_degree)?;
    let omega = omega_series(2 * max_degree, limits)?;
    let registry = engine.registry();

    let mut basis: Vec<Vec<CanonicalDiagram>> = Vec::new();
    for d in 0..=max_degree {
        basis.push(registry.get(SpaceKind::BPrime, d)?.basis().cloned().collect());
        registry.get(SpaceKind::APrime, d)?;
    }

    let wheeled = |c: &Combo| -> Result<Vec<Rational>> {
        let deg = c.max_degree().unwrap_or(0);
        engine.chi_coords(&omega.hat(c, max_degree)?, deg)
    };
    let single: Vec<Vec<Vec<Rational>>> = basis
        .iter()
        .map(|ds| {
            ds.iter()
                .map(|d| wheeled(&Combo::term(SpaceKind::BPrime, d.clone(), Rational::one())))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;

    let products: Mutex<HashMap<(usize, usize, usize, usize), Vec<Rational>>> = Mutex::new(HashMap::new());
    let basis_product = |d1: usize, i: usize, d2: usize, j: usize| -> Result<Vec<Rational>> {
        if let Some(v) = products.lock().expect("product memo").get(&(d1, i, d2, j)) {
            return Ok(v.clone());
        }
        let a1 = registry.get(SpaceKind::APrime, d1)?;
        let a2 = registry.get(SpaceKind::APrime, d2)?;
        let x = Combo::term(SpaceKind::APrime, a1.basis_element(i).clone(), Rational::one());
        let y = Combo::term(SpaceKind::APrime, a2.basis_element(j).clone(), Rational::one());
        let v = reduce_combo(&times_product(&x, &y)?, &*registry.get(SpaceKind::APrime, d1 + d2)?)?;
        products.lock().expect("product memo").insert((d1, i, d2, j), v.clone());
        Ok(v)
    };

    let mut pairs = Vec::new();
    for d1 in 0..=max_degree {
        for d2 in 0..=max_degree - d1 {
            for i in 0..basis[d1].len() {
                for j in 0..basis[d2].len() {
                    pairs.push((d1, i, d2, j));
                }
            }
        }
    }

    let records = pairs
        .par_iter()
        .map(|&(d1, i, d2, j)| {
            let (c1, c2) = (&basis[d1][i], &basis[d2][j]);
            let inputs = [
                ("c1", c1.bytes().to_string()),
                ("c2", c2.bytes().to_string()),
                ("degree", (d1 + d2).to_string()),
            ];
            CheckRecord::run(format!("wheeling[{d1}.{i} x {d2}.{j}]"), &inputs, || {
                let union = union_product(
                    &Combo::term(SpaceKind::BPrime, c1.clone(), Rational::one()),
                    &Combo::term(SpaceKind::BPrime, c2.clone(), Rational::one()),
                )?;
                let lhs = wheeled(&union)?;
                let a2 = registry.get(SpaceKind::APrime, d1 + d2)?;
                let mut rhs = vec![Rational::zero(); a2.dimension()];
                for (p, x) in single[d1][i].iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (q, y) in single[d2][j].iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let xy = x * y;
                        for (r, z) in basis_product(d1, p, d2, q)?.iter().enumerate() {
                            rhs[r] += &xy * z;
                        }
                    }
                }
                Ok(lhs
                    .iter()
                    .zip(&rhs)
                    .enumerate()
                    .filter(|(_, (l, r))| l != r)
                    .map(|(r, (l, rr))| ResidualTerm {
                        term: a2.basis_element(r).bytes().to_string(),
                        coefficient: to_fraction_string(&(l - rr)),
                    })
                    .collect())
            })
        })
        .collect();
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{canonical_form, strut, theta};
    use crate::rational::rat;

    #[test]
    fn first_modified_bernoulli_numbers() {
        assert_eq!(modified_bernoulli(2).unwrap(), rat(1, 48));
        assert_eq!(modified_bernoulli(4).unwrap(), rat(-1, 5760));
        assert_eq!(modified_bernoulli(6).unwrap(), rat(1, 362880));
        assert!(modified_bernoulli(3).is_err());
        assert!(modified_bernoulli(0).is_err());
    }

    #[test]
    fn classical_bernoulli() {
        let b = bernoulli_numbers(8);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[8], rat(-1, 30));
        assert!(BernoulliTable::new(8).unwrap().mismatches().is_empty());
    }

    #[test]
    fn glue_wheel_into_strut() {
        let g = glue_all_legs(&diagrams::wheel(2), &strut()).unwrap();
        let t = canonical_form(&theta()).unwrap().into_parts().unwrap().1;
        assert_eq!(g.len(), 1);
        assert_eq!(num_traits::Signed::abs(&g.coefficient(&t)), int(2));
        assert_eq!(gluing_count(&diagrams::wheel(2), &strut()).unwrap(), 2);
    }

    #[test]
    fn strut_into_strut_closes_a_bare_loop() {
        assert_eq!(glue_all_legs(&strut(), &strut()), Err(Error::VertexFreeLoop));
    }

    #[test]
    fn omega_low_degrees() {
        let l = Limits::default();
        assert_eq!(omega_series(0, &l).unwrap().value, Combo::one(SpaceKind::BPrime));
        let o = omega_series(2, &l).unwrap().value;
        let w2 = Combo::from_diagram(&diagrams::wheel(2), SpaceKind::BPrime).unwrap();
        let expected = Combo::one(SpaceKind::BPrime).plus(&w2.scaled(&rat(1, 48))).unwrap();
        assert_eq!(o, expected);
    }

    #[test]
    fn hat_of_empty_is_identity() {
        let s = Combo::from_diagram(&strut(), SpaceKind::BPrime).unwrap();
        let one = Combo::one(SpaceKind::BPrime);
        assert_eq!(hat_apply(&one, None, &s, 5).unwrap(), s);
    }

    #[test]
    fn truncation_must_cover_target_legs() {
        let o = omega_series(2, &Limits::default()).unwrap();
        let s = Combo::from_diagram(&strut(), SpaceKind::BPrime).unwrap();
        let ss = union_product(&s, &s).unwrap();
        assert!(matches!(
            o.hat(&ss, 4),
            Err(Error::InsufficientTruncation { available: 2, required: 4 })
        ));
    }
}
