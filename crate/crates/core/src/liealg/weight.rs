//! The weight system T_g: one structure tensor per trivalent vertex, one
//! inverse metric per internal edge, legs contracted with a vector of
//! coordinates.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{One, Zero};

use super::poly::{Poly, Truncation, XSeries};
use super::MetrizedLie;
use crate::diagrams::{canonical_form, CanonicalDiagram, CanonicalForm, UniTrivalentDiagram, VertexKind};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::spaces::Combo;

/// How a leg is read off as a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LegForm {
    /// κ^ħ∘T_g: a polynomial function of `X ∈ g` in the coordinates `X^c`;
    /// a degree-m term with k legs carries ħ^{m−k}.
    Dual,
    /// T_g itself, valued in S(g) read as polynomials in the coordinates
    /// `ξ_a` of g*; a degree-m term carries ħ^m.
    Symmetric,
}

/// A sparse tensor whose free indices are labelled by edge ids.
struct Tensor {
    labels: Vec<usize>,
    entries: HashMap<Vec<u16>, Poly>,
}

impl Tensor {
    fn contract(&self, other: &Tensor) -> Tensor {
        let shared: Vec<usize> = self.labels.iter().copied().filter(|l| other.labels.contains(l)).collect();
        let pos = |t: &Tensor, l: usize| t.labels.iter().position(|&x| x == l).unwrap();
        let sa: Vec<usize> = shared.iter().map(|&l| pos(self, l)).collect();
        let sb: Vec<usize> = shared.iter().map(|&l| pos(other, l)).collect();
        let fa: Vec<usize> = (0..self.labels.len()).filter(|i| !sa.contains(i)).collect();
        let fb: Vec<usize> = (0..other.labels.len()).filter(|i| !sb.contains(i)).collect();
        let mut grouped: HashMap<Vec<u16>, Vec<(Vec<u16>, &Poly)>> = HashMap::new();
        for (k, p) in &other.entries {
            let key = sb.iter().map(|&i| k[i]).collect();
            grouped.entry(key).or_default().push((fb.iter().map(|&i| k[i]).collect(), p));
        }
        let mut entries: HashMap<Vec<u16>, Poly> = HashMap::new();
        for (k, p) in &self.entries {
            let key: Vec<u16> = sa.iter().map(|&i| k[i]).collect();
            let Some(matches) = grouped.get(&key) else { continue };
            let free: Vec<u16> = fa.iter().map(|&i| k[i]).collect();
            for (rest, q) in matches {
                let mut idx = free.clone();
                idx.extend_from_slice(rest);
                let prod = p.mul(q);
                let slot = entries.entry(idx).or_insert_with(|| Poly::zero(prod.nvars()));
                slot.add_scaled(&prod, &Rational::one());
            }
        }
        entries.retain(|_, p| !p.is_zero());
        let mut labels: Vec<usize> = fa.iter().map(|&i| self.labels[i]).collect();
        labels.extend(fb.iter().map(|&i| other.labels[i]));
        Tensor { labels, entries }
    }

    /// Applies the inverse metric to the index labelled `label`.
    fn raise(&mut self, label: usize, ginv: &[Vec<(usize, Rational)>]) {
        let at = self.labels.iter().position(|&l| l == label).expect("label present");
        let mut entries: HashMap<Vec<u16>, Poly> = HashMap::new();
        for (k, p) in &self.entries {
            for (a, q) in &ginv[k[at] as usize] {
                let mut k2 = k.clone();
                k2[at] = *a as u16;
                let slot = entries.entry(k2).or_insert_with(|| Poly::zero(p.nvars()));
                slot.add_scaled(p, q);
            }
        }
        entries.retain(|_, p| !p.is_zero());
        self.entries = entries;
    }
}

/// Evaluates T_g on diagrams for one algebra and leg form, memoizing the
/// polynomial of every connected component by its canonical form.
pub struct WeightSystem<'a> {
    lie: &'a MetrizedLie,
    form: LegForm,
    /// `V^c` for a leg: `X^c` or `Ξ^c = g^{cb} ξ_b`.
    leg_vector: Vec<Poly>,
    structure: Vec<([u16; 3], Rational)>,
    ginv: Vec<Vec<(usize, Rational)>>,
    memo: Mutex<HashMap<CanonicalDiagram, Poly>>,
}

impl<'a> WeightSystem<'a> {
    pub fn new(lie: &'a MetrizedLie, form: LegForm) -> Result<WeightSystem<'a>> {
        let d = lie.dim;
        let inv = lie.inverse_metric()?;
        let ginv: Vec<Vec<(usize, Rational)>> = inv
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, q)| !q.is_zero()).map(|(j, q)| (j, q.clone())).collect())
            .collect();
        let leg_vector = match form {
            LegForm::Dual => (0..d).map(|c| Poly::var(d, c)).collect(),
            LegForm::Symmetric => (0..d).map(|c| Poly::linear(&inv[c])).collect(),
        };
        let mut structure = Vec::new();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let q = lie.f(a, b, c);
                    if !q.is_zero() {
                        structure.push(([a as u16, b as u16, c as u16], q.clone()));
                    }
                }
            }
        }
        Ok(WeightSystem {
            lie,
            form,
            leg_vector,
            structure,
            ginv,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn lie(&self) -> &MetrizedLie {
        self.lie
    }

    pub fn form(&self) -> LegForm {
        self.form
    }

    fn hbar_power(&self, degree: usize, legs: usize) -> i32 {
        match self.form {
            LegForm::Dual => degree as i32 - legs as i32,
            LegForm::Symmetric => degree as i32,
        }
    }

    /// Weight of a whole Chinese character, with its ħ-power.
    pub fn diagram(&self, d: &UniTrivalentDiagram) -> Result<XSeries> {
        if !d.is_chinese() {
            return Err(Error::KindMismatch {
                expected: "Chinese character".into(),
                found: "skeleton diagram".into(),
            });
        }
        let degree = d.vertex_count() / 2;
        let legs = d.count(VertexKind::Leg);
        let p = self.polynomial(d)?;
        Ok(XSeries::from_poly(self.hbar_power(degree, legs), p, Truncation::Exact))
    }

    /// The polynomial part of the weight, product over components.
    pub fn polynomial(&self, d: &UniTrivalentDiagram) -> Result<Poly> {
        let mut p = Poly::one(self.lie.dim);
        for comp in d.components() {
            let keep: Vec<bool> = (0..d.vertex_count()).map(|v| comp.binary_search(&v).is_ok()).collect();
            let (part, _) = d.without(|v| !keep[v]);
            let (sign, canon) = match canonical_form(&part)? {
                CanonicalForm::Zero => return Ok(Poly::zero(self.lie.dim)),
                CanonicalForm::Nonzero { sign, diagram } => (sign, diagram),
            };
            let cached = self.memo.lock().expect("weight memo").get(&canon).cloned();
            let w = match cached {
                Some(w) => w,
                None => {
                    let w = self.connected(&canon.to_diagram())?;
                    self.memo.lock().expect("weight memo").insert(canon, w.clone());
                    w
                }
            };
            p = p.mul(&w);
            if sign < 0 {
                p = p.scaled(&-Rational::one());
            }
            if p.is_zero() {
                break;
            }
        }
        Ok(p)
    }

    /// Weight of a connected diagram by greedy pairwise contraction.
    fn connected(&self, d: &UniTrivalentDiagram) -> Result<Poly> {
        let dim = self.lie.dim;
        let n = d.vertex_count();
        if n == 0 {
            return Ok(Poly::one(dim));
        }
        let internal: Vec<usize> = (0..n).filter(|&v| d.kind(v) == VertexKind::Internal).collect();
        if internal.is_empty() {
            // a strut: g_{cd} V^c V^d
            let mut p = Poly::zero(dim);
            for a in 0..dim {
                for b in 0..dim {
                    let q = &self.lie.metric[a][b];
                    if !q.is_zero() {
                        p.add_scaled(&self.leg_vector[a].mul(&self.leg_vector[b]), q);
                    }
                }
            }
            return Ok(p);
        }
        let mut tensors = Vec::new();
        for &v in &internal {
            let slots = d.slots(v);
            let mates: Vec<usize> = slots
                .iter()
                .map(|&h| d.mate(h).ok_or_else(|| Error::MalformedDiagram(format!("unpaired half-edge {h}"))))
                .collect::<Result<_>>()?;
            if mates.iter().any(|&m| d.owner(m) == v) {
                return Ok(Poly::zero(dim));
            }
            let mut t = Tensor {
                labels: Vec::new(),
                entries: HashMap::new(),
            };
            let open: Vec<usize> = (0..3).filter(|&i| d.kind(d.owner(mates[i])) == VertexKind::Internal).collect();
            t.labels = open.iter().map(|&i| slots[i].min(mates[i])).collect();
            for (idx, q) in &self.structure {
                let mut p = Poly::constant(dim, q.clone());
                for i in 0..3 {
                    if !open.contains(&i) {
                        p = p.mul(&self.leg_vector[idx[i] as usize]);
                    }
                }
                if p.is_zero() {
                    continue;
                }
                let key: Vec<u16> = open.iter().map(|&i| idx[i]).collect();
                let slot = t.entries.entry(key).or_insert_with(|| Poly::zero(dim));
                slot.add_scaled(&p, &Rational::one());
            }
            t.entries.retain(|_, p| !p.is_zero());
            // raise at the endpoint holding the larger half-edge id
            for &i in &open {
                if slots[i] > mates[i] {
                    t.raise(mates[i], &self.ginv);
                }
            }
            tensors.push(t);
        }
        while tensors.len() > 1 {
            let mut best: Option<(usize, usize, usize, usize)> = None;
            for i in 0..tensors.len() {
                for j in i + 1..tensors.len() {
                    let shared = tensors[i].labels.iter().filter(|l| tensors[j].labels.contains(l)).count();
                    if shared == 0 {
                        continue;
                    }
                    let open = tensors[i].labels.len() + tensors[j].labels.len() - 2 * shared;
                    let size = tensors[i].entries.len() * tensors[j].entries.len();
                    if best.is_none_or(|(o, s, _, _)| (open, size) < (o, s)) {
                        best = Some((open, size, i, j));
                    }
                }
            }
            let (i, j) = match best {
                Some((_, _, i, j)) => (i, j),
                None => (0, 1),
            };
            let b = tensors.remove(j);
            let a = tensors.remove(i);
            let c = a.contract(&b);
            if c.entries.is_empty() {
                return Ok(Poly::zero(dim));
            }
            tensors.push(c);
        }
        let last = tensors.pop().expect("one tensor left");
        debug_assert!(last.labels.is_empty());
        Ok(last.entries.get(&Vec::new()).cloned().unwrap_or_else(|| Poly::zero(dim)))
    }

    /// Weight of a combination (kind ℬ′ or ℬ).
    pub fn combo(&self, c: &Combo) -> Result<XSeries> {
        c.expect_kind(&[crate::diagrams::SpaceKind::BPrime, crate::diagrams::SpaceKind::B])?;
        let mut out = XSeries::zero(self.lie.dim, Truncation::Exact);
        for (d, q) in c.terms() {
            out.add_scaled(&self.diagram(&d.to_diagram())?, q)?;
        }
        Ok(out)
    }
}

/// κ^ħ∘T_g of a ℬ′ combination, as a polynomial in the coordinates of X.
pub fn tg_weight(l: &MetrizedLie, c: &Combo) -> Result<XSeries> {
    WeightSystem::new(l, LegForm::Dual)?.combo(c)
}

/// T_g of a single (not necessarily canonical) Chinese character.
pub fn tg_weight_diagram(l: &MetrizedLie, d: &UniTrivalentDiagram, form: LegForm) -> Result<XSeries> {
    WeightSystem::new(l, form)?.diagram(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Limits;
    use crate::diagrams::{strut, theta, wheel, SpaceKind};
    use crate::liealg::{ad_endomorphism, make_sl};
    use crate::rational::int;

    fn sl(n: usize) -> MetrizedLie {
        make_sl(n, &Limits::default()).unwrap()
    }

    #[test]
    fn wheel_two_at_h_is_eight() {
        let l = sl(2);
        let w = tg_weight(&l, &Combo::from_diagram(&wheel(2), SpaceKind::BPrime).unwrap()).unwrap();
        assert_eq!(w.parts().count(), 1);
        let (h, p) = w.parts().next().unwrap();
        assert_eq!(h, 0);
        assert_eq!(p.evaluate(&[int(0), int(0), int(1)]).unwrap(), int(8));
    }

    #[test]
    fn strut_is_the_form() {
        let l = sl(2);
        let w = tg_weight(&l, &Combo::from_diagram(&strut(), SpaceKind::BPrime).unwrap()).unwrap();
        let p = w.part(-1);
        // (X, X) = 2 X^{E12} X^{E21} + 2 (X^{H1})²
        assert_eq!(p.coefficient(&[1, 1, 0]), int(2));
        assert_eq!(p.coefficient(&[0, 0, 2]), int(2));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn wheels_are_traces_of_powers_of_ad() {
        let l = sl(3);
        let ad = ad_endomorphism(&l).unwrap();
        let d = l.dim;
        let mut power = ad.clone();
        for n in 2..=4 {
            let mut next = vec![vec![Poly::zero(d); d]; d];
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        next[i][j].add_scaled(&power[i][k].mul(&ad[k][j]), &Rational::one());
                    }
                }
            }
            power = next;
            let tr = (0..d).fold(Poly::zero(d), |acc, i| acc.plus(&power[i][i]));
            let w = tg_weight_diagram(&l, &wheel(n), LegForm::Dual).unwrap();
            assert_eq!(w.part(0), tr, "wheel {n}");
        }
    }

    #[test]
    fn theta_is_a_scalar_and_reversal_negates() {
        let l = sl(2);
        let t = tg_weight_diagram(&l, &theta(), LegForm::Dual).unwrap();
        let v = t.part(1).constant_term();
        assert!(!v.is_zero());
        let mut r = theta();
        r.reverse_vertex(0);
        assert_eq!(tg_weight_diagram(&l, &r, LegForm::Dual).unwrap().part(1).constant_term(), -v);
    }
}
