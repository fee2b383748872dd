mod common;

use std::sync::OnceLock;

use common::*;
use jacobi::algebra_maps::{times_product, union_product};
use jacobi::diagrams::{canonical_form, disjoint_union, enumerate_diagrams, CanonicalDiagram, SpaceKind};
use jacobi::liealg::{
    duflo_apply, make_sl, tg_weight, tg_weight_diagram, LegForm, MetrizedLie, Poly, Truncation, WeightSystem, XSeries,
};
use jacobi::rational::{int, rat, Rational};
use jacobi::spaces::{Combo, SpaceRegistry};
use jacobi::wheeling::glue_all_legs;
use jacobi::{Error, Limits};
use proptest::prelude::*;

fn sl(n: usize) -> &'static MetrizedLie {
    static SL2: OnceLock<MetrizedLie> = OnceLock::new();
    static SL3: OnceLock<MetrizedLie> = OnceLock::new();
    let cell = if n == 2 { &SL2 } else { &SL3 };
    cell.get_or_init(|| make_sl(n, &Limits::default()).unwrap())
}

fn interval_pool() -> &'static Vec<CanonicalDiagram> {
    static POOL: OnceLock<Vec<CanonicalDiagram>> = OnceLock::new();
    POOL.get_or_init(|| {
        (0..=2)
            .flat_map(|m| enumerate_diagrams(m, SpaceKind::APrime, &Limits::default()).unwrap())
            .collect()
    })
}

fn registry() -> &'static SpaceRegistry {
    static R: OnceLock<SpaceRegistry> = OnceLock::new();
    R.get_or_init(|| SpaceRegistry::new(Limits::default()))
}

/// A pool character of degree at most `max_degree`.
fn character(max_degree: usize) -> impl Strategy<Value = CanonicalDiagram> {
    (0..=max_degree, any::<prop::sample::Index>()).prop_map(|(m, i)| {
        let pool = &character_pool()[m];
        pool[i.index(pool.len())].clone()
    })
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn combo(max_degree: usize) -> impl Strategy<Value = Combo> {
    prop::collection::vec((character(max_degree), small_rational()), 1..4).prop_map(|terms| {
        let mut c = Combo::zero(SpaceKind::BPrime);
        for (d, q) in terms {
            c.add_term(d, q);
        }
        c
    })
}

fn interval_combo() -> impl Strategy<Value = Combo> {
    prop::collection::vec((any::<prop::sample::Index>(), small_rational()), 1..3).prop_map(|terms| {
        let pool = interval_pool();
        let mut c = Combo::zero(SpaceKind::APrime);
        for (i, q) in terms {
            c.add_term(pool[i.index(pool.len())].clone(), q);
        }
        c
    })
}

fn poly(nvars: usize, max_degree: u8) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_degree, nvars), -3i64..=3), 0..5).prop_map(move |terms| {
        let mut p = Poly::zero(nvars);
        for (m, q) in terms {
            if m.iter().map(|&e| e as usize).sum::<usize>() <= max_degree as usize {
                p.add_term(m, int(q));
            }
        }
        p
    })
}

fn exact(p: Poly) -> XSeries {
    XSeries::from_poly(0, p, Truncation::Exact)
}

/// Both sides of Ĉ intertwining under T_g, or `None` for a gluing that
/// closes a bare loop.
fn gluing_and_duflo_sides(l: &MetrizedLie, c: &CanonicalDiagram, cp: &CanonicalDiagram) -> Option<(XSeries, XSeries)> {
    let (c, cp) = (c.to_diagram(), cp.to_diagram());
    let glued = match glue_all_legs(&c, &cp) {
        Err(Error::VertexFreeLoop) => return None,
        other => other.unwrap(),
    };
    let lhs = WeightSystem::new(l, LegForm::Symmetric).unwrap().combo(&glued).unwrap();
    let op = tg_weight_diagram(l, &c, LegForm::Dual).unwrap();
    let arg = tg_weight_diagram(l, &cp, LegForm::Symmetric).unwrap();
    Some((lhs, duflo_apply(&op, &arg).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_form_ignores_vertex_labels(d in character(3), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let g = d.to_diagram();
        let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let (sign, canon) = canonical_form(&g.relabeled(&perm)).unwrap().into_parts().unwrap();
        prop_assert_eq!(sign, 1);
        prop_assert_eq!(canon, d);
    }

    #[test]
    fn reduction_is_linear(a in combo(3), b in combo(3), q in small_rational()) {
        let mut sum = a.clone();
        sum.add_scaled(&b, &q).unwrap();
        let ra = registry().reduce(&a).unwrap();
        let rb = registry().reduce(&b).unwrap();
        let rs = registry().reduce(&sum).unwrap();
        for m in 0..=3 {
            let zero = vec![Rational::from_integer(0.into()); registry().get(SpaceKind::BPrime, m).unwrap().dimension()];
            let va = ra.get(&m).unwrap_or(&zero);
            let vb = rb.get(&m).unwrap_or(&zero);
            let vs = rs.get(&m).unwrap_or(&zero);
            for i in 0..zero.len() {
                prop_assert_eq!(&vs[i], &(&va[i] + &q * &vb[i]));
            }
        }
    }

    #[test]
    fn union_commutes(a in combo(2), b in combo(2)) {
        prop_assert_eq!(union_product(&a, &b).unwrap(), union_product(&b, &a).unwrap());
    }

    #[test]
    fn concatenation_associates(a in interval_combo(), b in interval_combo(), c in interval_combo()) {
        let left = times_product(&times_product(&a, &b).unwrap(), &c).unwrap();
        let right = times_product(&a, &times_product(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn duflo_is_multiplicative(f in poly(3, 2), g in poly(3, 2), p in poly(3, 4)) {
        let fg = exact(f.mul(&g));
        let composed = duflo_apply(&exact(f), &duflo_apply(&exact(g), &exact(p.clone())).unwrap()).unwrap();
        prop_assert_eq!(duflo_apply(&fg, &exact(p)).unwrap(), composed);
    }

    #[test]
    fn weights_are_union_multiplicative(a in character(2), b in character(2), rank in 2usize..=3) {
        let l = sl(rank);
        let (ga, gb) = (a.to_diagram(), b.to_diagram());
        let union = disjoint_union(&ga, &gb).unwrap();
        let ta = tg_weight(l, &Combo::term(SpaceKind::BPrime, a, Rational::from_integer(1.into()))).unwrap();
        let tb = tg_weight_diagram(l, &gb, LegForm::Dual).unwrap();
        prop_assert_eq!(tg_weight_diagram(l, &union, LegForm::Dual).unwrap(), ta.mul(&tb).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gluing_intertwines_with_duflo_sl2(c in character(2), cp in character(3)) {
        prop_assume!(c.degree() + cp.degree() <= 3);
        if let Some((lhs, rhs)) = gluing_and_duflo_sides(sl(2), &c, &cp) {
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gluing_intertwines_with_duflo_sl3(c in character(2), cp in character(3)) {
        prop_assume!(c.degree() + cp.degree() <= 3);
        if let Some((lhs, rhs)) = gluing_and_duflo_sides(sl(3), &c, &cp) {
            prop_assert_eq!(lhs, rhs);
        }
    }
}
