mod common;

use common::*;
use jacobi::diagrams::{enumerate_diagrams, strut, theta, wheel, SpaceKind};
use jacobi::rational::{rat, to_fraction_string};
use jacobi::spaces::{space_dimension, Combo};
use jacobi::wheeling::{bernoulli_numbers, glue_all_legs, gluing_count, modified_bernoulli, omega_series, BernoulliTable};
use jacobi::{Error, Limits};

#[test]
fn enumeration_matches_brute_force_in_low_degree() {
    let lim = Limits::default();
    for kind in SpaceKind::ALL {
        for m in 0..=2 {
            let fast: Vec<_> = enumerate_diagrams(m, kind, &lim).unwrap();
            let slow: Vec<_> = brute_force_diagrams(m, kind).into_iter().collect();
            assert_eq!(fast, slow, "{kind} degree {m}");
        }
    }
}

#[test]
fn known_dimensions() {
    let lim = Limits::default();
    let table = [
        (SpaceKind::APrime, [1, 2, 5, 10, 22]),
        (SpaceKind::BPrime, [1, 2, 5, 10, 22]),
        (SpaceKind::A, [1, 1, 2, 3, 6]),
        (SpaceKind::B, [1, 1, 2, 3, 6]),
    ];
    for (kind, dims) in table {
        for (m, &d) in dims.iter().enumerate() {
            assert_eq!(space_dimension(m, kind, &lim).unwrap(), d, "{kind} degree {m}");
        }
    }
}

#[test]
fn bernoulli_numbers_match_reciprocal_series() {
    assert_eq!(bernoulli_numbers(16), bernoulli_oracle(16));
    for n in 1..=8 {
        let b = bernoulli_oracle(2 * n);
        assert_eq!(
            modified_bernoulli(2 * n).unwrap(),
            expected_modified_bernoulli(2 * n, &b[2 * n]),
            "b_{}",
            2 * n
        );
    }
    assert!(BernoulliTable::new(8).unwrap().mismatches().is_empty());
}

#[test]
fn stated_modified_bernoulli_values() {
    assert_eq!(modified_bernoulli(2).unwrap(), rat(1, 48));
    assert_eq!(modified_bernoulli(4).unwrap(), rat(-1, 5760));
    assert_eq!(modified_bernoulli(6).unwrap(), rat(1, 362880));
    assert!(matches!(modified_bernoulli(3), Err(Error::InvalidArgument(_))));
}

#[test]
fn orbit_gluing_matches_every_injection() {
    let cases = [
        (wheel(2), wheel(4)),
        (wheel(4), wheel(4)),
        (strut(), wheel(4)),
        (wheel(2), wheel(2)),
        (strut(), jacobi::diagrams::disjoint_union(&wheel(2), &wheel(2)).unwrap()),
        (wheel(2), jacobi::diagrams::disjoint_union(&strut(), &strut()).unwrap()),
        (theta(), wheel(2)),
    ];
    for (c, cp) in &cases {
        let fast = glue_all_legs(c, cp).unwrap();
        let slow = raw_glue_all(c, cp).unwrap();
        assert_eq!(fast, slow);
        assert_eq!(gluing_count(c, cp).unwrap(), injections(c.legs().len(), cp.legs().len()).len());
    }
}

#[test]
fn orbit_gluing_matches_on_pool_pairs() {
    let pool = character_pool();
    for m in 0..=2 {
        for mp in 0..=3 {
            for c in &pool[m] {
                for cp in &pool[mp] {
                    let (c, cp) = (c.to_diagram(), cp.to_diagram());
                    match (glue_all_legs(&c, &cp), raw_glue_all(&c, &cp)) {
                        (Ok(a), Ok(b)) => assert_eq!(a, b),
                        (Err(Error::VertexFreeLoop), Err(Error::VertexFreeLoop)) => {}
                        (a, b) => panic!("disagree: {a:?} vs {b:?}"),
                    }
                }
            }
        }
    }
}

#[test]
fn wheel_gluing_examples() {
    let (adj, opp) = adjacent_and_opposite();
    let mut expected = Combo::from_diagram(&adj, SpaceKind::BPrime).unwrap().scaled(&rat(8, 1));
    expected
        .add_scaled(&Combo::from_diagram(&opp, SpaceKind::BPrime).unwrap(), &rat(4, 1))
        .unwrap();
    assert_eq!(glue_all_legs(&wheel(2), &wheel(4)).unwrap(), expected);
    assert!(glue_all_legs(&wheel(4), &wheel(2)).unwrap().is_zero());
}

#[test]
fn omega_second_order_term() {
    let omega = omega_series(4, &Limits::default()).unwrap();
    let w2 = Combo::from_diagram(&wheel(2), SpaceKind::BPrime).unwrap();
    let (d, sign) = {
        let (d, q) = w2.terms().next().unwrap();
        (d.clone(), q.clone())
    };
    assert_eq!(to_fraction_string(&(omega.value.coefficient(&d) * sign)), "1/48");
}
