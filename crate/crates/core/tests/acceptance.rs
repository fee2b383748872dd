//! Exit-gate checks, one printed line per criterion. Every comparison is
//! exact rational equality.

mod common;

use std::cell::OnceCell;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use common::*;
use jacobi::algebra_maps::Engine;
use jacobi::diagrams::{disjoint_union, wheel, SpaceKind, VertexKind};
use jacobi::liealg::{
    casimir, duflo_apply, make_sl, sg_integrate, tg_weight, tg_weight_diagram, verify_face_ce, verify_wheels_theorem,
    LegForm, MetrizedLie, Poly, Truncation, WeightSystem, XSeries,
};
use jacobi::rational::{one, rat, to_fraction_string};
use jacobi::report::{CheckRecord, Report, Status};
use jacobi::spaces::{build_quotient, cache_load, cache_path, cache_store, relation_generators, Combo};
use jacobi::wheeling::{glue_all_legs, modified_bernoulli, verify_wheeling};
use jacobi::{Error, Limits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SPACE_DEGREE: usize = 4;
const WHEELING_DEGREE: usize = 4;
const SL2_X_DEGREE: usize = 8;
const SL3_X_DEGREE: usize = 6;
const RANDOM_PAIRS: usize = 20;
const PAIR_DEGREE: usize = 3;
const FACE_CE_DEGREE: usize = 6;
const WEIGHT_DEGREE: usize = 4;
const SEED: u64 = 0x5eed;

/// Outcome of one criterion: `Ok(detail)` passes, `Err(detail)` fails.
type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn all_pass(records: &[CheckRecord]) -> Result<(), String> {
    match records.iter().find(|r| r.status != Status::Pass) {
        None => Ok(()),
        Some(r) => Err(format!("{} is {} {:?} {:?}", r.name, r.status.as_str(), r.inputs, r.residual)),
    }
}

fn bernoulli() -> Verdict {
    let stated = [(2, rat(1, 48)), (4, rat(-1, 5760)), (6, rat(1, 362880))];
    for (two_n, q) in stated {
        let b = modified_bernoulli(two_n).map_err(|e| e.to_string())?;
        ensure(b == q, format!("b_{two_n} = {b}, expected {q}"))?;
    }
    let classical = bernoulli_oracle(16);
    for n in 1..=8 {
        let b = modified_bernoulli(2 * n).map_err(|e| e.to_string())?;
        let expected = expected_modified_bernoulli(2 * n, &classical[2 * n]);
        ensure(b == expected, format!("b_{} = {b}, oracle {expected}", 2 * n))?;
    }
    Ok("b2, b4, b6 stated values; b_2n for n <= 8 against the recurrence".into())
}

fn gluing() -> Verdict {
    let (adj, opp) = adjacent_and_opposite();
    let mut expected = Combo::from_diagram(&adj, SpaceKind::BPrime).map_err(|e| e.to_string())?.scaled(&rat(8, 1));
    expected
        .add_scaled(&Combo::from_diagram(&opp, SpaceKind::BPrime).map_err(|e| e.to_string())?, &rat(4, 1))
        .map_err(|e| e.to_string())?;
    let into_four = glue_all_legs(&wheel(2), &wheel(4)).map_err(|e| e.to_string())?;
    ensure(into_four == expected, format!("w2 into w4 gave {into_four:?}"))?;
    let into_two = glue_all_legs(&wheel(4), &wheel(2)).map_err(|e| e.to_string())?;
    ensure(into_two.is_zero(), format!("w4 into w2 gave {into_two:?}"))?;
    Ok("w2 into w4 = 8 adjacent + 4 opposite; w4 into w2 = 0".into())
}

fn quotients(engine: &Engine) -> Verdict {
    let lim = engine.limits().clone();
    let registry = engine.registry();
    let mut generators = 0;
    for kind in SpaceKind::ALL {
        for m in 0..=SPACE_DEGREE {
            for r in relation_generators(m, kind, &lim).map_err(|e| e.to_string())? {
                let zero = registry.reduces_to_zero(&r).map_err(|e| e.to_string())?;
                ensure(zero, format!("{kind} degree {m} generator survives: {r:?}"))?;
                generators += 1;
            }
        }
    }
    let mut dims = Vec::new();
    for m in 0..=SPACE_DEGREE {
        let b = registry.get(SpaceKind::BPrime, m).map_err(|e| e.to_string())?;
        let a = registry.get(SpaceKind::APrime, m).map_err(|e| e.to_string())?;
        ensure(
            a.dimension() == b.dimension(),
            format!("degree {m}: dim A' = {}, dim B' = {}", a.dimension(), b.dimension()),
        )?;
        dims.push(a.dimension());
        for d in b.basis() {
            let x = Combo::term(SpaceKind::BPrime, d.clone(), one());
            let back = engine.chi(&x).and_then(|y| engine.sigma(&y, m)).map_err(|e| e.to_string())?;
            ensure(back == x, format!("sigma(chi({d})) = {back:?}"))?;
        }
        for d in a.basis() {
            let y = Combo::term(SpaceKind::APrime, d.clone(), one());
            let back = engine.sigma(&y, m).and_then(|x| engine.chi(&x)).map_err(|e| e.to_string())?;
            let diff = back.minus(&y).map_err(|e| e.to_string())?;
            ensure(
                registry.reduces_to_zero(&diff).map_err(|e| e.to_string())?,
                format!("chi(sigma({d})) differs"),
            )?;
        }
    }
    Ok(format!("{generators} relation generators vanish; sigma chi = id both ways; dims {dims:?}"))
}

fn wheeling(engine: &Engine) -> Verdict {
    let records = verify_wheeling(WHEELING_DEGREE, engine).map_err(|e| e.to_string())?;
    all_pass(&records)?;
    Ok(format!("{} basis pairs up to total degree {WHEELING_DEGREE}", records.len()))
}

fn wheels_records(l: &MetrizedLie, k: usize) -> Result<Vec<CheckRecord>, String> {
    verify_wheels_theorem(l, k, &Limits::default()).map_err(|e| e.to_string())
}

fn select(records: &[CheckRecord], tags: &[&str]) -> Vec<CheckRecord> {
    records
        .iter()
        .filter(|r| tags.iter().any(|t| r.name.starts_with(t)))
        .cloned()
        .collect()
}

fn omega_weights(sl2: &[CheckRecord], sl3: &[CheckRecord]) -> Verdict {
    let picked: Vec<_> = [select(sl2, &["wheels[a]"]), select(sl3, &["wheels[a]"])].concat();
    ensure(picked.len() == 2, "missing records")?;
    all_pass(&picked)?;
    Ok(format!("sl2 to X-degree {SL2_X_DEGREE}, sl3 to X-degree {SL3_X_DEGREE}"))
}

fn unknot_chain(sl2: &[CheckRecord], sl3: &[CheckRecord]) -> Verdict {
    let picked: Vec<_> = [
        select(sl2, &["wheels[b]", "wheels[c]"]),
        select(sl3, &["wheels[b]", "wheels[c]"]),
    ]
    .concat();
    ensure(picked.len() == 4, "missing records")?;
    all_pass(&picked)?;
    let routes: Vec<String> = select(&picked, &["wheels[c]"])
        .iter()
        .map(|r| format!("{} via {}", r.inputs["algebra"], r.inputs["route"]))
        .collect();
    Ok(format!("root product and orbit step; {}", routes.join(", ")))
}

/// Random pairs (C, C′) with deg C + deg C′ ≤ 3, skipping gluings that
/// close a loop without vertices.
fn random_pairs(rng: &mut ChaCha8Rng) -> Vec<(jacobi::diagrams::CanonicalDiagram, jacobi::diagrams::CanonicalDiagram)> {
    let pool = character_pool();
    let mut out = Vec::new();
    while out.len() < RANDOM_PAIRS {
        let m = rng.gen_range(0..=PAIR_DEGREE);
        let mp = rng.gen_range(0..=PAIR_DEGREE - m);
        let c = pool[m][rng.gen_range(0..pool[m].len())].clone();
        let cp = pool[mp][rng.gen_range(0..pool[mp].len())].clone();
        match glue_all_legs(&c.to_diagram(), &cp.to_diagram()) {
            Err(Error::VertexFreeLoop) => continue,
            _ => out.push((c, cp)),
        }
    }
    out
}

fn gluing_vs_duflo(sl2: &MetrizedLie, sl3: &MetrizedLie) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut nonzero = 0;
    for l in [sl2, sl3] {
        let sym = WeightSystem::new(l, LegForm::Symmetric).map_err(|e| e.to_string())?;
        let dual = WeightSystem::new(l, LegForm::Dual).map_err(|e| e.to_string())?;
        for (c, cp) in random_pairs(&mut rng) {
            let (g, gp) = (c.to_diagram(), cp.to_diagram());
            let lhs = glue_all_legs(&g, &gp).and_then(|x| sym.combo(&x)).map_err(|e| e.to_string())?;
            let rhs = dual
                .diagram(&g)
                .and_then(|f| duflo_apply(&f, &sym.diagram(&gp)?))
                .map_err(|e| e.to_string())?;
            ensure(lhs == rhs, format!("{}: {c} into {cp}: {lhs:?} vs {rhs:?}", l.name))?;
            if !lhs.is_zero() {
                nonzero += 1;
            }
        }
    }
    Ok(format!("{RANDOM_PAIRS} pairs each for sl2 and sl3, {nonzero} with nonzero value"))
}

fn face_ce(sl2: &MetrizedLie) -> Verdict {
    let records = verify_face_ce(sl2, FACE_CE_DEGREE, &Limits::default()).map_err(|e| e.to_string())?;
    all_pass(&records)?;
    let c = casimir(sl2).map_err(|e| e.to_string())?;
    let got = sg_integrate(sl2, &XSeries::from_poly(0, c.clone(), Truncation::Exact))
        .map_err(|e| e.to_string())?
        .part(0);
    let fixture = c.minus(&Poly::constant(c.nvars(), rat(1, 2)));
    let constant = to_fraction_string(&got.constant_term());
    ensure(
        got == fixture,
        format!(
            "{} invariant polynomials agree, but S_g((l,l)) has constant term {constant}, fixture requires -1/2",
            records.len()
        ),
    )?;
    Ok(format!("{} invariant polynomials and the (l,l) fixture", records.len()))
}

fn weights_well_defined(sl2: &MetrizedLie, sl3: &MetrizedLie) -> Verdict {
    let lim = Limits::default();
    let mut as_moves = 0;
    let mut ihx = 0;
    for l in [sl2, sl3] {
        let dual = WeightSystem::new(l, LegForm::Dual).map_err(|e| e.to_string())?;
        for m in 1..=WEIGHT_DEGREE {
            for d in jacobi::diagrams::enumerate_diagrams(m, SpaceKind::BPrime, &lim).map_err(|e| e.to_string())? {
                let g = d.to_diagram();
                let base = dual.diagram(&g).map_err(|e| e.to_string())?;
                for v in (0..g.vertex_count()).filter(|&v| g.kind(v) == VertexKind::Internal) {
                    let mut flipped = g.clone();
                    flipped.reverse_vertex(v);
                    let w = tg_weight_diagram(l, &flipped, LegForm::Dual).map_err(|e| e.to_string())?;
                    let sum = w.plus(&base).map_err(|e| e.to_string())?;
                    ensure(sum.is_zero(), format!("{}: AS fails on {d} at {v}", l.name))?;
                    as_moves += 1;
                }
            }
            for r in relation_generators(m, SpaceKind::BPrime, &lim).map_err(|e| e.to_string())? {
                let w = dual.combo(&r).map_err(|e| e.to_string())?;
                ensure(w.is_zero(), format!("{}: IHX generator has weight {w:?}", l.name))?;
                ihx += 1;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
        let pool = character_pool();
        for _ in 0..RANDOM_PAIRS {
            let m = rng.gen_range(0..=PAIR_DEGREE);
            let mp = rng.gen_range(0..=PAIR_DEGREE - m);
            let a = pool[m][rng.gen_range(0..pool[m].len())].to_diagram();
            let b = pool[mp][rng.gen_range(0..pool[mp].len())].to_diagram();
            let union = disjoint_union(&a, &b).map_err(|e| e.to_string())?;
            let whole = tg_weight(l, &Combo::from_diagram(&union, SpaceKind::BPrime).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let product = dual
                .diagram(&a)
                .and_then(|x| x.mul(&dual.diagram(&b)?))
                .map_err(|e| e.to_string())?;
            ensure(whole == product, format!("{}: union not multiplicative", l.name))?;
        }
    }
    Ok(format!(
        "{as_moves} AS moves and {ihx} IHX generators up to degree {WEIGHT_DEGREE}; {RANDOM_PAIRS} union pairs per algebra"
    ))
}

fn persistence() -> Verdict {
    let lim = Limits::default();
    let dirs = [tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?];
    for dir in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_jacobi"))
            .args(["cache", "rebuild", "--max-degree", &SPACE_DEGREE.to_string(), "--dir"])
            .arg(dir.path())
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), String::from_utf8_lossy(&status.stderr).into_owned())?;
    }
    let mut files = 0;
    for kind in SpaceKind::ALL {
        for m in 0..=SPACE_DEGREE {
            let a = std::fs::read(cache_path(dirs[0].path(), m, kind)).map_err(|e| e.to_string())?;
            let b = std::fs::read(cache_path(dirs[1].path(), m, kind)).map_err(|e| e.to_string())?;
            ensure(a == b, format!("{kind} degree {m} differs between runs"))?;
            let built = build_quotient(m, kind, &lim).map_err(|e| e.to_string())?;
            let loaded = cache_load(m, kind, dirs[0].path()).map_err(|e| e.to_string())?;
            ensure(built == loaded, format!("{kind} degree {m} cache roundtrip is lossy"))?;
            let third = tempfile::tempdir().map_err(|e| e.to_string())?;
            let path = cache_store(&loaded, third.path()).map_err(|e| e.to_string())?;
            ensure(
                std::fs::read(path).map_err(|e| e.to_string())? == a,
                format!("{kind} degree {m} re-store differs"),
            )?;
            files += 1;
        }
    }
    let mut reports = 0;
    for args in [
        vec!["verify", "face-ce", "--max-degree", "4", "--format", "json"],
        vec!["omega", "--max-degree", "6", "--format", "json"],
        vec!["dims", "--kind", "Bprime", "--max-degree", "3", "--format", "json"],
    ] {
        let out = jacobi::cli::run(std::iter::once("jacobi").chain(args.iter().copied()));
        let report = Report::from_json(&out.stdout).map_err(|e| e.to_string())?;
        ensure(format!("{}\n", report.to_json()) == out.stdout, format!("{args:?} does not roundtrip"))?;
        reports += 1;
    }
    Ok(format!("{files} space files identical across two runs and lossless; {reports} JSON reports roundtrip"))
}

fn main() {
    let engine = Engine::new(Limits::default());
    let lim = Limits::default();
    let sl2 = make_sl(2, &lim).expect("sl2");
    let sl3 = make_sl(3, &lim).expect("sl3");
    let wheels = OnceCell::new();
    let wheels_both = || {
        wheels
            .get_or_init(|| {
                let a = wheels_records(&sl2, SL2_X_DEGREE)?;
                let b = wheels_records(&sl3, SL3_X_DEGREE)?;
                Ok::<_, String>((a, b))
            })
            .clone()
    };

    let criteria: Vec<(&str, Box<dyn FnOnce() -> Verdict + '_>)> = vec![
        ("modified Bernoulli numbers", Box::new(bernoulli)),
        ("gluing examples", Box::new(gluing)),
        ("quotient sanity", Box::new(|| quotients(&engine))),
        ("wheeling at diagram level", Box::new(|| wheeling(&engine))),
        (
            "weights of the wheels element",
            Box::new(|| wheels_both().and_then(|(a, b)| omega_weights(&a, &b))),
        ),
        (
            "unknot value and orbit integral",
            Box::new(|| wheels_both().and_then(|(a, b)| unknot_chain(&a, &b))),
        ),
        ("gluing intertwines with Duflo", Box::new(|| gluing_vs_duflo(&sl2, &sl3))),
        ("Duflo equals orbit integral on sl2", Box::new(|| face_ce(&sl2))),
        ("weight systems well defined", Box::new(|| weights_well_defined(&sl2, &sl3))),
        ("determinism and persistence", Box::new(persistence)),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
