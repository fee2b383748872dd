//! The products ∪ and ×, the symmetrization χ and its inverse σ.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::config::Limits;
use crate::diagrams::{append, disjoint_union, CanonicalDiagram, SpaceKind};
use crate::error::{Error, Result};
use crate::linalg::{invert, mat_vec, Matrix};
use crate::rational::{factorial, Rational};
use crate::spaces::{reduce_combo, Combo, SpaceRegistry};

const CHINESE: [SpaceKind; 2] = [SpaceKind::B, SpaceKind::BPrime];
const INTERVAL: [SpaceKind; 2] = [SpaceKind::A, SpaceKind::APrime];

/// Bilinear disjoint union.
pub fn union_product(a: &Combo, b: &Combo) -> Result<Combo> {
    a.expect_kind(&CHINESE)?;
    a.check_kind(b)?;
    let mut out = Combo::zero(a.kind());
    for (da, qa) in a.terms() {
        let ga = da.to_diagram();
        for (db, qb) in b.terms() {
            out.add_diagram(&disjoint_union(&ga, &db.to_diagram())?, qa * qb)?;
        }
    }
    Ok(out)
}

/// Bilinear concatenation of intervals, `a` first.
pub fn times_product(a: &Combo, b: &Combo) -> Result<Combo> {
    a.expect_kind(&INTERVAL)?;
    a.check_kind(b)?;
    let mut out = Combo::zero(a.kind());
    for (da, qa) in a.terms() {
        let ga = da.to_diagram();
        for (db, qb) in b.terms() {
            let mut g = ga.clone();
            append(&mut g, &db.to_diagram());
            out.add_diagram(&g, qa * qb)?;
        }
    }
    Ok(out)
}

fn interval_kind(kind: SpaceKind) -> SpaceKind {
    match kind {
        SpaceKind::B => SpaceKind::A,
        _ => SpaceKind::APrime,
    }
}

/// χ of a single character: the average over all orderings of its legs.
pub fn chi_diagram(d: &CanonicalDiagram, kind: SpaceKind, limits: &Limits) -> Result<Combo> {
    let g = d.to_diagram();
    let mut legs = g.legs();
    Limits::check("legs under χ", legs.len(), limits.chi_leg_cap)?;
    let weight = Rational::new(One::one(), factorial(legs.len() as u64));
    let mut out = Combo::zero(interval_kind(kind));
    loop {
        out.add_diagram(&g.place_legs(&legs), weight.clone())?;
        if !next_permutation(&mut legs) {
            break;
        }
    }
    Ok(out)
}

pub fn chi_map(c: &Combo, limits: &Limits) -> Result<Combo> {
    c.expect_kind(&CHINESE)?;
    let mut out = Combo::zero(interval_kind(c.kind()));
    for (d, q) in c.terms() {
        out.add_scaled(&chi_diagram(d, c.kind(), limits)?, q)?;
    }
    Ok(out)
}

/// σ by per-degree linear solves; see [`Engine::sigma`].
pub fn sigma_map(a: &Combo, max_degree: usize, engine: &Engine) -> Result<Combo> {
    engine.sigma(a, max_degree)
}

/// σ(χ(a) × χ(b)) truncated at `max_degree`.
pub fn b_times_product(a: &Combo, b: &Combo, max_degree: usize, engine: &Engine) -> Result<Combo> {
    engine.b_times(a, b, max_degree)
}

/// Lexicographic successor; false when `v` was the last permutation.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Shared state for the algebra maps: quotient spaces plus memoized χ
/// images and per-degree σ matrices.
pub struct Engine {
    registry: SpaceRegistry,
    chi: Mutex<HashMap<CanonicalDiagram, Arc<Combo>>>,
    chi_matrices: Mutex<HashMap<usize, Arc<Matrix>>>,
    sigma: Mutex<HashMap<usize, Arc<Matrix>>>,
}

impl Engine {
    pub fn new(limits: Limits) -> Engine {
        Engine::with_registry(SpaceRegistry::new(limits))
    }

    pub fn with_registry(registry: SpaceRegistry) -> Engine {
        Engine {
            registry,
            chi: Mutex::new(HashMap::new()),
            chi_matrices: Mutex::new(HashMap::new()),
            sigma: Mutex::new(HashMap::new()),
        }
    }

    pub fn registry(&self) -> &SpaceRegistry {
        &self.registry
    }

    pub fn limits(&self) -> &Limits {
        self.registry.limits()
    }

    /// Memoized χ (kind ℬ′ or ℬ).
    pub fn chi(&self, c: &Combo) -> Result<Combo> {
        c.expect_kind(&CHINESE)?;
        let mut out = Combo::zero(interval_kind(c.kind()));
        for (d, q) in c.terms() {
            out.add_scaled(&self.chi_one(d)?.as_ref().clone().with_kind(out.kind()), q)?;
        }
        Ok(out)
    }

    fn chi_one(&self, d: &CanonicalDiagram) -> Result<Arc<Combo>> {
        if let Some(c) = self.chi.lock().expect("chi memo").get(d) {
            return Ok(c.clone());
        }
        let c = Arc::new(chi_diagram(d, SpaceKind::BPrime, self.limits())?);
        self.chi.lock().expect("chi memo").insert(d.clone(), c.clone());
        Ok(c)
    }

    /// Matrix of χ from the ℬ′ basis to 𝒜′ coordinates in one degree.
    pub fn chi_matrix(&self, degree: usize) -> Result<Matrix> {
        let b = self.registry.get(SpaceKind::BPrime, degree)?;
        let a = self.registry.get(SpaceKind::APrime, degree)?;
        let mut m = vec![vec![Rational::zero(); b.dimension()]; a.dimension()];
        for (j, d) in b.basis().enumerate() {
            let image = self.chi(&Combo::term(SpaceKind::BPrime, d.clone(), Rational::one()))?;
            for (i, q) in reduce_combo(&image, &a)?.into_iter().enumerate() {
                m[i][j] = q;
            }
        }
        Ok(m)
    }

    fn chi_matrix_shared(&self, degree: usize) -> Result<Arc<Matrix>> {
        if let Some(m) = self.chi_matrices.lock().expect("chi matrix memo").get(&degree) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.chi_matrix(degree)?);
        self.chi_matrices.lock().expect("chi matrix memo").insert(degree, m.clone());
        Ok(m)
    }

    /// 𝒜′ coordinates of χ(c) in degree `degree`, computed by reducing `c`
    /// in ℬ′ first and applying the χ matrix of that degree.
    pub fn chi_coords(&self, c: &Combo, degree: usize) -> Result<Vec<Rational>> {
        c.expect_kind(&CHINESE)?;
        let b = self.registry.get(SpaceKind::BPrime, degree)?;
        let coords = reduce_combo(&c.degree_part(degree).with_kind(SpaceKind::BPrime), &b)?;
        Ok(mat_vec(self.chi_matrix_shared(degree)?.as_ref(), &coords))
    }

    fn sigma_matrix(&self, degree: usize) -> Result<Arc<Matrix>> {
        if let Some(m) = self.sigma.lock().expect("sigma memo").get(&degree) {
            return Ok(m.clone());
        }
        let m = self.chi_matrix_shared(degree)?;
        let cols = m.first().map_or(0, |r| r.len());
        if m.len() != cols {
            return Err(Error::InvariantViolation(format!(
                "χ in degree {degree} maps a {cols}-dimensional space to a {}-dimensional one",
                m.len()
            )));
        }
        let inv = Arc::new(
            invert(m.as_ref()).ok_or_else(|| Error::InvariantViolation(format!("χ is singular in degree {degree}")))?,
        );
        self.sigma.lock().expect("sigma memo").insert(degree, inv.clone());
        Ok(inv)
    }

    /// σ(a): the ℬ′ combo, in basis diagrams, whose χ equals `a` in 𝒜′.
    pub fn sigma(&self, a: &Combo, max_degree: usize) -> Result<Combo> {
        a.expect_kind(&INTERVAL)?;
        self.limits().check_degree(max_degree)?;
        if let Some(d) = a.max_degree().filter(|&d| d > max_degree) {
            return Err(Error::ResourceLimit {
                what: "σ input degree".into(),
                requested: d,
                cap: max_degree,
            });
        }
        let a = a.clone().with_kind(SpaceKind::APrime);
        let mut out = Combo::zero(SpaceKind::BPrime);
        for (degree, coords) in self.registry.reduce(&a)? {
            let y = mat_vec(self.sigma_matrix(degree)?.as_ref(), &coords);
            let b = self.registry.get(SpaceKind::BPrime, degree)?;
            out.add_scaled(&b.combo_from_coords(&y), &Rational::one())?;
        }
        Ok(out)
    }

    pub fn b_times(&self, a: &Combo, b: &Combo, max_degree: usize) -> Result<Combo> {
        let product = times_product(&self.chi(a)?, &self.chi(b)?)?;
        self.sigma(&product.truncated(max_degree), max_degree)
    }
}
