//! Metrized Lie algebras and everything the diagrams map into: the weight
//! system T_g, the series j^{1/2}, the Duflo operator, the unknot value,
//! the orbit integral and the checks tying them together.

mod cartan;
mod duflo;
mod jseries;
mod orbit;
pub mod poly;
mod verify;
mod weight;

use num_traits::{One, Zero};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::linalg::{invert, Matrix};
use crate::rational::{int, Rational};

pub use cartan::{
    casimir, invariant_generators, lift_invariant, restrict_j_to_cartan, restrict_x_to_cartan, restrict_xi_to_cartan,
    unknot_rt_series,
};
pub use duflo::duflo_apply;
pub use jseries::{j_half_series, j_series, poly_inverse, series_sqrt};
pub use orbit::{sg_integrate, OrbitMeasure};
pub use poly::{Poly, Truncation, XSeries};
pub use verify::{check_tg_omega, verify_face_ce, verify_wheels_theorem};
pub use weight::{tg_weight, tg_weight_diagram, LegForm, WeightSystem};

/// Positive roots of sl_N and the Cartan data needed to pair weights.
///
/// A weight λ is given by its values `y_k = λ(H_k)` on the Cartan basis
/// `H_k = E_kk − E_{k+1,k+1}`; `(λ, μ) = yᵀ G⁻¹ y′` where `G` is the Gram
/// matrix of the `H_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootData {
    pub rank: usize,
    /// Basis positions of `H_1 .. H_rank`.
    pub cartan_indices: Vec<usize>,
    pub gram: Matrix,
    pub gram_inverse: Matrix,
    /// `α(H_k)` for each positive root.
    pub positive_roots: Vec<Vec<Rational>>,
    /// `ρ(H_k)`.
    pub rho: Vec<Rational>,
}

impl RootData {
    /// `(λ, μ)` for weights given by their values on the `H_k`.
    pub fn pairing(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                total += x * &self.gram_inverse[i][j] * y;
            }
        }
        total
    }

    /// Coefficients `c` with `(λ, α) = Σ c_k y_k`.
    pub fn root_functional(&self, root: &[Rational]) -> Vec<Rational> {
        (0..self.rank)
            .map(|k| (0..self.rank).fold(Rational::zero(), |acc, j| acc + &self.gram_inverse[k][j] * &root[j]))
            .collect()
    }

    /// `(ρ, α)` for every positive root.
    pub fn rho_pairings(&self) -> Vec<Rational> {
        self.positive_roots.iter().map(|a| self.pairing(&self.rho, a)).collect()
    }

    /// `(α, β)` over positive roots.
    pub fn root_pairings(&self) -> Vec<Vec<Rational>> {
        self.positive_roots
            .iter()
            .map(|a| self.positive_roots.iter().map(|b| self.pairing(a, b)).collect())
            .collect()
    }
}

/// A Lie algebra with an invariant form, in a fixed basis `x_a`.
///
/// `structure[a][b][c] = ([x_a, x_b], x_c)`, stored flat.
#[derive(Clone, Debug, PartialEq)]
pub struct MetrizedLie {
    pub name: String,
    pub dim: usize,
    pub metric: Matrix,
    structure: Vec<Rational>,
    inverse: Option<Matrix>,
    pub basis_names: Vec<String>,
    pub roots: Option<RootData>,
    /// Basis matrices in the defining representation, when known.
    pub matrices: Option<Vec<Vec<Vec<Rational>>>>,
}

impl MetrizedLie {
    /// Assembles an algebra without validating it; see [`check_metrized_lie`].
    pub fn from_parts(name: &str, metric: Matrix, structure: Vec<Rational>, basis_names: Vec<String>) -> Result<MetrizedLie> {
        let dim = metric.len();
        if metric.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("metric is not square".into()));
        }
        if structure.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch(structure.len(), dim * dim * dim));
        }
        if basis_names.len() != dim {
            return Err(Error::DimensionMismatch(basis_names.len(), dim));
        }
        Ok(MetrizedLie {
            name: name.to_string(),
            dim,
            inverse: invert(&metric),
            metric,
            structure,
            basis_names,
            roots: None,
            matrices: None,
        })
    }

    pub fn f(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.structure[(a * self.dim + b) * self.dim + c]
    }

    pub fn set_f(&mut self, a: usize, b: usize, c: usize, q: Rational) {
        let d = self.dim;
        self.structure[(a * d + b) * d + c] = q;
    }

    pub fn inverse_metric(&self) -> Result<&Matrix> {
        self.inverse.as_ref().ok_or_else(|| Error::Violation {
            invariant: "metric invertibility".into(),
            location: self.name.clone(),
        })
    }

    /// Bracket coefficients `C^e_{ab}` with `[x_a, x_b] = Σ_e C^e_{ab} x_e`,
    /// as a sparse list per `(a, b)`.
    pub fn bracket(&self) -> Result<Vec<Vec<(usize, Rational)>>> {
        let g = self.inverse_metric()?;
        let d = self.dim;
        let mut out = vec![Vec::new(); d * d];
        for a in 0..d {
            for b in 0..d {
                for (e, ge) in g.iter().enumerate() {
                    let mut q = Rational::zero();
                    for (c, gec) in ge.iter().enumerate() {
                        if !gec.is_zero() {
                            q += gec * self.f(a, b, c);
                        }
                    }
                    if !q.is_zero() {
                        out[a * d + b].push((e, q));
                    }
                }
            }
        }
        Ok(out)
    }

    /// The variable names `X[name]` used for coordinates on g.
    pub fn coordinate_names(&self, prefix: &str) -> Vec<String> {
        self.basis_names.iter().map(|n| format!("{prefix}[{n}]")).collect()
    }
}

fn violation(invariant: &str, location: String) -> Error {
    Error::Violation {
        invariant: invariant.into(),
        location,
    }
}

/// Verifies that the form is symmetric and invertible, that the structure
/// tensor is totally antisymmetric, and that the bracket satisfies Jacobi.
pub fn check_metrized_lie(l: &MetrizedLie) -> Result<()> {
    let d = l.dim;
    for a in 0..d {
        for b in 0..a {
            if l.metric[a][b] != l.metric[b][a] {
                return Err(violation("metric symmetry", format!("({}, {})", l.basis_names[a], l.basis_names[b])));
            }
        }
    }
    l.inverse_metric()?;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let q = l.f(a, b, c);
                if *q != -l.f(b, a, c).clone() || q != l.f(b, c, a) {
                    return Err(violation(
                        "antisymmetry",
                        format!("({}, {}, {})", l.basis_names[a], l.basis_names[b], l.basis_names[c]),
                    ));
                }
            }
        }
    }
    let br = l.bracket()?;
    // [[a,b],c] + [[b,c],a] + [[c,a],b] = 0
    let double = |a: usize, b: usize, c: usize, out: &mut Vec<Rational>| {
        for (e, q) in &br[a * d + b] {
            for (h, r) in &br[e * d + c] {
                out[*h] += q * r;
            }
        }
    };
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut total = vec![Rational::zero(); d];
                double(a, b, c, &mut total);
                double(b, c, a, &mut total);
                double(c, a, b, &mut total);
                if total.iter().any(|q| !q.is_zero()) {
                    return Err(violation(
                        "Jacobi identity",
                        format!("({}, {}, {})", l.basis_names[a], l.basis_names[b], l.basis_names[c]),
                    ));
                }
            }
        }
    }
    Ok(())
}

type Mat = Vec<Vec<Rational>>;

fn elementary(n: usize, i: usize, j: usize) -> Mat {
    let mut m = vec![vec![Rational::zero(); n]; n];
    m[i][j] = Rational::one();
    m
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    crate::linalg::mat_mul(a, b)
}

fn trace(m: &Mat) -> Rational {
    (0..m.len()).fold(Rational::zero(), |acc, i| acc + &m[i][i])
}

fn commutator(a: &Mat, b: &Mat) -> Mat {
    let (x, y) = (matmul(a, b), matmul(b, a));
    x.iter()
        .zip(&y)
        .map(|(r, s)| r.iter().zip(s).map(|(p, q)| p - q).collect())
        .collect()
}

/// sl_N with the trace form of the defining representation.
pub fn make_sl(n: usize, limits: &Limits) -> Result<MetrizedLie> {
    make_sl_scaled(n, &Rational::one(), limits)
}

/// sl_N with `scale` times the trace form.
///
/// Basis: `E_ij` for `i ≠ j` in lexicographic order, then
/// `H_k = E_kk − E_{k+1,k+1}`.
pub fn make_sl_scaled(n: usize, scale: &Rational, limits: &Limits) -> Result<MetrizedLie> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sl_N needs N ≥ 2, got {n}")));
    }
    if scale.is_zero() {
        return Err(Error::InvalidArgument("form scale must be nonzero".into()));
    }
    Limits::check("Lie algebra dimension", n * n - 1, limits.lie_dim_cap)?;
    let mut basis = Vec::new();
    let mut names = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                basis.push(elementary(n, i, j));
                names.push(format!("E{}{}", i + 1, j + 1));
            }
        }
    }
    let mut cartan_indices = Vec::new();
    for k in 0..n - 1 {
        let mut h = elementary(n, k, k);
        h[k + 1][k + 1] = -Rational::one();
        cartan_indices.push(basis.len());
        basis.push(h);
        names.push(format!("H{}", k + 1));
    }
    let d = basis.len();
    let metric: Matrix = (0..d)
        .map(|a| (0..d).map(|b| scale * trace(&matmul(&basis[a], &basis[b]))).collect())
        .collect();
    let mut structure = vec![Rational::zero(); d * d * d];
    for a in 0..d {
        for b in 0..d {
            let br = commutator(&basis[a], &basis[b]);
            if br.iter().all(|r| r.iter().all(Zero::is_zero)) {
                continue;
            }
            for c in 0..d {
                structure[(a * d + b) * d + c] = scale * trace(&matmul(&br, &basis[c]));
            }
        }
    }
    let mut l = MetrizedLie::from_parts(&format!("sl{n}"), metric, structure, names)?;
    l.matrices = Some(basis);

    let rank = n - 1;
    let gram: Matrix = cartan_indices
        .iter()
        .map(|&a| cartan_indices.iter().map(|&b| l.metric[a][b].clone()).collect())
        .collect();
    let gram_inverse = invert(&gram).expect("Cartan Gram matrix is invertible");
    let mut positive_roots = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            // α = e_i − e_j evaluated on H_k = E_kk − E_{k+1,k+1}
            let at = |m: usize| -> i64 { i64::from(m == i) - i64::from(m == j) };
            positive_roots.push((0..rank).map(|k| int(at(k) - at(k + 1))).collect());
        }
    }
    l.roots = Some(RootData {
        rank,
        cartan_indices,
        gram,
        gram_inverse,
        positive_roots,
        rho: vec![Rational::one(); rank],
    });
    Ok(l)
}

/// Builds `sl2`, `sl3`, … from a name.
pub fn lie_by_name(name: &str, scale: &Rational, limits: &Limits) -> Result<MetrizedLie> {
    let n = name
        .strip_prefix("sl")
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| Error::UnsupportedAlgebra(format!("{name} (expected slN)")))?;
    make_sl_scaled(n, scale, limits)
}

/// `(ad X)^a_b` as linear forms in the coordinates `X^c`.
pub fn ad_endomorphism(l: &MetrizedLie) -> Result<Vec<Vec<Poly>>> {
    let d = l.dim;
    let br = l.bracket()?;
    let mut m = vec![vec![Poly::zero(d); d]; d];
    for c in 0..d {
        for b in 0..d {
            for (a, q) in &br[c * d + b] {
                m[*a][b].add_scaled(&Poly::var(d, c), q);
            }
        }
    }
    Ok(m)
}
