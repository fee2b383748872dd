//! End-to-end checks: weights of Ω against j^{1/2}, the unknot value
//! against j^{1/2} on the Cartan, and the orbit integral against the
//! Duflo operator.

use super::cartan::hbar_coefficients;
use super::orbit::OrbitMeasure;
use super::poly::{univariate, Poly, Truncation, XSeries};
use super::{
    casimir, duflo_apply, j_half_series, lift_invariant, restrict_j_to_cartan, restrict_x_to_cartan,
    restrict_xi_to_cartan, sg_integrate, unknot_rt_series, LegForm, MetrizedLie, WeightSystem,
};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::report::{CheckRecord, ResidualTerm};
use crate::wheeling::{omega_series, OmegaElement};

fn cartan_names(l: &MetrizedLie) -> Vec<String> {
    let rank = l.roots.as_ref().map_or(0, |r| r.rank);
    (1..=rank).map(|k| format!("y{k}")).collect()
}

/// κ^ħT_g(Ω) against j^{1/2} through X-degree `x_degree`. Ω must be known
/// through that degree.
pub fn check_tg_omega(l: &MetrizedLie, omega: &OmegaElement, x_degree: usize, limits: &Limits) -> Result<Vec<ResidualTerm>> {
    if x_degree > omega.max_degree {
        return Err(Error::InsufficientTruncation {
            available: omega.max_degree,
            required: x_degree,
        });
    }
    let lhs = WeightSystem::new(l, LegForm::Dual)?
        .combo(&omega.value.truncated(x_degree))?
        .with_truncation(Truncation::XDegree(x_degree));
    let rhs = j_half_series(l, x_degree, limits)?;
    lhs.residual(&rhs, &l.coordinate_names("X"))
}

/// The unknot value against j^{-1/2}(ħρ)·j^{1/2}(ħλ), the right side from
/// the determinant route restricted to the Cartan.
fn check_unknot(l: &MetrizedLie, x_degree: usize, limits: &Limits) -> Result<Vec<ResidualTerm>> {
    let r = l
        .roots
        .as_ref()
        .ok_or_else(|| Error::UnsupportedAlgebra(format!("{} has no root data", l.name)))?;
    let lhs = unknot_rt_series(l, x_degree, limits)?;
    let j_lambda = restrict_x_to_cartan(l, &j_half_series(l, x_degree, limits)?)?;
    let at_rho = hbar_coefficients(&j_lambda, &r.rho, x_degree)?;
    let inv = univariate::inverse(&at_rho, x_degree + 1)?;
    let mut factor = XSeries::zero(r.rank, Truncation::HbarDegree(x_degree as i32));
    for (h, q) in inv.iter().enumerate() {
        factor.add_part(h as i32, &Poly::constant(r.rank, q.clone()));
    }
    let rhs = factor.mul(&j_lambda)?;
    lhs.residual(&rhs, &cartan_names(l))
}

/// S_g applied to the unknot value equals j^{1/2}(ħλ). For algebras
/// other than sl2 the orbit integral is replaced by D(j^{1/2}).
fn check_orbit_step(l: &MetrizedLie, x_degree: usize, limits: &Limits) -> Result<Vec<ResidualTerm>> {
    let z = unknot_rt_series(l, x_degree, limits)?;
    let lifted = z.map_parts(l.dim, |p| lift_invariant(l, p))?;
    let integrated = if OrbitMeasure::for_lie(l).is_ok() {
        sg_integrate(l, &lifted)?
    } else {
        duflo_apply(&j_half_series(l, x_degree, limits)?, &lifted)?
    };
    let lhs = restrict_xi_to_cartan(l, &integrated)?;
    let rhs = restrict_j_to_cartan(l, x_degree, limits)?;
    lhs.residual(&rhs, &cartan_names(l))
}

/// The three checks of the Wheels theorem at the level of `l`, each
/// reported separately.
pub fn verify_wheels_theorem(l: &MetrizedLie, x_degree: usize, limits: &Limits) -> Result<Vec<CheckRecord>> {
    Limits::check("X-degree", x_degree, limits.x_degree_cap)?;
    let omega = omega_series(x_degree, limits)?;
    let base = |route: &str| {
        vec![
            ("algebra", l.name.clone()),
            ("x_degree", x_degree.to_string()),
            ("route", route.to_string()),
        ]
    };
    let orbit_route = if OrbitMeasure::for_lie(l).is_ok() {
        "sphere moments"
    } else {
        "Duflo substitute"
    };
    Ok(vec![
        CheckRecord::run(format!("wheels[a] {}", l.name), &base("weights of Ω vs determinant"), || {
            check_tg_omega(l, &omega, x_degree, limits)
        }),
        CheckRecord::run(format!("wheels[b] {}", l.name), &base("roots product vs determinant"), || {
            check_unknot(l, x_degree, limits)
        }),
        CheckRecord::run(format!("wheels[c] {}", l.name), &base(orbit_route), || {
            check_orbit_step(l, x_degree, limits)
        }),
    ])
}

/// D(j^{1/2})p = S_g p on sl2 for p = 1, (ξ,ξ), (ξ,ξ)², … up to degree
/// `max_degree`.
pub fn verify_face_ce(l: &MetrizedLie, max_degree: usize, limits: &Limits) -> Result<Vec<CheckRecord>> {
    Limits::check("X-degree", max_degree, limits.x_degree_cap)?;
    OrbitMeasure::for_lie(l)?;
    let j = j_half_series(l, max_degree, limits)?;
    let c = casimir(l)?;
    let names = l.coordinate_names("xi");
    let mut out = Vec::new();
    for k in 0..=max_degree / 2 {
        let p = XSeries::from_poly(0, c.pow(k), Truncation::Exact);
        let label = match k {
            0 => "1".to_string(),
            1 => "(xi,xi)".to_string(),
            _ => format!("(xi,xi)^{k}"),
        };
        let inputs = [("algebra", l.name.clone()), ("p", label.clone())];
        out.push(CheckRecord::run(format!("face-ce[{label}]"), &inputs, || {
            let lhs = duflo_apply(&j, &p)?;
            let rhs = sg_integrate(l, &p)?;
            lhs.residual(&rhs, &names)
        }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::make_sl;
    use crate::report::Status;

    #[test]
    fn sl2_low_degree_passes() {
        let lim = Limits::default();
        let l = make_sl(2, &lim).unwrap();
        for r in verify_wheels_theorem(&l, 4, &lim).unwrap() {
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
        for r in verify_face_ce(&l, 4, &lim).unwrap() {
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
    }

    #[test]
    fn omega_must_cover_the_degree() {
        let lim = Limits::default();
        let l = make_sl(2, &lim).unwrap();
        let omega = omega_series(2, &lim).unwrap();
        assert_eq!(
            check_tg_omega(&l, &omega, 4, &lim),
            Err(Error::InsufficientTruncation { available: 2, required: 4 })
        );
    }
}
