//! Reaction-field expansions built from equivalent polarization sources (or, for the
//! direct form, from the physical sources) and evaluated through Sommerfeld integrals.

use num_complex::Complex64;
use serde::Serialize;

use super::free::{local_degree_terms, multipole_coefficients, partial_sums};
use super::{real_part_checked, ChargeSystem, ExpansionKind, HarmonicExpansion};
use crate::error::{Error, Result};
use crate::geometry::{norm, sub, Vec3};
use crate::harmonics::idx;
use crate::medium::{polarization_source, LayeredMedium, ReactionComponent};
use crate::sommerfeld::{me_basis_table, reaction_le_table, reaction_m2l_matrix, M2lMatrix, MeForm};

/// Quadrature bookkeeping carried alongside a reaction result.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct QuadStats {
    /// Largest error estimate relative to the integrand L1 norm.
    pub rel_error: f64,
    /// Absolute error estimate propagated to the result.
    pub abs_error: f64,
}

impl QuadStats {
    pub fn merge(self, o: QuadStats) -> QuadStats {
        QuadStats { rel_error: self.rel_error.max(o.rel_error), abs_error: self.abs_error.max(o.abs_error) }
    }
}

fn check_charges(system: &ChargeSystem, comp: ReactionComponent) -> Result<()> {
    for c in &system.charges {
        if c.point.layer() != comp.ellp {
            return Err(Error::WrongLayer { z: c.position()[2], layer: comp.ellp });
        }
    }
    Ok(())
}

/// Polarization centers must sit across the interface from the target layer.
pub fn check_polarization_center(medium: &LayeredMedium, comp: ReactionComponent, center: Vec3) -> Result<()> {
    let ok = if comp.a == 1 {
        center[2] < medium.d(comp.ell as isize)
    } else {
        center[2] > medium.d(comp.ell as isize - 1)
    };
    if !ok {
        return Err(Error::CenterOnWrongSide { z: center[2] });
    }
    Ok(())
}

/// Reaction multipole expansion of component `comp` about `center`.
///
/// With [`MeForm::Polarization`] the center lives in polarization coordinates and the
/// charges are mapped to their equivalent polarization sources; with [`MeForm::Direct`]
/// the center is a physical point in the source layer.
#[allow(clippy::too_many_arguments)]
pub fn reaction_me_from_charges(
    system: &ChargeSystem,
    medium: &LayeredMedium,
    comp: ReactionComponent,
    form: MeForm,
    center: Vec3,
    radius: f64,
    p: usize,
) -> Result<HarmonicExpansion> {
    comp.check(medium)?;
    check_charges(system, comp)?;
    match form {
        MeForm::Polarization => check_polarization_center(medium, comp, center)?,
        MeForm::Direct => {
            if medium.layer_of(center[2])? != comp.ellp {
                return Err(Error::WrongLayer { z: center[2], layer: comp.ellp });
            }
        }
    }
    let mut pts = Vec::with_capacity(system.len());
    for c in &system.charges {
        let x = match form {
            MeForm::Polarization => polarization_source(medium, comp, c.position())?,
            MeForm::Direct => c.position(),
        };
        let d = norm(sub(x, center));
        if d > radius {
            return Err(Error::ChargeOutsideBox { dist: d, radius });
        }
        pts.push((c.q, x));
    }
    if p > crate::harmonics::constants().p_max {
        return Err(Error::Overflow(p));
    }
    let coeff = multipole_coefficients(&pts, center, p);
    Ok(HarmonicExpansion { kind: ExpansionKind::ReactionMultipole { component: comp, form }, center, p, coeff })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReactionEval {
    pub value: f64,
    /// Value truncated at each degree `0..=p`.
    pub partial: Vec<f64>,
    pub quad: QuadStats,
}

pub fn eval_reaction_me(exp: &HarmonicExpansion, medium: &LayeredMedium, r: Vec3, tol: f64) -> Result<ReactionEval> {
    let ExpansionKind::ReactionMultipole { component, form } = exp.kind else {
        return Err(Error::Config("eval_reaction_me needs a reaction multipole".into()));
    };
    let basis = me_basis_table(medium, component, form, exp.p, r, exp.center, tol)?;
    let mut terms = vec![Complex64::new(0.0, 0.0); exp.p + 1];
    let mut mags = vec![0.0; exp.p + 1];
    let mut err = 0.0;
    for n in 0..=exp.p {
        for m in -(n as i64)..=n as i64 {
            let c = exp.coeff[idx(n, m)];
            let t = c * basis.values[idx(n, m)];
            terms[n] += t;
            mags[n] += t.norm();
            err += c.norm() * basis.errors[idx(n, m)];
        }
    }
    let partial = partial_sums(&terms, &mags)?;
    Ok(ReactionEval { value: *partial.last().unwrap(), partial, quad: QuadStats { rel_error: basis.rel_error, abs_error: err } })
}

/// Reaction local expansion about `center` (in the target layer). Polarization sources
/// must lie outside `radius`.
#[allow(clippy::too_many_arguments)]
pub fn reaction_le_from_charges(
    system: &ChargeSystem,
    medium: &LayeredMedium,
    comp: ReactionComponent,
    center: Vec3,
    radius: f64,
    p: usize,
    tol: f64,
) -> Result<(HarmonicExpansion, QuadStats)> {
    comp.check(medium)?;
    check_charges(system, comp)?;
    for c in &system.charges {
        let x = polarization_source(medium, comp, c.position())?;
        let d = norm(sub(x, center));
        if d <= radius {
            return Err(Error::ChargeInsideBox { dist: d, radius });
        }
    }
    let t = reaction_le_table(medium, comp, p, center, &system.pairs(), tol)?;
    let err = t.errors.iter().cloned().fold(0.0, f64::max);
    let exp = HarmonicExpansion { kind: ExpansionKind::Local, center, p, coeff: t.values };
    Ok((exp, QuadStats { rel_error: t.rel_error, abs_error: err }))
}

/// Reaction M2L operator for a polarization-form multipole; the separation
/// `|target - source| > a_s + a_t` is required.
pub fn reaction_m2l_operator(
    exp: &HarmonicExpansion,
    medium: &LayeredMedium,
    target_center: Vec3,
    a_s: f64,
    a_t: f64,
    tol: f64,
) -> Result<M2lMatrix> {
    let ExpansionKind::ReactionMultipole { component, form: MeForm::Polarization } = exp.kind else {
        return Err(Error::Config("reaction M2L needs a polarization-form reaction multipole".into()));
    };
    let d = norm(sub(target_center, exp.center));
    if d <= a_s + a_t {
        return Err(Error::BoxesNotSeparated { dist: d, required: a_s + a_t });
    }
    reaction_m2l_matrix(medium, component, exp.p, target_center, exp.center, tol)
}

/// Applies a precomputed operator at truncation `p <= op.p`.
pub fn apply_m2l(op: &M2lMatrix, exp: &HarmonicExpansion, target_center: Vec3, p: usize) -> HarmonicExpansion {
    let coeff = op.apply(&exp.coeff, p.min(op.p).min(exp.p));
    let p = p.min(op.p).min(exp.p);
    HarmonicExpansion { kind: ExpansionKind::Local, center: target_center, p, coeff }
}

#[allow(clippy::too_many_arguments)]
pub fn m2l_reaction(
    exp: &HarmonicExpansion,
    medium: &LayeredMedium,
    target_center: Vec3,
    a_s: f64,
    a_t: f64,
    p: usize,
    tol: f64,
) -> Result<HarmonicExpansion> {
    let op = reaction_m2l_operator(&exp.truncated(p), medium, target_center, a_s, a_t, tol)?;
    Ok(apply_m2l(&op, exp, target_center, p))
}

/// Local expansion evaluated with the free-space basis `r^n Y_n^m`, per degree.
pub fn eval_local_partial(exp: &HarmonicExpansion, r: Vec3) -> Result<Vec<f64>> {
    let (t, a) = local_degree_terms(&exp.coeff, exp.p, exp.center, r);
    partial_sums(&t, &a)
}

/// Real value of a complex sum, after the residue check.
pub fn checked(value: Complex64, abs_sum: f64) -> Result<f64> {
    real_part_checked(value, abs_sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::add;
    use crate::sommerfeld::eval_reaction_green;

    fn medium() -> LayeredMedium {
        LayeredMedium::dielectric(vec![0.0, -2.0], vec![1.0, 4.0, 2.0]).unwrap()
    }

    #[test]
    fn single_charge_polarization_me() {
        let m = medium();
        let c = ReactionComponent::new(1, 1, 0, 0);
        let src = [0.1, -0.1, 1.2];
        let sys = ChargeSystem::new(&m, &[(1.0, src)]).unwrap();
        let center = polarization_source(&m, c, [0.0, 0.0, 1.0]).unwrap();
        let e = reaction_me_from_charges(&sys, &m, c, MeForm::Polarization, center, 0.5, 14).unwrap();
        let r = [0.5, 0.3, 1.5];
        let v = eval_reaction_me(&e, &m, r, 1e-12).unwrap();
        let u = eval_reaction_green(&m, c, r, src, 1e-12).unwrap().value.re;
        assert!((v.value - u).abs() < 1e-9 * u.abs(), "{} {}", v.value, u);
    }

    #[test]
    fn wrong_side_center() {
        let m = medium();
        let c = ReactionComponent::new(1, 1, 0, 0);
        let sys = ChargeSystem::new(&m, &[(1.0, [0.0, 0.0, 1.0])]).unwrap();
        assert!(matches!(
            reaction_me_from_charges(&sys, &m, c, MeForm::Polarization, [0.0, 0.0, 1.0], 0.5, 4),
            Err(Error::CenterOnWrongSide { .. })
        ));
    }

    #[test]
    fn m2l_matches_le() {
        let m = medium();
        let c = ReactionComponent::new(1, 2, 0, 1);
        let src = [0.1, 0.2, -1.0];
        let sys = ChargeSystem::new(&m, &[(1.0, src)]).unwrap();
        let center = polarization_source(&m, c, src).unwrap();
        let me = reaction_me_from_charges(&sys, &m, c, MeForm::Polarization, center, 0.5, 8).unwrap();
        let tc = [0.0, 0.0, 1.0];
        let l1 = m2l_reaction(&me, &m, tc, 0.5, 0.5, 8, 1e-12).unwrap();
        let (l2, _) = reaction_le_from_charges(&sys, &m, c, tc, 0.5, 8, 1e-12).unwrap();
        for (a, b) in l1.coeff.iter().zip(&l2.coeff) {
            assert!((a - b).norm() < 1e-11 * (1.0 + b.norm()));
        }
        let r = add(tc, [0.1, -0.1, 0.1]);
        let u = eval_reaction_green(&m, c, r, src, 1e-12).unwrap().value.re;
        let v = *eval_local_partial(&l1, r).unwrap().last().unwrap();
        assert!((u - v).abs() < 1e-8 * u.abs());
    }
}
