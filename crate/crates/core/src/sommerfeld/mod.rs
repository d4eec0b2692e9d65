//! Sommerfeld-type integrals for the reaction field.
//!
//! The double spectral integrals are reduced with
//! `int_0^{2pi} e^{i k rho cos(alpha - phi)} e^{i m alpha} d alpha = 2 pi i^m J_m(k rho) e^{i m phi}`
//! to one-dimensional integrals `R(m, n) = int_0^inf J_m(k rho) e^{-k zeta} sigma(k) k^n dk`,
//! which [`quadrature::radial_table`] evaluates for a whole `(m, n)` block at once.

pub mod bessel;
pub mod cagniard;
pub mod quadrature;

use num_complex::Complex64;

use crate::densities::Density;
use crate::error::{Error, Result};
use crate::geometry::{polar_xy, sub, Vec3};
use crate::harmonics::{constants, idx, ipow, sign, tri_len};
use crate::medium::{polarization_source, tau_map, LayeredMedium, ReactionComponent};

pub use bessel::bessel_j;
pub use cagniard::{branch_sqrt, cagniard_identity_check, CagniardFunction};
pub use quadrature::{radial_integral, radial_table, Quad, RadialIntegralSpec, RadialTable};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

fn check_point_layer(medium: &LayeredMedium, z: f64, layer: usize) -> Result<()> {
    if medium.layer_of(z)? != layer {
        return Err(Error::WrongLayer { z, layer });
    }
    Ok(())
}

fn density_fn(medium: &LayeredMedium, comp: ReactionComponent) -> Result<impl Fn(f64) -> Complex64 + Sync> {
    let d = Density::new(medium, comp)?;
    Ok(move |k: f64| d.at(k))
}

/// Reaction component `u^{ab}_{l l'}(r, r')` with its absolute error estimate.
pub fn eval_reaction_green(
    medium: &LayeredMedium,
    comp: ReactionComponent,
    r: Vec3,
    rp: Vec3,
    tol: f64,
) -> Result<Quad> {
    comp.check(medium)?;
    check_point_layer(medium, r[2], comp.ell)?;
    check_point_layer(medium, rp[2], comp.ellp)?;
    let t = tau_map(medium, comp, r, rp)?;
    let f = density_fn(medium, comp)?;
    let q = radial_integral(
        &RadialIntegralSpec { order: 0, power: 0, rho: t[0].hypot(t[1]), zeta: t[2], density: &f },
        tol,
    )?;
    Ok(Quad { value: q.value / FOUR_PI, error: q.error / FOUR_PI })
}

/// Which of the two equivalent multipole forms a basis belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeForm {
    /// Center and charges in polarization coordinates.
    Polarization,
    /// Center and charges at their physical positions in the source layer.
    Direct,
}

/// Triangular `(n, m)` table of complex values with per-entry error estimates.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    pub p: usize,
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    /// Largest quadrature error relative to the integrand L1 norm.
    pub rel_error: f64,
}

impl CoefficientTable {
    pub fn get(&self, n: usize, m: i64) -> Complex64 {
        self.values[idx(n, m)]
    }
}

/// Geometry of a multipole basis: transverse polar offset and decay depth.
fn basis_geometry(
    medium: &LayeredMedium,
    comp: ReactionComponent,
    form: MeForm,
    r: Vec3,
    center: Vec3,
) -> Result<(f64, f64, f64)> {
    let (rho, phi) = polar_xy(sub(r, center));
    let zeta = match form {
        MeForm::Polarization => {
            if comp.a == 1 {
                r[2] - center[2]
            } else {
                center[2] - r[2]
            }
        }
        MeForm::Direct => {
            check_point_layer(medium, center[2], comp.ellp)?;
            tau_map(medium, comp, r, center)?[2]
        }
    };
    if !(zeta > 0.0) {
        return Err(Error::CenterOnWrongSide { z: center[2] });
    }
    Ok((rho, phi, zeta))
}

/// All reaction multipole basis functions `F_nm(r)` for `n <= p` about `center`.
pub fn me_basis_table(
    medium: &LayeredMedium,
    comp: ReactionComponent,
    form: MeForm,
    p: usize,
    r: Vec3,
    center: Vec3,
    tol: f64,
) -> Result<CoefficientTable> {
    comp.check(medium)?;
    check_point_layer(medium, r[2], comp.ell)?;
    let (rho, phi, zeta) = basis_geometry(medium, comp, form, r, center)?;
    let f = density_fn(medium, comp)?;
    let tab = radial_table(p, p, rho, zeta, &f, tol)?;
    let k = constants();
    let mut values = vec![Complex64::new(0.0, 0.0); tri_len(p)];
    let mut errors = vec![0.0; tri_len(p)];
    for n in 0..=p {
        for m in -(n as i64)..=n as i64 {
            let am = m.unsigned_abs() as usize;
            let s = match (form, comp.a, comp.b) {
                (MeForm::Polarization, 1, _) => sign(n as i64),
                (MeForm::Polarization, _, _) => sign(m),
                (MeForm::Direct, _, 1) => sign(m),
                (MeForm::Direct, _, _) => sign(n as i64),
            };
            let pre = s * k.c(n).powi(2) * k.cnm(n, m) * ipow(am as i64) * Complex64::from_polar(1.0, m as f64 * phi);
            values[idx(n, m)] = pre * tab.get(am, n);
            errors[idx(n, m)] = pre.norm() * tab.abs_error(am, n);
        }
    }
    Ok(CoefficientTable { p, values, errors, rel_error: tab.rel_error })
}

/// Single basis function `F_nm`; zero for `|m| > n`.
#[allow(clippy::too_many_arguments)]
pub fn eval_me_basis(
    medium: &LayeredMedium,
    comp: ReactionComponent,
    form: MeForm,
    n: usize,
    m: i64,
    r: Vec3,
    center: Vec3,
    tol: f64,
) -> Result<Complex64> {
    if m.unsigned_abs() as usize > n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(me_basis_table(medium, comp, form, n, r, center, tol)?.get(n, m))
}

/// Reaction local-expansion coefficients about `target_center` generated by point charges
/// `(q, r')` at their physical positions.
pub fn reaction_le_table(
    medium: &LayeredMedium,
    comp: ReactionComponent,
    p: usize,
    target_center: Vec3,
    charges: &[(f64, Vec3)],
    tol: f64,
) -> Result<CoefficientTable> {
    comp.check(medium)?;
    check_point_layer(medium, target_center[2], comp.ell)?;
    let f = density_fn(medium, comp)?;
    let k = constants();
    let mut values = vec![Complex64::new(0.0, 0.0); tri_len(p)];
    let mut errors = vec![0.0; tri_len(p)];
    let mut rel = 0.0f64;
    for &(q, rp) in charges {
        check_point_layer(medium, rp[2], comp.ellp)?;
        let pol = polarization_source(medium, comp, rp)?;
        let (rho, phi) = polar_xy(sub(target_center, pol));
        let zeta = if comp.a == 1 { target_center[2] - pol[2] } else { pol[2] - target_center[2] };
        let tab = radial_table(p, p, rho, zeta, &f, tol)?;
        rel = rel.max(tab.rel_error);
        for n in 0..=p {
            for m in -(n as i64)..=n as i64 {
                let am = m.unsigned_abs() as usize;
                let s = if comp.a == 1 { 1.0 } else { sign(n as i64 + m) };
                let pre = q * s / FOUR_PI * k.cnm(n, m) * ipow(am as i64) * Complex64::from_polar(1.0, -(m as f64) * phi);
                values[idx(n, m)] += pre * tab.get(am, n);
                errors[idx(n, m)] += pre.norm() * tab.abs_error(am, n);
            }
        }
    }
    Ok(CoefficientTable { p, values, errors, rel_error: rel })
}

/// One reaction LE coefficient for a unit charge at `source_point`.
#[allow(clippy::too_many_arguments)]
pub fn eval_reaction_le_coeff(
    medium: &LayeredMedium,
    comp: ReactionComponent,
    n: usize,
    m: i64,
    target_center: Vec3,
    source_point: Vec3,
    tol: f64,
) -> Result<Complex64> {
    if m.unsigned_abs() as usize > n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(reaction_le_table(medium, comp, n, target_center, &[(1.0, source_point)], tol)?.get(n, m))
}

/// Dense reaction M2L operator `T_{nm, n'm'}` for degrees up to `p`, source center in
/// polarization coordinates.
#[derive(Debug, Clone)]
pub struct M2lMatrix {
    pub p: usize,
    entries: Vec<Complex64>,
    errors: Vec<f64>,
    pub rel_error: f64,
}

impl M2lMatrix {
    pub fn get(&self, n: usize, m: i64, np: usize, mp: i64) -> Complex64 {
        self.entries[idx(n, m) * tri_len(self.p) + idx(np, mp)]
    }

    pub fn error(&self, n: usize, m: i64, np: usize, mp: i64) -> f64 {
        self.errors[idx(n, m) * tri_len(self.p) + idx(np, mp)]
    }

    /// `L_nm = sum_{n'm'} T_{nm,n'm'} M_{n'm'}` truncated at degree `p_out` on both sides.
    pub fn apply(&self, me: &[Complex64], p_out: usize) -> Vec<Complex64> {
        let w = tri_len(self.p);
        (0..tri_len(p_out))
            .map(|i| (0..tri_len(p_out)).map(|j| self.entries[i * w + j] * me[j]).sum())
            .collect()
    }
}

pub fn reaction_m2l_matrix(
    medium: &LayeredMedium,
    comp: ReactionComponent,
    p: usize,
    target_center: Vec3,
    source_center: Vec3,
    tol: f64,
) -> Result<M2lMatrix> {
    comp.check(medium)?;
    check_point_layer(medium, target_center[2], comp.ell)?;
    let (rho, phi) = polar_xy(sub(target_center, source_center));
    let zeta = if comp.a == 1 { target_center[2] - source_center[2] } else { source_center[2] - target_center[2] };
    if !(zeta > 0.0) {
        return Err(Error::CenterOnWrongSide { z: source_center[2] });
    }
    let k = constants();
    if 2 * p > k.p_max {
        return Err(Error::Overflow(2 * p));
    }
    let f = density_fn(medium, comp)?;
    let tab = radial_table(2 * p, 2 * p, rho, zeta, &f, tol)?;
    let w = tri_len(p);
    let mut entries = vec![Complex64::new(0.0, 0.0); w * w];
    let mut errors = vec![0.0; w * w];
    for n in 0..=p {
        for m in -(n as i64)..=n as i64 {
            for np in 0..=p {
                for mp in -(np as i64)..=np as i64 {
                    let q = mp - m;
                    let aq = q.unsigned_abs() as usize;
                    let s = if comp.a == 1 { sign(np as i64) } else { sign(n as i64 + m + mp) };
                    let pre = s
                        * k.c(np).powi(2)
                        * k.cnm(n, m)
                        * k.cnm(np, mp)
                        * ipow(aq as i64)
                        * Complex64::from_polar(1.0, q as f64 * phi);
                    let at = idx(n, m) * w + idx(np, mp);
                    entries[at] = pre * tab.get(aq, n + np);
                    errors[at] = pre.norm() * tab.abs_error(aq, n + np);
                }
            }
        }
    }
    Ok(M2lMatrix { p, entries, errors, rel_error: tab.rel_error })
}

/// One entry of the reaction M2L operator.
#[allow(clippy::too_many_arguments)]
pub fn eval_reaction_m2l_entry(
    medium: &LayeredMedium,
    comp: ReactionComponent,
    n: usize,
    m: i64,
    np: usize,
    mp: i64,
    target_center: Vec3,
    source_center: Vec3,
    tol: f64,
) -> Result<Complex64> {
    if m.unsigned_abs() as usize > n || mp.unsigned_abs() as usize > np {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let p = n.max(np);
    Ok(reaction_m2l_matrix(medium, comp, p, target_center, source_center, tol)?.get(n, m, np, mp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_layer(eps: f64) -> LayeredMedium {
        LayeredMedium::dielectric(vec![0.0], vec![1.0, eps]).unwrap()
    }

    #[test]
    fn image_charge_potential() {
        let m = two_layer(4.0);
        let c = ReactionComponent::new(1, 1, 0, 0);
        let (r, rp) = ([0.3, -0.2, 1.1], [0.0, 0.4, 0.7]);
        let u = eval_reaction_green(&m, c, r, rp, 1e-12).unwrap();
        let img = [rp[0], rp[1], -rp[2]];
        let expect = (1.0 - 4.0) / (1.0 + 4.0) / (FOUR_PI * crate::geometry::norm(sub(r, img)));
        assert!((u.value.re - expect).abs() < 1e-12 * expect.abs());
        assert!(u.value.im.abs() < 1e-15);
    }

    #[test]
    fn wrong_layer_rejected() {
        let m = two_layer(4.0);
        let c = ReactionComponent::new(1, 1, 0, 0);
        assert!(matches!(
            eval_reaction_green(&m, c, [0.0, 0.0, -1.0], [0.0, 0.0, 1.0], 1e-10),
            Err(Error::WrongLayer { .. })
        ));
    }

    #[test]
    fn monopole_basis_matches_green() {
        let m = LayeredMedium::dielectric(vec![0.0, -1.0], vec![1.0, 3.0, 0.5]).unwrap();
        let c = ReactionComponent::new(1, 1, 0, 0);
        let src = [0.1, 0.2, 0.6];
        let r = [0.5, -0.3, 1.4];
        let pol = polarization_source(&m, c, src).unwrap();
        let f = eval_me_basis(&m, c, MeForm::Polarization, 0, 0, r, pol, 1e-12).unwrap();
        let m00 = 1.0 / FOUR_PI.sqrt();
        let u = eval_reaction_green(&m, c, r, src, 1e-12).unwrap().value;
        assert!((f * m00 - u).norm() < 1e-12 * u.norm());
    }

    #[test]
    fn basis_conjugation() {
        let m = LayeredMedium::dielectric(vec![0.0, -1.0], vec![1.0, 3.0, 0.5]).unwrap();
        let c = ReactionComponent::new(2, 1, 1, 1);
        let t = me_basis_table(&m, c, MeForm::Direct, 5, [0.3, 0.1, -0.4], [-0.2, 0.1, -0.6], 1e-12).unwrap();
        for n in 0..=5usize {
            for mm in 1..=n as i64 {
                let lhs = t.get(n, -mm);
                let rhs = sign(mm) * t.get(n, mm).conj();
                assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
            }
        }
    }

    #[test]
    fn m2l_monopole_is_lipschitz() {
        let m = two_layer(3.0);
        let c = ReactionComponent::new(1, 1, 0, 0);
        let s = [0.2, 0.0, -2.0];
        let t = [0.0, 0.5, 1.5];
        let v = eval_reaction_m2l_entry(&m, c, 0, 0, 0, 0, t, s, 1e-12).unwrap();
        let kappa = (1.0 - 3.0) / 4.0;
        let expect = kappa / crate::geometry::norm(sub(t, s));
        assert!((v.re - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn le_at_center_matches_green() {
        let m = LayeredMedium::dielectric(vec![0.0, -1.0], vec![1.0, 3.0, 0.5]).unwrap();
        let c = ReactionComponent::new(1, 2, 0, 1);
        let src = [0.2, -0.1, -0.5];
        let tc = [0.0, 0.0, 0.8];
        let l = eval_reaction_le_coeff(&m, c, 0, 0, tc, src, 1e-12).unwrap();
        let y00 = 1.0 / FOUR_PI.sqrt();
        let u = eval_reaction_green(&m, c, tc, src, 1e-12).unwrap().value;
        assert!((l * y00 - u).norm() < 1e-12 * u.norm());
    }

    #[test]
    fn homogeneous_components_absent() {
        let m = LayeredMedium::homogeneous();
        let c = ReactionComponent::new(1, 1, 0, 0);
        assert!(matches!(
            eval_reaction_green(&m, c, [0.0, 0.0, 1.0], [0.0, 0.0, 2.0], 1e-10),
            Err(Error::ComponentAbsent { .. })
        ));
    }
}
