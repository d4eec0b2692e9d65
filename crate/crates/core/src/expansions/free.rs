//! Free-space multipole and local expansions of `1/(4 pi |r - r'|)` and their translations.

use num_complex::Complex64;

use super::{real_part_checked, ChargeSystem, ExpansionKind, HarmonicExpansion};
use crate::error::{Error, Result};
use crate::geometry::{norm, sub, SphericalCoord, Vec3};
use crate::harmonics::{constants, idx, sign, sph_harm_table, tri_len};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// `M_nm = (1 / (4 pi c_n^2)) sum_j q_j s_j^n conj(Y_n^m(s_j))` with `s_j = r_j - center`.
pub(crate) fn multipole_coefficients(charges: &[(f64, Vec3)], center: Vec3, p: usize) -> Vec<Complex64> {
    let k = constants();
    let mut out = vec![Complex64::new(0.0, 0.0); tri_len(p)];
    for &(q, x) in charges {
        let s = SphericalCoord::from_cartesian(sub(x, center));
        let y = sph_harm_table(p, s.theta, s.phi);
        let mut rn = 1.0;
        for n in 0..=p {
            let w = q * rn / (FOUR_PI * k.c(n).powi(2));
            for m in -(n as i64)..=n as i64 {
                out[idx(n, m)] += w * y[idx(n, m)].conj();
            }
            rn *= s.r;
        }
    }
    out
}

pub fn me_from_charges(system: &ChargeSystem, center: Vec3, radius: f64, p: usize) -> Result<HarmonicExpansion> {
    check_p(p)?;
    for c in &system.charges {
        let d = norm(sub(c.position(), center));
        if d > radius {
            return Err(Error::ChargeOutsideBox { dist: d, radius });
        }
    }
    let coeff = multipole_coefficients(&system.pairs(), center, p);
    Ok(HarmonicExpansion { kind: ExpansionKind::Multipole, center, p, coeff })
}

/// `L_nm = (1 / (4 pi c_n^2)) sum_j q_j s_j^{-n-1} conj(Y_n^m(s_j))`; charges must lie
/// strictly outside `radius`.
pub fn le_from_charges(system: &ChargeSystem, center: Vec3, radius: f64, p: usize) -> Result<HarmonicExpansion> {
    check_p(p)?;
    let k = constants();
    let mut coeff = vec![Complex64::new(0.0, 0.0); tri_len(p)];
    for c in &system.charges {
        let s = SphericalCoord::from_cartesian(sub(c.position(), center));
        if s.r <= radius {
            return Err(Error::ChargeInsideBox { dist: s.r, radius });
        }
        let y = sph_harm_table(p, s.theta, s.phi);
        let mut rn = 1.0 / s.r;
        for n in 0..=p {
            let w = c.q * rn / (FOUR_PI * k.c(n).powi(2));
            for m in -(n as i64)..=n as i64 {
                coeff[idx(n, m)] += w * y[idx(n, m)].conj();
            }
            rn /= s.r;
        }
    }
    Ok(HarmonicExpansion { kind: ExpansionKind::Local, center, p, coeff })
}

fn check_p(p: usize) -> Result<()> {
    if p > constants().p_max {
        return Err(Error::Overflow(p));
    }
    Ok(())
}

/// Per-degree contributions `sum_m M_nm Y_n^m / r^{n+1}` and the sum of their moduli.
pub fn multipole_degree_terms(coeff: &[Complex64], p: usize, center: Vec3, r: Vec3) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let s = SphericalCoord::from_cartesian(sub(r, center));
    if s.r == 0.0 {
        return Err(Error::RegionViolation("multipole evaluated at its center".into()));
    }
    let y = sph_harm_table(p, s.theta, s.phi);
    let mut terms = vec![Complex64::new(0.0, 0.0); p + 1];
    let mut mags = vec![0.0; p + 1];
    let mut rn = 1.0 / s.r;
    for n in 0..=p {
        for m in -(n as i64)..=n as i64 {
            let t = coeff[idx(n, m)] * y[idx(n, m)] * rn;
            terms[n] += t;
            mags[n] += t.norm();
        }
        rn /= s.r;
    }
    Ok((terms, mags))
}

/// Per-degree contributions `sum_m L_nm r^n Y_n^m` and the sum of their moduli.
pub fn local_degree_terms(coeff: &[Complex64], p: usize, center: Vec3, r: Vec3) -> (Vec<Complex64>, Vec<f64>) {
    let s = SphericalCoord::from_cartesian(sub(r, center));
    let y = sph_harm_table(p, s.theta, s.phi);
    let mut terms = vec![Complex64::new(0.0, 0.0); p + 1];
    let mut mags = vec![0.0; p + 1];
    let mut rn = 1.0;
    for n in 0..=p {
        for m in -(n as i64)..=n as i64 {
            let t = coeff[idx(n, m)] * y[idx(n, m)] * rn;
            terms[n] += t;
            mags[n] += t.norm();
        }
        rn *= s.r;
    }
    (terms, mags)
}

/// Running real partial sums over degree, each checked for imaginary residue.
pub fn partial_sums(terms: &[Complex64], mags: &[f64]) -> Result<Vec<f64>> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    let mut out = Vec::with_capacity(terms.len());
    for (t, a) in terms.iter().zip(mags) {
        acc += t;
        mag += a;
        out.push(real_part_checked(acc, mag)?);
    }
    Ok(out)
}

pub fn eval_multipole(exp: &HarmonicExpansion, r: Vec3) -> Result<f64> {
    let (t, a) = multipole_degree_terms(&exp.coeff, exp.p, exp.center, r)?;
    Ok(*partial_sums(&t, &a)?.last().expect("p + 1 terms"))
}

pub fn eval_local(exp: &HarmonicExpansion, r: Vec3) -> Result<f64> {
    let (t, a) = local_degree_terms(&exp.coeff, exp.p, exp.center, r);
    Ok(*partial_sums(&t, &a)?.last().expect("p + 1 terms"))
}

/// Multipole-to-multipole shift; exact for the same order.
pub fn m2m(exp: &HarmonicExpansion, new_center: Vec3) -> Result<HarmonicExpansion> {
    let p = exp.p;
    let k = constants();
    let ss = SphericalCoord::from_cartesian(sub(exp.center, new_center));
    let y = sph_harm_table(p, ss.theta, ss.phi);
    let rpow: Vec<f64> = (0..=p).map(|j| ss.r.powi(j as i32)).collect();
    let mut out = HarmonicExpansion::zeros(exp.kind, new_center, p);
    for n in 0..=p {
        for m in -(n as i64)..=n as i64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for nu in 0..=n {
                let d = n - nu;
                for mu in -(nu as i64)..=nu as i64 {
                    if (m - mu).unsigned_abs() as usize > d {
                        continue;
                    }
                    let w = sign(m.abs() - mu.abs()) * k.a(d, m - mu) * k.a(nu, mu) * rpow[d]
                        / (k.c(d).powi(2) * k.a(n, m));
                    acc += w * y[idx(d, mu - m)] * exp.coeff[idx(nu, mu)];
                }
            }
            out.coeff[idx(n, m)] = acc;
        }
    }
    Ok(out)
}

/// Local-to-local shift of the truncated expansion; the shifted polynomial is identical.
pub fn l2l(exp: &HarmonicExpansion, new_center: Vec3) -> Result<HarmonicExpansion> {
    let p = exp.p;
    let k = constants();
    let tt = SphericalCoord::from_cartesian(sub(exp.center, new_center));
    let y = sph_harm_table(p, tt.theta, tt.phi);
    let rpow: Vec<f64> = (0..=p).map(|j| tt.r.powi(j as i32)).collect();
    let mut out = HarmonicExpansion::zeros(exp.kind, new_center, p);
    for n in 0..=p {
        for m in -(n as i64)..=n as i64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for nu in n..=p {
                let d = nu - n;
                for mu in -(nu as i64)..=nu as i64 {
                    let q = mu - m;
                    if q.unsigned_abs() as usize > d {
                        continue;
                    }
                    let e = d as i64 - q.abs() + mu.abs() - m.abs();
                    let w = sign(e) * k.c(nu).powi(2) * k.a(d, q) * k.a(n, m) * rpow[d]
                        / (k.c(d).powi(2) * k.c(n).powi(2) * k.a(nu, mu));
                    acc += w * y[idx(d, q)] * exp.coeff[idx(nu, mu)];
                }
            }
            out.coeff[idx(n, m)] = acc;
        }
    }
    Ok(out)
}

/// Multipole-to-local translation truncated at degree `p` on both sides.
/// Requires `|source center - target center| > a_s + a_t`.
pub fn m2l_free(exp: &HarmonicExpansion, target_center: Vec3, a_s: f64, a_t: f64, p: usize) -> Result<HarmonicExpansion> {
    let k = constants();
    if 2 * p > k.p_max {
        return Err(Error::Overflow(2 * p));
    }
    let st = SphericalCoord::from_cartesian(sub(exp.center, target_center));
    if st.r <= a_s + a_t {
        return Err(Error::BoxesNotSeparated { dist: st.r, required: a_s + a_t });
    }
    let y = sph_harm_table(2 * p, st.theta, st.phi);
    let inv: Vec<f64> = (0..=2 * p + 1).map(|j| st.r.powi(-(j as i32))).collect();
    let pin = p.min(exp.p);
    let mut out = HarmonicExpansion::zeros(ExpansionKind::Local, target_center, p);
    for n in 0..=p {
        for m in -(n as i64)..=n as i64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for nu in 0..=pin {
                for mu in -(nu as i64)..=nu as i64 {
                    let q = mu - m;
                    let w = sign(nu as i64 + m.abs()) * k.a(nu, mu) * k.a(n, m)
                        / (k.c(n).powi(2) * k.a(n + nu, q))
                        * inv[n + nu + 1];
                    acc += w * y[idx(n + nu, q)] * exp.coeff[idx(nu, mu)];
                }
            }
            out.coeff[idx(n, m)] = acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::add;

    fn cloud() -> ChargeSystem {
        ChargeSystem::free(&[
            (0.8, [0.3, -0.2, 0.4]),
            (-0.5, [-0.5, 0.1, -0.2]),
            (0.3, [0.1, 0.6, 0.2]),
            (-0.9, [0.0, -0.3, -0.7]),
        ])
    }

    #[test]
    fn unit_charge_at_center() {
        let s = ChargeSystem::free(&[(1.0, [1.0, 2.0, 3.0])]);
        let e = me_from_charges(&s, [1.0, 2.0, 3.0], 0.5, 6).unwrap();
        assert!((e.get(0, 0).re - 1.0 / FOUR_PI.sqrt()).abs() < 1e-16);
        assert!(e.coeff[1..].iter().all(|c| c.norm() == 0.0));
        let r = [1.0, 2.0, 5.0];
        assert!((eval_multipole(&e, r).unwrap() - 1.0 / (FOUR_PI * 2.0)).abs() < 1e-16);
    }

    #[test]
    fn dipole() {
        let h = 0.2;
        let s = ChargeSystem::free(&[(1.0, [0.0, 0.0, h]), (-1.0, [0.0, 0.0, -h])]);
        let e = me_from_charges(&s, [0.0; 3], 1.0, 4).unwrap();
        assert!(e.get(0, 0).norm() < 1e-17);
        let m10 = e.get(1, 0).re;
        let e2 = me_from_charges(&ChargeSystem::free(&[(1.0, [0.0, 0.0, 2.0 * h]), (-1.0, [0.0, 0.0, -2.0 * h])]), [0.0; 3], 1.0, 4).unwrap();
        assert!((e2.get(1, 0).re - 2.0 * m10).abs() < 1e-15);
        assert!(e.get(1, 1).norm() < 1e-17);
    }

    #[test]
    fn me_converges() {
        let s = cloud();
        let e = me_from_charges(&s, [0.0; 3], 1.0, 30).unwrap();
        let r = [3.0, -2.0, 4.0];
        assert!((eval_multipole(&e, r).unwrap() - s.free_potential(r)).abs() < 1e-14);
        assert!(e.conjugate_symmetry_defect() < 1e-16);
    }

    #[test]
    fn le_converges() {
        let s = ChargeSystem::free(&[(1.0, [4.0, 1.0, -2.0]), (-0.4, [-3.0, 3.0, 1.0])]);
        let e = le_from_charges(&s, [0.0; 3], 1.0, 40).unwrap();
        let r = [0.2, -0.1, 0.3];
        assert!((eval_local(&e, r).unwrap() - s.free_potential(r)).abs() < 1e-15);
        assert!(matches!(le_from_charges(&s, [3.9, 1.0, -2.0], 0.5, 4), Err(Error::ChargeInsideBox { .. })));
    }

    #[test]
    fn m2m_is_recomputation() {
        let s = cloud();
        let e = me_from_charges(&s, [0.0; 3], 1.0, 12).unwrap();
        let c2 = [0.4, -0.3, 0.5];
        let shifted = m2m(&e, c2).unwrap();
        let direct = me_from_charges(&s, c2, 2.0, 12).unwrap();
        for (a, b) in shifted.coeff.iter().zip(&direct.coeff) {
            assert!((a - b).norm() <= 1e-13 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn l2l_same_polynomial() {
        let s = ChargeSystem::free(&[(1.0, [4.0, 1.0, -2.0])]);
        let e = le_from_charges(&s, [0.0; 3], 1.0, 10).unwrap();
        let c2 = [0.3, 0.2, -0.1];
        let sh = l2l(&e, c2).unwrap();
        for r in [[0.1, 0.2, 0.3], [-0.5, 0.4, 0.0], [1.0, -1.0, 0.5]] {
            let a = eval_local(&e, r).unwrap();
            let b = eval_local(&sh, r).unwrap();
            assert!((a - b).abs() < 1e-15 * (1.0 + a.abs()), "{a} {b}");
        }
    }

    #[test]
    fn m2l_single_charge() {
        let q = [0.1, -0.2, 0.3];
        let s = ChargeSystem::free(&[(1.0, q)]);
        let me = me_from_charges(&s, [0.0; 3], 1.0, 20).unwrap();
        let tc = [0.0, 0.0, 4.0 * 1.0001];
        let le = m2l_free(&me, tc, 1.0, 1.0, 20).unwrap();
        let r = add(tc, [0.2, 0.3, -0.4]);
        assert!((eval_local(&le, r).unwrap() - s.free_potential(r)).abs() < 1e-10);
        assert!(matches!(m2l_free(&me, [0.0, 0.0, 1.5], 1.0, 1.0, 4), Err(Error::BoxesNotSeparated { .. })));
    }
}
