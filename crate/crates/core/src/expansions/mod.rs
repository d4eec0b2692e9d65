//! Truncated expansions and the operators between them.
//!
//! Coefficients are stored in the triangular layout of [`crate::harmonics::idx`].
//! Free-space operators live in [`free`], reaction operators in [`reaction`].

pub mod free;
pub mod reaction;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::harmonics::{idx, sign, tri_len};
use crate::medium::{LayerPoint, LayeredMedium, ReactionComponent};
use crate::sommerfeld::MeForm;

pub use free::{eval_local, eval_multipole, l2l, le_from_charges, m2l_free, m2m, me_from_charges};
pub use reaction::{eval_reaction_me, m2l_reaction, reaction_le_from_charges, reaction_me_from_charges, ReactionEval};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExpansionKind {
    Multipole,
    Local,
    ReactionMultipole { component: ReactionComponent, form: MeForm },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicExpansion {
    pub kind: ExpansionKind,
    pub center: Vec3,
    pub p: usize,
    pub coeff: Vec<Complex64>,
}

impl HarmonicExpansion {
    pub fn zeros(kind: ExpansionKind, center: Vec3, p: usize) -> Self {
        Self { kind, center, p, coeff: vec![Complex64::new(0.0, 0.0); tri_len(p)] }
    }

    #[inline]
    pub fn get(&self, n: usize, m: i64) -> Complex64 {
        if n > self.p || m.unsigned_abs() as usize > n {
            return Complex64::new(0.0, 0.0);
        }
        self.coeff[idx(n, m)]
    }

    /// Same expansion cut to degree `p` (no-op if already shorter).
    pub fn truncated(&self, p: usize) -> Self {
        let p = p.min(self.p);
        Self { kind: self.kind, center: self.center, p, coeff: self.coeff[..tri_len(p)].to_vec() }
    }

    /// Coefficient-wise sum; both operands need the same kind, center and order.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.kind != other.kind || self.center != other.center || self.p != other.p {
            return Err(Error::Config("expansions differ in kind, center or order".into()));
        }
        let coeff = self.coeff.iter().zip(&other.coeff).map(|(a, b)| a + b).collect();
        Ok(Self { coeff, ..self.clone() })
    }

    /// Largest violation of `coeff(n,-m) = (-1)^m conj(coeff(n,m))`.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 0..=self.p {
            for m in 1..=n as i64 {
                let d = self.get(n, -m) - sign(m) * self.get(n, m).conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Charge {
    pub q: f64,
    pub point: LayerPoint,
}

impl Charge {
    pub fn position(&self) -> Vec3 {
        self.point.position()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChargeSystem {
    pub charges: Vec<Charge>,
}

impl ChargeSystem {
    /// Locates each charge's layer in `medium`.
    pub fn new(medium: &LayeredMedium, charges: &[(f64, Vec3)]) -> Result<Self> {
        let charges = charges
            .iter()
            .map(|&(q, x)| Ok(Charge { q, point: LayerPoint::locate(medium, x)? }))
            .collect::<Result<_>>()?;
        Ok(Self { charges })
    }

    /// Charges in free space.
    pub fn free(charges: &[(f64, Vec3)]) -> Self {
        Self::new(&LayeredMedium::homogeneous(), charges).expect("free space has no interfaces")
    }

    pub fn len(&self) -> usize {
        self.charges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charges.is_empty()
    }

    /// `Q = sum |q_j|`.
    pub fn total_abs_charge(&self) -> f64 {
        self.charges.iter().map(|c| c.q.abs()).sum()
    }

    pub fn pairs(&self) -> Vec<(f64, Vec3)> {
        self.charges.iter().map(|c| (c.q, c.position())).collect()
    }

    /// Direct free-space sum `sum q_j / (4 pi |r - r_j|)`.
    pub fn free_potential(&self, r: Vec3) -> f64 {
        self.charges
            .iter()
            .map(|c| c.q / (4.0 * std::f64::consts::PI * crate::geometry::norm(crate::geometry::sub(r, c.position()))))
            .sum()
    }
}

/// Real part of a complex sum after checking the imaginary residue against `1e-10 * sum |terms|`.
pub fn real_part_checked(value: Complex64, abs_sum: f64) -> Result<f64> {
    let threshold = 1e-10 * abs_sum;
    if value.im.abs() > threshold {
        return Err(Error::ImaginaryResidue { imag: value.im.abs(), threshold });
    }
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn superposition_is_coefficientwise() {
        let a = ChargeSystem::free(&[(0.7, [0.1, 0.2, -0.3]), (-0.2, [0.0, -0.4, 0.1])]);
        let b = ChargeSystem::free(&[(0.5, [-0.3, 0.1, 0.2])]);
        let mut u = a.clone();
        u.charges.extend(b.charges.iter().copied());
        let c = [0.0; 3];
        let ea = me_from_charges(&a, c, 1.0, 10).unwrap();
        let eb = me_from_charges(&b, c, 1.0, 10).unwrap();
        let eu = me_from_charges(&u, c, 1.0, 10).unwrap();
        let s = ea.add(&eb).unwrap();
        for (x, y) in s.coeff.iter().zip(&eu.coeff) {
            assert!((x - y).norm() <= 1e-14 * (1.0 + y.norm()));
        }
    }

    #[test]
    fn residue_check() {
        assert!(real_part_checked(Complex64::new(1.0, 1e-12), 1.0).is_ok());
        assert!(matches!(real_part_checked(Complex64::new(1.0, 1e-6), 1.0), Err(Error::ImaginaryResidue { .. })));
    }
}
