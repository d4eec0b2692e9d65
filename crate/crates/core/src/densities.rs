//! Reaction densities by the interface-matrix recursion.
//!
//! Only decaying exponentials `e_l = exp(-k D_l)` appear, so every quantity stays
//! bounded on the closed right half plane.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::medium::{LayeredMedium, ReactionComponent};

pub type M2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn mul(x: &M2, y: &M2) -> M2 {
    let mut r = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    r
}

fn check_k(k: Complex64) -> Result<()> {
    if !(k.re >= 0.0) || !k.im.is_finite() || !k.re.is_finite() {
        return Err(Error::InvalidSpectralArgument { re: k.re });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct InterfaceMatrices {
    pub k: Complex64,
    /// `e_l`, `l = 0..=L`.
    pub e: Vec<Complex64>,
    /// `gamma_l^+`, `gamma_l^-` for `l = 1..=L` (index 0 unused).
    pub gamma_p: Vec<f64>,
    pub gamma_m: Vec<f64>,
    /// `ttilde[l-1]` is the rescaled transmission matrix between layers `l-1` and `l`.
    pub ttilde: Vec<M2>,
    /// `2 e_l` times the rescaled source matrix, `l = 0..=L`.
    pub sbreve: Vec<M2>,
    /// Cumulative products, `alpha[0] = I`.
    pub alpha: Vec<M2>,
}

impl InterfaceMatrices {
    pub fn new(medium: &LayeredMedium, k: Complex64) -> Result<Self> {
        check_k(k)?;
        let l = medium.num_interfaces();
        let (a, b) = (medium.a(), medium.b());
        let e: Vec<Complex64> = (0..=l).map(|j| (-k * medium.thickness(j)).exp()).collect();
        let mut gamma_p = vec![f64::NAN; l + 1];
        let mut gamma_m = vec![f64::NAN; l + 1];
        for j in 1..=l {
            gamma_p[j] = a[j] / a[j - 1] + b[j] / b[j - 1];
            gamma_m[j] = a[j] / a[j - 1] - b[j] / b[j - 1];
        }
        let ttilde: Vec<M2> = (1..=l)
            .map(|j| {
                let (gp, gm) = (gamma_p[j], gamma_m[j]);
                [[gp * e[j - 1] * e[j], gm * e[j - 1]], [gm * e[j], ONE * gp]]
            })
            .collect();
        let sbreve = (0..=l)
            .map(|j| {
                [
                    [e[j] / a[j], e[j] / b[j]],
                    [Complex64::new(1.0 / a[j], 0.0), Complex64::new(-1.0 / b[j], 0.0)],
                ]
            })
            .collect();
        let mut alpha = Vec::with_capacity(l + 1);
        alpha.push([[ONE, ZERO], [ZERO, ONE]]);
        for t in &ttilde {
            let next = mul(alpha.last().unwrap(), t);
            alpha.push(next);
        }
        let m = Self { k, e, gamma_p, gamma_m, ttilde, sbreve, alpha };
        debug_assert!(m.inequality_margin() > -1e-9, "second-row inequality violated");
        Ok(m)
    }

    pub fn num_interfaces(&self) -> usize {
        self.ttilde.len()
    }

    /// `C^{(l1)} / C^{(l2)}` for `l1 <= l2`: the product of `2 e_j` over `l1 <= j < l2`.
    pub fn cratio(&self, l1: usize, l2: usize) -> Complex64 {
        (l1..l2).fold(ONE, |acc, j| acc * 2.0 * self.e[j])
    }

    /// Smallest relative slack of `|a22|^2 - |a21|^2 >= prod((g+)^2 - (g-)^2)` over all layers.
    pub fn inequality_margin(&self) -> f64 {
        let mut prod = 1.0;
        let mut worst = f64::INFINITY;
        for j in 1..self.alpha.len() {
            prod *= self.gamma_p[j].powi(2) - self.gamma_m[j].powi(2);
            let lhs = self.alpha[j][1][1].norm_sqr() - self.alpha[j][1][0].norm_sqr();
            worst = worst.min(lhs / prod - 1.0);
        }
        worst
    }

    /// Row 2 of `alpha[l]` times `2 e_l S(l)` applied to `v`.
    fn source_row(&self, l: usize, v: [f64; 2]) -> Complex64 {
        let s = &self.sbreve[l];
        let w0 = s[0][0] * v[0] + s[0][1] * v[1];
        let w1 = s[1][0] * v[0] + s[1][1] * v[1];
        self.alpha[l][1][0] * w0 + self.alpha[l][1][1] * w1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactionDensitySet {
    pub ell: usize,
    pub ellp: usize,
    /// `sigma[a-1][b-1]`, `None` for vanishing components.
    pub sigma: [[Option<Complex64>; 2]; 2],
}

impl ReactionDensitySet {
    pub fn get(&self, a: u8, b: u8) -> Result<Complex64> {
        self.sigma[(a - 1) as usize][(b - 1) as usize].ok_or(Error::ComponentAbsent {
            a,
            b,
            ell: self.ell,
            ellp: self.ellp,
        })
    }
}

/// Full density profile for a source layer: `sigma^{ab}_{l l'}` for every target layer `l`.
#[derive(Debug, Clone)]
pub struct DensityColumn {
    pub s11: Vec<Complex64>,
    pub s12: Vec<Complex64>,
    pub s21: Vec<Complex64>,
    pub s22: Vec<Complex64>,
}

pub fn density_column(mats: &InterfaceMatrices, medium: &LayeredMedium, ellp: usize) -> Result<DensityColumn> {
    let l = mats.num_interfaces();
    medium.check_layer(ellp)?;
    let (a, b) = (medium.a(), medium.b());
    let mut s11 = vec![ZERO; l + 1];
    let mut s12 = vec![ZERO; l + 1];
    let mut s21 = vec![ZERO; l + 1];
    let mut s22 = vec![ZERO; l + 1];
    if l == 0 {
        return Ok(DensityColumn { s11, s12, s21, s22 });
    }
    let inv22 = |j: usize| -> Result<Complex64> {
        let d = mats.alpha[j][1][1];
        if d.norm() < 1e-300 {
            return Err(Error::DegenerateDenominator(d.norm()));
        }
        Ok(d.inv())
    };
    let src1 = (ellp < l).then(|| mats.source_row(ellp, [-a[ellp], b[ellp]]));
    let src2 = (ellp > 0).then(|| mats.source_row(ellp - 1, [a[ellp], b[ellp]]));
    if let Some(s) = src1 {
        s21[l] = -mats.cratio(ellp + 1, l) * s * inv22(l)?;
    }
    if let Some(s) = src2 {
        s22[l] = -mats.cratio(ellp, l) * s * inv22(l)?;
    }
    for j in (0..l).rev() {
        let t11 = mats.gamma_p[j + 1] * mats.e[j + 1] * 0.5;
        let t12 = mats.gamma_m[j + 1] * 0.5;
        s11[j] = t11 * s11[j + 1] + t12 * s21[j + 1];
        s12[j] = t11 * s12[j + 1] + t12 * s22[j + 1];
        if ellp > 0 && j == ellp - 1 {
            s12[j] += 0.5 * mats.gamma_p[ellp];
        }
        if j > 0 {
            let a21 = mats.alpha[j][1][0];
            let i22 = inv22(j)?;
            s21[j] = match src1 {
                Some(s) if j > ellp => -(mats.cratio(ellp + 1, j) * s + a21 * s11[j]) * i22,
                _ => -a21 * s11[j] * i22,
            };
            s22[j] = match src2 {
                Some(s) if j >= ellp => -(mats.cratio(ellp, j) * s + a21 * s12[j]) * i22,
                _ => -a21 * s12[j] * i22,
            };
        }
    }
    Ok(DensityColumn { s11, s12, s21, s22 })
}

/// All four densities for the layer pair `(ell, ellp)` at `k`.
pub fn reaction_densities(medium: &LayeredMedium, ell: usize, ellp: usize, k: Complex64) -> Result<ReactionDensitySet> {
    medium.check_layer(ell)?;
    medium.check_layer(ellp)?;
    let mats = InterfaceMatrices::new(medium, k)?;
    let col = density_column(&mats, medium, ellp)?;
    let mut sigma = [[None; 2]; 2];
    for (ai, row) in sigma.iter_mut().enumerate() {
        for (bi, slot) in row.iter_mut().enumerate() {
            let c = ReactionComponent::new(ai as u8 + 1, bi as u8 + 1, ell, ellp);
            if c.exists(medium) {
                *slot = Some(match (ai, bi) {
                    (0, 0) => col.s11[ell],
                    (0, 1) => col.s12[ell],
                    (1, 0) => col.s21[ell],
                    _ => col.s22[ell],
                });
            }
        }
    }
    Ok(ReactionDensitySet { ell, ellp, sigma })
}

/// Density of one component as a function of real `k >= 0`.
#[derive(Debug, Clone)]
pub struct Density {
    medium: LayeredMedium,
    comp: ReactionComponent,
    /// Test hook: multiply the density by a constant.
    factor: f64,
}

impl Density {
    pub fn new(medium: &LayeredMedium, comp: ReactionComponent) -> Result<Self> {
        comp.check(medium)?;
        Ok(Self { medium: medium.clone(), comp, factor: 1.0 })
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.factor *= factor;
        self
    }

    pub fn component(&self) -> ReactionComponent {
        self.comp
    }

    pub fn medium(&self) -> &LayeredMedium {
        &self.medium
    }

    pub fn eval(&self, k: Complex64) -> Result<Complex64> {
        let set = reaction_densities(&self.medium, self.comp.ell, self.comp.ellp, k)?;
        Ok(set.get(self.comp.a, self.comp.b)? * self.factor)
    }

    /// Real-axis evaluation; panics only on a corrupted recursion.
    pub fn at(&self, k: f64) -> Complex64 {
        self.eval(Complex64::new(k, 0.0)).expect("density evaluation on the real axis")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityBound {
    pub value: f64,
    pub sampled_max: f64,
    pub argmax: (f64, f64),
    pub k_max: f64,
    pub samples: usize,
}

/// Estimate of `sup |sigma^{ab}|` on the closed right half plane from the boundary rays
/// `[0, k_max]` and `i [-k_max, k_max]`, times 1.05.
pub fn density_bound(medium: &LayeredMedium, comp: ReactionComponent) -> Result<DensityBound> {
    density_bound_with(medium, comp, 1e3, 1.0)
}

/// `refine` scales the grid density (1 = default); larger grids never lower the estimate.
pub fn density_bound_with(medium: &LayeredMedium, comp: ReactionComponent, k_max: f64, refine: f64) -> Result<DensityBound> {
    let dens = Density::new(medium, comp)?;
    let total = medium.interfaces().first().zip(medium.interfaces().last()).map(|(t, b)| t - b).unwrap_or(0.0);
    let h = std::f64::consts::PI / (16.0 * (2.0 * total).max(1.0) * refine);
    let mut pts: Vec<Complex64> = Vec::new();
    let ngeo = (2000.0 * refine) as usize;
    pts.push(Complex64::new(0.0, 0.0));
    for i in 0..=ngeo {
        let t = 1e-4 * (k_max / 1e-4f64).powf(i as f64 / ngeo as f64);
        pts.push(Complex64::new(t, 0.0));
        pts.push(Complex64::new(0.0, t));
        pts.push(Complex64::new(0.0, -t));
    }
    let nuni = (k_max / h).ceil() as usize;
    for i in 1..=nuni {
        let t = (i as f64 * h).min(k_max);
        pts.push(Complex64::new(t, 0.0));
        pts.push(Complex64::new(0.0, t));
        pts.push(Complex64::new(0.0, -t));
    }
    let mut vals = Vec::with_capacity(pts.len());
    for &k in &pts {
        vals.push(dens.eval(k)?.norm());
    }
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]).then(i.cmp(&j)));
    let mut best = vals[order[0]];
    let mut arg = pts[order[0]];
    let mut samples = pts.len();
    for &i in order.iter().take(8) {
        let c = pts[i];
        let along_real = c.im == 0.0;
        let mut width = h;
        let mut center = if along_real { c.re } else { c.im };
        for _ in 0..3 {
            let mut local_best = (f64::NEG_INFINITY, center);
            for j in 0..=64 {
                let t = center - width + 2.0 * width * j as f64 / 64.0;
                let k = if along_real {
                    if t < 0.0 {
                        continue;
                    }
                    Complex64::new(t.min(k_max), 0.0)
                } else {
                    Complex64::new(0.0, t.clamp(-k_max, k_max))
                };
                let v = dens.eval(k)?.norm();
                samples += 1;
                if v > local_best.0 {
                    local_best = (v, t);
                }
                if v > best {
                    best = v;
                    arg = k;
                }
            }
            center = local_best.1;
            width /= 16.0;
        }
    }
    Ok(DensityBound { value: 1.05 * best, sampled_max: best, argmax: (arg.re, arg.im), k_max, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn homogeneous_two_layer_matrices() {
        let m = LayeredMedium::new(vec![0.0], vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
        let mats = InterfaceMatrices::new(&m, c(3.0, 0.0)).unwrap();
        let t = mats.ttilde[0];
        assert!((t[0][0] - 2.0 * mats.e[0] * mats.e[1]).norm() < 1e-15);
        assert!(t[0][1].norm() == 0.0 && t[1][0].norm() == 0.0);
        assert!((t[1][1] - 2.0).norm() < 1e-15);
    }

    #[test]
    fn zero_k_products() {
        let m = LayeredMedium::new(vec![1.0, 0.0], vec![1.0, 2.0, 1.5], vec![3.0, 1.0, 2.0]).unwrap();
        let mats = InterfaceMatrices::new(&m, c(0.0, 0.0)).unwrap();
        let mut acc: M2 = [[ONE, ZERO], [ZERO, ONE]];
        for j in 1..=2 {
            let (gp, gm) = (mats.gamma_p[j], mats.gamma_m[j]);
            acc = mul(&acc, &[[c(gp, 0.0), c(gm, 0.0)], [c(gm, 0.0), c(gp, 0.0)]]);
            for r in 0..2 {
                for s in 0..2 {
                    assert!((acc[r][s] - mats.alpha[j][r][s]).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn negative_real_part_rejected() {
        let m = LayeredMedium::dielectric(vec![0.0], vec![1.0, 2.0]).unwrap();
        assert!(matches!(InterfaceMatrices::new(&m, c(-1e-3, 0.0)), Err(Error::InvalidSpectralArgument { .. })));
    }

    #[test]
    fn image_coefficient() {
        let m = LayeredMedium::dielectric(vec![0.0], vec![2.0, 5.0]).unwrap();
        for k in [0.0, 0.5, 10.0, 300.0] {
            let s = reaction_densities(&m, 0, 0, c(k, 0.0)).unwrap();
            assert!((s.get(1, 1).unwrap() - (-3.0 / 7.0)).norm() < 1e-15);
            assert!(s.get(1, 2).is_err());
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let m = LayeredMedium::new(vec![0.5, -0.2, -1.0], vec![1.0, 2.0, 0.5, 1.3], vec![2.0, 1.0, 4.0, 0.7]).unwrap();
        let k = c(0.7, 2.3);
        for l in 0..=3 {
            for lp in 0..=3 {
                let s = reaction_densities(&m, l, lp, k).unwrap();
                let t = reaction_densities(&m, l, lp, k.conj()).unwrap();
                for a in 0..2 {
                    for b in 0..2 {
                        if let (Some(x), Some(y)) = (s.sigma[a][b], t.sigma[a][b]) {
                            assert!((x.conj() - y).norm() < 1e-14 * (1.0 + x.norm()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn no_overflow_at_large_k() {
        let m = LayeredMedium::dielectric(vec![0.0, -1.0, -3.0], vec![1.0, 4.0, 2.0, 9.0]).unwrap();
        for k in [100.0, 350.0, 700.0, 1e4] {
            for lp in 0..=3 {
                let s = reaction_densities(&m, 1, lp, c(k, 0.0)).unwrap();
                for v in s.sigma.iter().flatten().flatten() {
                    assert!(v.re.is_finite() && v.im.is_finite());
                }
            }
        }
    }

    #[test]
    fn two_layer_bound() {
        let m = LayeredMedium::dielectric(vec![0.0], vec![1.0, 10.0]).unwrap();
        let b = density_bound(&m, ReactionComponent::new(1, 1, 0, 0)).unwrap();
        let expect = 9.0 / 11.0 * 1.05;
        assert!((b.value - expect).abs() < 0.01 * expect);
    }

    #[test]
    fn homogeneous_bound_zero() {
        let m = LayeredMedium::new(vec![0.0, -1.0], vec![2.0; 3], vec![3.0; 3]).unwrap();
        for c in [ReactionComponent::new(2, 2, 1, 1), ReactionComponent::new(1, 1, 0, 1), ReactionComponent::new(1, 2, 1, 1)] {
            assert_eq!(density_bound(&m, c).unwrap().value, 0.0);
        }
    }
}
