//! Numerical check of the hyperbolic contour deformation
//! `int_R f(xi) e^{i xi rho - sqrt(eta^2 + xi^2) z} d xi = i int_1^inf [f(xi_+) L_+ - f(xi_-) L_-] e^{-eta r t} / sqrt(t^2 - 1) dt`
//! with `xi_pm = (eta/r)(i rho t +- z sqrt(t^2-1))` and `L_pm = (eta/r)(rho sqrt(t^2-1) -+ i z t)`.
//! The right side is integrated in `s` with `t = cosh s`, which removes the endpoint singularity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{integrate_adaptive, upper_gamma_q};
use crate::error::{Error, Result};

/// `sqrt(z) = sqrt((|z| + x)/2) + i sign(y) sqrt((|z| - x)/2)` with `sign(0) = +1`.
pub fn branch_sqrt(z: Complex64) -> Complex64 {
    let a = z.norm();
    let s = if z.im < 0.0 { -1.0 } else { 1.0 };
    if a == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    // Take the larger component directly, the other from im = 2 w_re w_im.
    if z.re >= 0.0 {
        let re = ((a + z.re) * 0.5).sqrt();
        Complex64::new(re, z.im / (2.0 * re))
    } else {
        let im = ((a - z.re) * 0.5).sqrt();
        Complex64::new(z.im.abs() / (2.0 * im), s * im)
    }
}

/// Test functions, each analytic and polynomially bounded in the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CagniardFunction {
    One,
    Xi,
    XiSquared,
    ExpIXi,
}

impl CagniardFunction {
    pub const ALL: [CagniardFunction; 4] = [Self::One, Self::Xi, Self::XiSquared, Self::ExpIXi];

    pub fn eval(self, xi: Complex64) -> Complex64 {
        match self {
            Self::One => Complex64::new(1.0, 0.0),
            Self::Xi => xi,
            Self::XiSquared => xi * xi,
            Self::ExpIXi => (Complex64::i() * xi).exp(),
        }
    }

    fn growth(self) -> usize {
        match self {
            Self::Xi => 1,
            Self::XiSquared => 2,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::One => "1",
            Self::Xi => "xi",
            Self::XiSquared => "xi^2",
            Self::ExpIXi => "exp(i xi)",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CagniardCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub lhs_error: f64,
    pub rhs_error: f64,
}

impl CagniardCheck {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

pub fn cagniard_identity_check(f: CagniardFunction, rho: f64, z: f64, eta: f64, tol: f64) -> Result<CagniardCheck> {
    if !(z > 0.0 && rho >= 0.0 && eta > 0.0) {
        return Err(Error::DomainError(format!("need z > 0, rho >= 0, eta > 0; got z={z} rho={rho} eta={eta}")));
    }
    let inner = 1e-2 * tol;
    let n = f.growth();
    let lnf: f64 = (2..=n).map(|j| (j as f64).ln()).sum();
    // |f(xi)| <= |xi|^n on the real axis and e^{-z sqrt(eta^2+xi^2)} <= e^{-z |xi|}.
    let tail = |x: f64| 2.0 * (lnf - (n as f64 + 1.0) * z.ln()).exp() * upper_gamma_q(n, z * x);
    let mut x = 1.0;
    while tail(x) > 1e-3 * inner {
        x *= 1.25;
    }
    let lhs_fn = |xi: f64| {
        let s = (eta * eta + xi * xi).sqrt();
        f.eval(Complex64::new(xi, 0.0)) * Complex64::new(-z * s, xi * rho).exp()
    };
    let omega = rho + if f == CagniardFunction::ExpIXi { 1.0 } else { 0.0 };
    let width = (std::f64::consts::PI / omega.max(1e-300)).min(1.0).min(1.0 / z);
    let lhs = integrate_adaptive(&lhs_fn, -x, x, width, inner)?;

    let r = rho.hypot(z);
    let g = eta / r;
    let mut t = 1.0f64;
    while (-eta * r * t).exp() * (1.0 + eta * t).powi(n as i32 + 2) > 1e-6 * inner {
        t *= 1.1;
    }
    let s_max = t.acosh();
    let rhs_fn = |s: f64| {
        let (sh, ch) = (s.sinh(), s.cosh());
        let xp = g * Complex64::new(z * sh, rho * ch);
        let xm = g * Complex64::new(-z * sh, rho * ch);
        let lp = g * Complex64::new(rho * sh, -z * ch);
        let lm = g * Complex64::new(rho * sh, z * ch);
        Complex64::i() * (f.eval(xp) * lp - f.eval(xm) * lm) * (-eta * r * ch).exp()
    };
    let rhs = integrate_adaptive(&rhs_fn, 0.0, s_max, 0.25, inner)?;
    Ok(CagniardCheck { lhs: lhs.value, rhs: rhs.value, lhs_error: lhs.error + 1e-3 * inner, rhs_error: rhs.error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_examples() {
        assert_eq!(branch_sqrt(Complex64::new(4.0, 0.0)), Complex64::new(2.0, 0.0));
        assert_eq!(branch_sqrt(Complex64::new(-4.0, 0.0)), Complex64::new(0.0, 2.0));
        let w = branch_sqrt(Complex64::new(-3.0, -4.0));
        assert!((w - Complex64::new(1.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn contour_exponent() {
        // On the contour the phase i xi rho - sqrt(eta^2 + xi^2) z equals -eta r t.
        let (rho, z, eta) = (1.3, 0.7, 0.9);
        let r = f64::hypot(rho, z);
        for s in [0.1, 0.8, 2.0] {
            let (sh, ch) = (f64::sinh(s), f64::cosh(s));
            for sg in [1.0, -1.0] {
                let xi = eta / r * Complex64::new(sg * z * sh, rho * ch);
                let e = Complex64::i() * xi * rho - branch_sqrt(eta * eta + xi * xi) * z;
                assert!((e + eta * r * ch).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn unit_function_on_axis() {
        let c = cagniard_identity_check(CagniardFunction::One, 0.0, 1.0, 1.0, 1e-10).unwrap();
        // int e^{-sqrt(1+xi^2)} d xi = 2 K_1(1)
        let k1 = 0.601_907_230_197_234_6;
        assert!((c.lhs.re - 2.0 * k1).abs() < 1e-10);
        assert!(c.residual() < 1e-10);
    }
}
