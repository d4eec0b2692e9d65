//! Normalized Legendre functions, scaled spherical harmonics and translation constants.
//!
//! `Y_n^m(theta, phi) = P^_n^m(cos theta) e^{i m phi}` where the normalized function
//! `P^_n^m` (m >= 0) is non-negative near the pole and `P^_n^{-m} = (-1)^m P^_n^m`.
//! Tables are triangular, indexed by [`idx`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const P_MAX: usize = 60;

/// Flat index of `(n, m)` with `|m| <= n`.
#[inline]
pub fn idx(n: usize, m: i64) -> usize {
    ((n * n + n) as i64 + m) as usize
}

#[inline]
pub fn tri_len(p: usize) -> usize {
    (p + 1) * (p + 1)
}

#[inline]
pub fn sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `i^k` for any integer `k`.
#[inline]
pub fn ipow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Legendre polynomial by the three-term recurrence.
pub fn legendre_p(n: usize, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::DomainError(format!("legendre_p needs |x| <= 1, got {x}")));
    }
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return Ok(1.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    Ok(p1)
}

/// Normalized associated Legendre values `P^_n^m(x)` for `0 <= m <= n <= p`, stored at `idx(n, m)`.
/// Negative-m slots are filled with `(-1)^m P^_n^{|m|}`.
pub fn normalized_legendre(p: usize, x: f64) -> Vec<f64> {
    let mut t = vec![0.0; tri_len(p)];
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = (0.25 / PI).sqrt();
    for m in 0..=p {
        if m > 0 {
            pmm *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
        }
        t[idx(m, m as i64)] = pmm;
        if m + 1 <= p {
            t[idx(m + 1, m as i64)] = ((2 * m + 3) as f64).sqrt() * x * pmm;
        }
        for n in (m + 2)..=p {
            let (nf, mf) = (n as f64, m as f64);
            let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
            let b = (((nf - 1.0).powi(2) - mf * mf) / (4.0 * (nf - 1.0).powi(2) - 1.0)).sqrt();
            t[idx(n, m as i64)] = a * (x * t[idx(n - 1, m as i64)] - b * t[idx(n - 2, m as i64)]);
        }
    }
    for n in 1..=p {
        for m in 1..=n as i64 {
            t[idx(n, -m)] = sign(m) * t[idx(n, m)];
        }
    }
    t
}

/// All `Y_n^m(theta, phi)` for `n <= p`.
pub fn sph_harm_table(p: usize, theta: f64, phi: f64) -> Vec<Complex64> {
    let leg = normalized_legendre(p, theta.cos());
    let mut out = vec![Complex64::new(0.0, 0.0); tri_len(p)];
    let eip: Vec<Complex64> = (0..=p).map(|m| Complex64::from_polar(1.0, m as f64 * phi)).collect();
    for n in 0..=p {
        for m in -(n as i64)..=n as i64 {
            let e = if m >= 0 { eip[m as usize] } else { eip[(-m) as usize].conj() };
            out[idx(n, m)] = leg[idx(n, m)] * e;
        }
    }
    out
}

/// `Y_n^m(theta, phi)`, zero for `|m| > n`.
pub fn sph_harm(n: usize, m: i64, theta: f64, phi: f64) -> Complex64 {
    if m.unsigned_abs() as usize > n {
        return Complex64::new(0.0, 0.0);
    }
    let leg = normalized_legendre(n, theta.cos());
    leg[idx(n, m)] * Complex64::from_polar(1.0, m as f64 * phi)
}

/// `c_n`, `A_n^m` and `C_n^m` up to degree `p_max`.
#[derive(Debug, Clone)]
pub struct HarmonicConstants {
    pub p_max: usize,
    c: Vec<f64>,
    a: Vec<f64>,
    cnm: Vec<Complex64>,
}

impl HarmonicConstants {
    pub fn new(p_max: usize) -> Result<Self> {
        if p_max > P_MAX {
            return Err(Error::Overflow(p_max));
        }
        let mut lnf = vec![0.0f64; 2 * p_max + 2];
        for k in 1..lnf.len() {
            lnf[k] = lnf[k - 1] + (k as f64).ln();
        }
        let c: Vec<f64> = (0..=p_max).map(|n| ((2 * n + 1) as f64 / (4.0 * PI)).sqrt()).collect();
        let mut a = vec![0.0; tri_len(p_max)];
        let mut cnm = vec![Complex64::new(0.0, 0.0); tri_len(p_max)];
        for n in 0..=p_max {
            for m in -(n as i64)..=n as i64 {
                let lf = lnf[(n as i64 - m) as usize] + lnf[(n as i64 + m) as usize];
                a[idx(n, m)] = sign(n as i64) * c[n] * (-0.5 * lf).exp();
                let mag = (0.5 * ((4.0 * PI / (2 * n + 1) as f64).ln() - lf)).exp();
                cnm[idx(n, m)] = ipow(2 * n as i64 - m) * mag;
            }
        }
        Ok(Self { p_max, c, a, cnm })
    }

    #[inline]
    pub fn c(&self, n: usize) -> f64 {
        self.c[n]
    }

    /// `A_n^m`, zero for `|m| > n`.
    #[inline]
    pub fn a(&self, n: usize, m: i64) -> f64 {
        if m.unsigned_abs() as usize > n {
            0.0
        } else {
            self.a[idx(n, m)]
        }
    }

    /// `C_n^m`, zero for `|m| > n`.
    #[inline]
    pub fn cnm(&self, n: usize, m: i64) -> Complex64 {
        if m.unsigned_abs() as usize > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.cnm[idx(n, m)]
        }
    }
}

/// Shared table for the largest supported degree.
pub fn constants() -> &'static HarmonicConstants {
    static TABLE: std::sync::OnceLock<HarmonicConstants> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| HarmonicConstants::new(P_MAX).expect("table within range"))
}
