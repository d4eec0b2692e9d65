//! Composite Gauss-Legendre quadrature for `int_0^inf J_m(k rho) e^{-k zeta} sigma(k) k^n dk`.
//!
//! One call integrates a whole `(m, n)` table on shared nodes: the density and the
//! Bessel sequence are evaluated once per node. Panels are bisected greedily where a
//! panel and its two halves disagree most, relative to each entry's L1 norm.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use super::bessel::bessel_j_seq;
use crate::error::{Error, Result};

pub const MIN_TOL: f64 = 1e-13;
const GL_ORDER: usize = 32;
const MAX_PANELS: usize = 40_000;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// `ln Gamma(k+1)` for integer k.
fn ln_fact(k: usize) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// Regularized upper incomplete gamma `Q(n+1, x) = e^{-x} sum_{j<=n} x^j / j!`.
pub fn upper_gamma_q(n: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let lx = x.ln();
    let mut lf = 0.0;
    let mut s = 0.0;
    for j in 0..=n {
        if j > 0 {
            lf += (j as f64).ln();
        }
        s += (j as f64 * lx - lf - x).exp();
    }
    s.min(1.0)
}

/// Truncation point of the k-axis.
pub fn k_max(n_max: usize, rho: f64, zeta: f64, tol: f64) -> f64 {
    let mut x = (n_max + 1) as f64;
    while upper_gamma_q(n_max, x) > 1e-3 * tol {
        x += 1.0;
    }
    (60.0 / zeta).max(200.0 / rho.max(zeta)).max(x / zeta)
}

#[derive(Debug, Clone)]
pub struct RadialTable {
    pub m_max: usize,
    pub n_max: usize,
    pub rho: f64,
    pub zeta: f64,
    pub k_max: f64,
    pub panels: usize,
    pub nodes: usize,
    values: Vec<Complex64>,
    abs_err: Vec<f64>,
    l1: Vec<f64>,
    /// Largest error estimate relative to the entry's L1 norm.
    pub rel_error: f64,
}

impl RadialTable {
    #[inline]
    fn at(&self, m: usize, n: usize) -> usize {
        m * (self.n_max + 1) + n
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.values[self.at(m, n)]
    }

    /// Absolute error estimate (quadrature plus tail).
    pub fn abs_error(&self, m: usize, n: usize) -> f64 {
        self.abs_err[self.at(m, n)]
    }

    pub fn l1(&self, m: usize, n: usize) -> f64 {
        self.l1[self.at(m, n)]
    }
}

struct Panel {
    a: f64,
    b: f64,
    left: Vec<Complex64>,
    right: Vec<Complex64>,
    abs: Vec<f64>,
    err: Vec<f64>,
}

struct Scored(f64, usize);

impl PartialEq for Scored {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Scored {}
impl PartialOrd for Scored {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Scored {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0).then(o.1.cmp(&self.1))
    }
}

struct Integrand<'a> {
    m_max: usize,
    n_max: usize,
    rho: f64,
    zeta: f64,
    density: &'a (dyn Fn(f64) -> Complex64 + Sync),
}

impl Integrand<'_> {
    fn ncomp(&self) -> usize {
        (self.m_max + 1) * (self.n_max + 1)
    }

    /// Gauss rule on [a, b]: integral and integral of the absolute value.
    fn rule(&self, a: f64, b: f64, val: &mut [Complex64], abs: &mut [f64], sig_max: &mut f64) {
        let (x, w) = gl32();
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut jb = vec![0.0; self.m_max + 1];
        val.fill(Complex64::new(0.0, 0.0));
        abs.fill(0.0);
        for (xi, wi) in x.iter().zip(w) {
            let k = mid + half * xi;
            let s = (self.density)(k);
            *sig_max = sig_max.max(s.norm());
            if self.rho == 0.0 {
                jb.fill(0.0);
                jb[0] = 1.0;
            } else {
                bessel_j_seq(k * self.rho, &mut jb);
            }
            let base = wi * half * (-k * self.zeta).exp();
            let sn = s.norm();
            for (m, jm) in jb.iter().enumerate() {
                let mut f = base * jm;
                let row = m * (self.n_max + 1);
                for n in 0..=self.n_max {
                    val[row + n] += s * f;
                    abs[row + n] += (f * sn).abs();
                    f *= k;
                }
            }
        }
    }

    fn panel(&self, a: f64, b: f64, whole: Option<Vec<Complex64>>, sig_max: &mut f64) -> Panel {
        let nc = self.ncomp();
        let mid = 0.5 * (a + b);
        let mut scratch = vec![0.0; nc];
        let whole = whole.unwrap_or_else(|| {
            let mut w = vec![Complex64::new(0.0, 0.0); nc];
            self.rule(a, b, &mut w, &mut scratch, sig_max);
            w
        });
        let mut left = vec![Complex64::new(0.0, 0.0); nc];
        let mut right = vec![Complex64::new(0.0, 0.0); nc];
        let mut abs_l = vec![0.0; nc];
        let mut abs_r = vec![0.0; nc];
        self.rule(a, mid, &mut left, &mut abs_l, sig_max);
        self.rule(mid, b, &mut right, &mut abs_r, sig_max);
        let abs: Vec<f64> = abs_l.iter().zip(&abs_r).map(|(x, y)| x + y).collect();
        let err = (0..nc).map(|j| (whole[j] - left[j] - right[j]).norm()).collect();
        Panel { a, b, left, right, abs, err }
    }
}

/// `R(m, n) = int_0^inf J_m(k rho) e^{-k zeta} sigma(k) k^n dk` for all `m <= m_max`, `n <= n_max`.
pub fn radial_table(
    m_max: usize,
    n_max: usize,
    rho: f64,
    zeta: f64,
    density: &(dyn Fn(f64) -> Complex64 + Sync),
    tol: f64,
) -> Result<RadialTable> {
    if !(zeta > 0.0) || !(rho >= 0.0) || !rho.is_finite() || !zeta.is_finite() {
        return Err(Error::DomainError(format!("need zeta > 0 and rho >= 0, got rho={rho} zeta={zeta}")));
    }
    if !(tol >= MIN_TOL) {
        return Err(Error::DomainError(format!("tolerance {tol:e} below {MIN_TOL:e}")));
    }
    let f = Integrand { m_max, n_max, rho, zeta, density };
    let nc = f.ncomp();
    let kmax = k_max(n_max, rho, zeta, tol);
    let mut w0 = 2.0 / zeta;
    if rho > 0.0 {
        w0 = w0.min(2.0 * PI / rho);
    }
    let npan = ((kmax / w0).ceil() as usize).max(1);
    let h = kmax / npan as f64;
    let initial: Vec<(Panel, f64)> = (0..npan)
        .into_par_iter()
        .map(|i| {
            let mut smax = 0.0;
            let p = f.panel(i as f64 * h, (i + 1) as f64 * h, None, &mut smax);
            (p, smax)
        })
        .collect();
    let mut sig_max = initial.iter().fold(0.0f64, |m, (_, s)| m.max(*s));
    let mut panels: Vec<Option<Panel>> = initial.into_iter().map(|(p, _)| Some(p)).collect();

    let mut l1 = vec![0.0; nc];
    let mut total_err = vec![0.0; nc];
    for p in panels.iter().flatten() {
        for j in 0..nc {
            l1[j] += p.abs[j];
            total_err[j] += p.err[j];
        }
    }
    let score = |p: &Panel, l1: &[f64]| -> f64 {
        (0..nc).fold(0.0f64, |s, j| if l1[j] > 0.0 { s.max(p.err[j] / l1[j]) } else { s })
    };
    let worst = |te: &[f64], l1: &[f64]| -> f64 {
        (0..nc).fold(0.0f64, |s, j| if l1[j] > 0.0 { s.max(te[j] / l1[j]) } else { s })
    };
    let mut heap: BinaryHeap<Scored> = panels
        .iter()
        .enumerate()
        .map(|(i, p)| Scored(score(p.as_ref().unwrap(), &l1), i))
        .collect();

    let mut live = panels.len();
    while worst(&total_err, &l1) > tol {
        if live >= MAX_PANELS {
            break;
        }
        let Some(Scored(_, i)) = heap.pop() else { break };
        let p = panels[i].take().expect("live panel");
        for j in 0..nc {
            total_err[j] -= p.err[j];
            l1[j] -= p.abs[j];
        }
        let mid = 0.5 * (p.a + p.b);
        let kids = [
            f.panel(p.a, mid, Some(p.left), &mut sig_max),
            f.panel(mid, p.b, Some(p.right), &mut sig_max),
        ];
        for kid in kids {
            for j in 0..nc {
                total_err[j] += kid.err[j];
                l1[j] += kid.abs[j];
            }
            let s = score(&kid, &l1);
            panels.push(Some(kid));
            heap.push(Scored(s, panels.len() - 1));
        }
        live += 1;
        for te in total_err.iter_mut() {
            *te = te.max(0.0);
        }
    }

    let mut values = vec![Complex64::new(0.0, 0.0); nc];
    let mut panels: Vec<Panel> = panels.into_iter().flatten().collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    // Recompute the running sums in a fixed order for reproducibility.
    let mut abs_err = vec![0.0; nc];
    let mut l1 = vec![0.0; nc];
    for p in &panels {
        for j in 0..nc {
            values[j] += p.left[j] + p.right[j];
            abs_err[j] += p.err[j];
            l1[j] += p.abs[j];
        }
    }
    let mut rel = 0.0f64;
    for m in 0..=m_max {
        for n in 0..=n_max {
            let j = m * (n_max + 1) + n;
            let tail = sig_max * (ln_fact(n) - (n as f64 + 1.0) * zeta.ln()).exp() * upper_gamma_q(n, kmax * zeta);
            abs_err[j] += tail;
            if l1[j] > 0.0 {
                rel = rel.max(abs_err[j] / l1[j]);
            }
        }
    }
    let nodes = panels.len() * 2 * GL_ORDER;
    if worst(&abs_err, &l1) > tol * 1.01 {
        return Err(Error::ToleranceNotMet { tol, achieved: rel });
    }
    Ok(RadialTable { m_max, n_max, rho, zeta, k_max: kmax, panels: panels.len(), nodes, values, abs_err, l1, rel_error: rel })
}

/// One integral, as described by a [`RadialIntegralSpec`].
pub struct RadialIntegralSpec<'a> {
    pub order: usize,
    pub power: usize,
    pub rho: f64,
    pub zeta: f64,
    pub density: &'a (dyn Fn(f64) -> Complex64 + Sync),
}

#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: Complex64,
    pub error: f64,
}

pub fn radial_integral(spec: &RadialIntegralSpec, tol: f64) -> Result<Quad> {
    let t = radial_table(spec.order, spec.power, spec.rho, spec.zeta, spec.density, tol)?;
    Ok(Quad { value: t.get(spec.order, spec.power), error: t.abs_error(spec.order, spec.power) })
}

/// Adaptive composite Gauss-Legendre for a general complex integrand on `[a, b]`:
/// initial panels of width at most `width`, bisected until the absolute error
/// estimate falls below `tol`.
pub fn integrate_adaptive(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, width: f64, tol: f64) -> Result<Quad> {
    let (x, w) = gl32();
    let rule = |lo: f64, hi: f64| -> Complex64 {
        let (h, c) = (0.5 * (hi - lo), 0.5 * (hi + lo));
        x.iter().zip(w).map(|(xi, wi)| f(c + h * xi) * (wi * h)).sum()
    };
    let npan = (((b - a) / width).ceil() as usize).max(1);
    let h = (b - a) / npan as f64;
    let mut stack: Vec<(f64, f64, Complex64, usize)> =
        (0..npan).rev().map(|i| (a + i as f64 * h, a + (i + 1) as f64 * h)).map(|(l, r)| (l, r, rule(l, r), 0)).collect();
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut unresolved = 0.0f64;
    while let Some((l, r, whole, depth)) = stack.pop() {
        let m = 0.5 * (l + r);
        let (left, right) = (rule(l, m), rule(m, r));
        let diff = (whole - left - right).norm();
        let local = tol * (r - l) / (b - a);
        if diff <= local || depth >= 40 {
            value += left + right;
            error += diff;
            if diff > local {
                unresolved = unresolved.max(diff);
            }
        } else {
            stack.push((m, r, right, depth + 1));
            stack.push((l, m, left, depth + 1));
        }
    }
    if unresolved > 0.0 && error > tol {
        return Err(Error::ToleranceNotMet { tol, achieved: error });
    }
    Ok(Quad { value, error })
}
