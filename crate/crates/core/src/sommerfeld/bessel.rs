//! Bessel functions of the first kind, integer order.
//!
//! Small arguments use the power series, moderate ones Miller's backward recurrence
//! normalized by `J_0 + 2 sum J_2k = 1`, and large ones the Hankel expansion for
//! `J_0`, `J_1` followed by upward recurrence (stable while the order stays below x).

use std::f64::consts::{FRAC_PI_4, PI};

const ASYMPTOTIC_FROM: f64 = 25.0;

/// `J_m(x)` for `m >= 0`, `x >= 0`.
pub fn bessel_j(m: usize, x: f64) -> f64 {
    let mut out = vec![0.0; m + 1];
    bessel_j_seq(x, &mut out);
    out[m]
}

/// Fills `out[k] = J_k(x)` for `k < out.len()`.
pub fn bessel_j_seq(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let mmax = out.len() - 1;
    if x == 0.0 {
        out.fill(0.0);
        out[0] = 1.0;
        return;
    }
    if x < 1.0 {
        for (m, o) in out.iter_mut().enumerate() {
            *o = bessel_j_series(m, x);
        }
    } else if x >= ASYMPTOTIC_FROM && x >= mmax as f64 {
        let (j0, j1) = hankel_j01(x);
        out[0] = j0;
        if mmax >= 1 {
            out[1] = j1;
        }
        for k in 1..mmax {
            out[k + 1] = 2.0 * k as f64 / x * out[k] - out[k - 1];
        }
    } else {
        miller(x, out);
    }
}

/// Power series; accurate for small x, used as a reference elsewhere.
pub fn bessel_j_series(m: usize, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut lead = 1.0;
    for k in 1..=m {
        lead *= h / k as f64;
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = -h * h;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..500 {
        term *= q / (k as f64 * (m + k) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn miller(x: f64, out: &mut [f64]) {
    let mmax = out.len() - 1;
    let top = (mmax as f64).max(x);
    let mut start = (top + 20.0 + (60.0 * top).sqrt()) as usize;
    start += start % 2;
    let (mut jp, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    out.fill(0.0);
    for k in (1..=start).rev() {
        let jm = 2.0 * k as f64 / x * j - jp;
        jp = j;
        j = jm;
        // j now holds the value at order k-1
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            for o in out.iter_mut() {
                *o *= 1e-250;
            }
        }
        let order = k - 1;
        if order <= mmax {
            out[order] = j;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * j;
        }
    }
    norm += j;
    for o in out.iter_mut() {
        *o /= norm;
    }
}

fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    let mut k = 1usize;
    let mut prev = f64::INFINITY;
    loop {
        term *= (mu - ((2 * k - 1) * (2 * k - 1)) as f64) / (k as f64 * 8.0 * x);
        if term.abs() > prev || k > 200 {
            break;
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-18 {
            break;
        }
        k += 1;
    }
    (p, q)
}

fn hankel_j01(x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    let (cf, sf) = (FRAC_PI_4.cos(), FRAC_PI_4.sin());
    // chi_0 = x - pi/4, chi_1 = x - 3 pi/4
    let (c0, s0) = (c * cf + s * sf, s * cf - c * sf);
    let (c1, s1) = (-c * sf + s * cf, -s * sf - c * cf);
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    (amp * (p0 * c0 - q0 * s0), amp * (p1 * c1 - q1 * s1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(1, 0.0), 0.0);
        assert!(bessel_j(0, 2.4048255577).abs() < 1e-9);
    }

    #[test]
    fn branches_agree_at_switch_points() {
        for &x in &[0.999, 1.0, 1.001, 24.9, 25.0, 25.1, 40.0] {
            let mut a = vec![0.0; 12];
            bessel_j_seq(x, &mut a);
            let mut b = vec![0.0; 12];
            miller(x, &mut b);
            for k in 0..12 {
                assert!((a[k] - b[k]).abs() < 5e-15, "x={x} k={k} {} {}", a[k], b[k]);
            }
        }
    }

    #[test]
    fn series_matches_miller_small_x() {
        for &x in &[1.5, 3.0, 7.0] {
            let mut b = vec![0.0; 20];
            miller(x, &mut b);
            for m in 0..20 {
                assert!((bessel_j_series(m, x) - b[m]).abs() < 1e-14 * (1.0 + b[m].abs()));
            }
        }
    }

    #[test]
    fn large_order_small_argument() {
        let v = bessel_j(40, 0.5);
        let e = bessel_j_series(40, 0.5);
        assert!((v - e).abs() <= 1e-13 * e.abs());
    }
}
