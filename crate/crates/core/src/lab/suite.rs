//! Property suites with fixed seeds; each item reports its worst residual.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::report::CheckResult;
use crate::densities::{density_bound, density_bound_with, reaction_densities, InterfaceMatrices};
use crate::geometry::{norm, reflect, sub, SphericalCoord, Vec3};
use crate::harmonics::{constants, idx, legendre_p, normalized_legendre, sign, sph_harm, sph_harm_table};
use crate::medium::{polarization_source, tau_map, LayeredMedium, ReactionComponent};
use crate::sommerfeld::bessel::bessel_j;
use crate::sommerfeld::{branch_sqrt, cagniard_identity_check, CagniardFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteKind {
    InterfaceInequality,
    AdditionTheorems,
    Cagniard,
    DensityProps,
    All,
}

impl std::str::FromStr for SuiteKind {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> crate::error::Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| crate::error::Error::Config(format!("unknown suite kind {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub kind: SuiteKind,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

pub fn run_property_suite(kind: SuiteKind) -> SuiteSummary {
    let checks = match kind {
        SuiteKind::InterfaceInequality => interface_inequality_checks(10_000, 21),
        SuiteKind::AdditionTheorems => harmonic_checks(),
        SuiteKind::Cagniard => cagniard_checks(),
        SuiteKind::DensityProps => density_checks(),
        SuiteKind::All => {
            let mut v = interface_inequality_checks(10_000, 21);
            v.extend(harmonic_checks());
            v.extend(cagniard_checks());
            v.extend(density_checks());
            v
        }
    };
    let pass = checks.iter().all(|c| c.pass);
    SuiteSummary { kind, checks, pass }
}

/// Random medium with `l` interfaces, constants log-uniform in `[0.1, 10]`.
pub fn random_medium(rng: &mut ChaCha8Rng, l: usize) -> LayeredMedium {
    let mut d = Vec::with_capacity(l);
    let mut h: f64 = rng.gen_range(-1.0..1.0);
    for _ in 0..l {
        d.push(h);
        h -= rng.gen_range(0.1..2.0);
    }
    let mut draw = || (0..=l).map(|_| 10f64.powf(rng.gen_range(-1.0..1.0))).collect::<Vec<f64>>();
    let a = draw();
    let b = draw();
    LayeredMedium::new(d, a, b).expect("valid random medium")
}

fn random_k(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    loop {
        let k = Complex64::new(rng.gen_range(0.0..radius), rng.gen_range(-radius..radius));
        if k.norm() <= radius {
            return k;
        }
    }
}

/// Second-row inequality on random media and spectral arguments.
pub fn interface_inequality_checks(samples: usize, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    let mut worst_rel = f64::INFINITY;
    let mut worst_e = 0.0f64;
    for _ in 0..samples {
        let l = rng.gen_range(1..=5);
        let m = random_medium(&mut rng, l);
        let k = random_k(&mut rng, 50.0);
        let mats = InterfaceMatrices::new(&m, k).expect("Re k >= 0");
        let mut prod = 1.0;
        for j in 1..=l {
            prod *= mats.gamma_p[j].powi(2) - mats.gamma_m[j].powi(2);
            let (a21, a22) = (mats.alpha[j][1][0].norm_sqr(), mats.alpha[j][1][1].norm_sqr());
            let slack = a22 - a21 - prod;
            if slack < -1e-12 * (a22 + a21 + prod) || prod <= 0.0 {
                violations += 1;
            }
            worst_rel = worst_rel.min((a22 - a21) / prod - 1.0);
        }
        for e in &mats.e {
            worst_e = worst_e.max(e.norm());
        }
    }
    vec![
        CheckResult::at_most(format!("interface_inequality_violations_of_{samples}"), violations as f64, 0.0),
        CheckResult::at_least("interface_inequality_worst_relative_slack", worst_rel, -1e-12),
        CheckResult::at_most("exp_factor_modulus_max", worst_e, 1.0),
    ]
}

/// High-precision references `(m, x, J_m(x))`.
pub const BESSEL_REFERENCE: [(usize, f64, f64); 19] = [
    (0, 0.5, 0.938_469_807_240_812_9),
    (0, 5.0, -0.177_596_771_314_338_3),
    (0, 30.0, -0.086_367_983_581_040_21),
    (0, 100.3, 0.041_857_982_899_804_28),
    (1, 7.7, 0.181_312_715_324_587_98),
    (1, 26.0, 0.015_045_730_586_915_81),
    (2, 0.1, 0.001_248_958_658_799_918_8),
    (5, 3.3, 0.063_716_909_319_528_50),
    (10, 12.5, 0.278_871_746_593_535_7),
    (20, 25.0, 0.051_994_049_228_303_23),
    (30, 40.2, -0.087_454_099_092_055_46),
    (3, 250.7, 0.049_620_375_756_036_77),
    (15, 1000.1, -0.009_837_308_698_058_260),
    (40, 10.0, 6.030_895_312_346_907e-21),
    (7, 24.9, 0.005_471_314_245_286_545),
    (12, 60.0, -0.077_812_256_952_445_18),
    (25, 18.0, 0.001_658_357_522_524_930),
    (0, 2000.5, -0.001_617_829_940_159_909),
    (2, 33.3, -0.055_899_317_905_389_95),
];

fn rand_dir(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let z: f64 = rng.gen_range(-1.0..1.0);
    (z.acos(), rng.gen_range(0.0..2.0 * std::f64::consts::PI))
}

/// Addition theorems, plane-wave identity, Legendre and Bessel references.
pub fn harmonic_checks() -> Vec<CheckResult> {
    let k = constants();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut out = Vec::new();

    // Legendre addition theorem.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (t1, p1) = rand_dir(&mut rng);
        let (t2, p2) = rand_dir(&mut rng);
        let cg = t1.cos() * t2.cos() + t1.sin() * t2.sin() * (p1 - p2).cos();
        let ya = sph_harm_table(12, t1, p1);
        let yb = sph_harm_table(12, t2, p2);
        for n in 0..=12usize {
            let s: Complex64 = (-(n as i64)..=n as i64).map(|m| ya[idx(n, m)].conj() * yb[idx(n, m)]).sum();
            let rhs = 4.0 * std::f64::consts::PI / (2 * n + 1) as f64 * s;
            worst = worst.max((legendre_p(n, cg.clamp(-1.0, 1.0)).unwrap() - rhs).norm());
        }
    }
    out.push(CheckResult::at_most("legendre_addition_n12", worst, 1e-12));

    let (w2, w3, w4) = translation_residuals(&mut rng, 24, 4);
    out.push(CheckResult::at_most("multipole_translation_n1_4_trunc24", w2, 1e-12));
    out.push(CheckResult::at_most("multipole_to_local_n1_4_trunc24", w3, 1e-12));
    out.push(CheckResult::at_most("local_translation_n1_4", w4, 1e-12));

    // Plane-wave identity.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let al: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let (th, ph) = rand_dir(&mut rng);
        let leg = normalized_legendre(15, th.cos());
        let kr = Complex64::new((al - ph).cos() * th.sin(), th.cos());
        let mut pw = Complex64::new(1.0, 0.0);
        for n in 0..=15usize {
            if n > 0 {
                pw *= Complex64::i() * kr / n as f64;
            }
            let s: Complex64 = (-(n as i64)..=n as i64)
                .map(|m| k.cnm(n, m) * leg[idx(n, m)] * Complex64::from_polar(1.0, m as f64 * (al - ph)))
                .sum();
            worst = worst.max((pw - s).norm());
        }
    }
    out.push(CheckResult::at_most("plane_wave_expansion_n15", worst, 1e-12));

    // Legendre recurrence against the explicit Rodrigues coefficients.
    let mut worst = 0.0f64;
    for i in 0..=40 {
        let x = -1.0 + i as f64 / 20.0;
        for n in 0..=10usize {
            worst = worst.max((legendre_p(n, x).unwrap() - rodrigues(n, x)).abs());
        }
    }
    out.push(CheckResult::at_most("legendre_vs_rodrigues_n10", worst, 1e-13));

    // Symmetry and parity of the harmonics.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (th, ph) = rand_dir(&mut rng);
        for n in 0..=10usize {
            for m in -(n as i64)..=n as i64 {
                let y = sph_harm(n, m, th, ph);
                worst = worst.max((sph_harm(n, -m, th, ph) - sign(m) * y.conj()).norm());
                worst = worst.max((sph_harm(n, m, std::f64::consts::PI - th, ph) - sign(n as i64 + m) * y).norm());
            }
        }
    }
    out.push(CheckResult::at_most("harmonic_symmetry_parity_n10", worst, 1e-13));

    let worst = BESSEL_REFERENCE
        .iter()
        .map(|&(m, x, v)| ((bessel_j(m, x) - v) / v).abs())
        .fold(0.0, f64::max);
    out.push(CheckResult::at_most("bessel_reference_relative", worst, 1e-13));
    out
}

fn rodrigues(n: usize, x: f64) -> f64 {
    let binom = |a: usize, b: usize| -> f64 { (0..b).fold(1.0, |acc, i| acc * (a - i) as f64 / (i + 1) as f64) };
    let mut s = 0.0;
    for kk in 0..=n / 2 {
        s += sign(kk as i64) * binom(n, kk) * binom(2 * n - 2 * kk, n) * x.powi((n - 2 * kk) as i32);
    }
    s / 2f64.powi(n as i32)
}

/// Residuals of the three translation theorems for `n1 <= n1_max`.
pub fn translation_residuals(rng: &mut ChaCha8Rng, trunc: usize, n1_max: usize) -> (f64, f64, f64) {
    let k = constants();
    let (mut w2, mut w3, mut w4) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let (tp, pp) = rand_dir(rng);
        let (tq, pq) = rand_dir(rng);
        let r: f64 = rng.gen_range(1.0..2.0);
        // Q close to the origin relative to P, then the reverse.
        for (rho, rr, case) in [(0.15 * r, r, 2), (r, 0.15 * r, 3), (0.7 * r, r, 4)] {
            let p = SphericalCoord { r: rr, theta: tp, phi: pp };
            let q = SphericalCoord { r: rho, theta: tq, phi: pq };
            let d = SphericalCoord::from_cartesian(sub(p.to_cartesian(), q.to_cartesian()));
            let top = trunc + n1_max;
            let yp = sph_harm_table(top, p.theta, p.phi);
            let yq = sph_harm_table(top, q.theta, q.phi);
            let yd = sph_harm_table(n1_max, d.theta, d.phi);
            for n1 in 0..=n1_max {
                for m1 in -(n1 as i64)..=n1 as i64 {
                    let c2 = |n: usize| k.c(n).powi(2);
                    match case {
                        2 => {
                            let lhs = yd[idx(n1, m1)] / d.r.powi(n1 as i32 + 1);
                            let mut s = Complex64::new(0.0, 0.0);
                            for n in 0..=trunc {
                                for m in -(n as i64)..=n as i64 {
                                    let w = sign((m + m1).abs() - m1.abs()) * k.a(n, m) * k.a(n1, m1) * q.r.powi(n as i32)
                                        / (c2(n) * k.a(n + n1, m + m1) * p.r.powi((n + n1) as i32 + 1));
                                    s += w * yq[idx(n, -m)] * yp[idx(n + n1, m + m1)];
                                }
                            }
                            w2 = w2.max((lhs - s).norm());
                        }
                        3 => {
                            let lhs = yd[idx(n1, m1)] / d.r.powi(n1 as i32 + 1);
                            let mut s = Complex64::new(0.0, 0.0);
                            for n in 0..=trunc {
                                for m in -(n as i64)..=n as i64 {
                                    let w = sign(n1 as i64 + m.abs()) * k.a(n, m) * k.a(n1, m1) * p.r.powi(n as i32)
                                        / (c2(n) * k.a(n + n1, m1 - m) * q.r.powi((n + n1) as i32 + 1));
                                    s += w * yq[idx(n + n1, m1 - m)] * yp[idx(n, m)];
                                }
                            }
                            w3 = w3.max((lhs - s).norm());
                        }
                        _ => {
                            let lhs = yd[idx(n1, m1)] * d.r.powi(n1 as i32);
                            let mut s = Complex64::new(0.0, 0.0);
                            for n in 0..=n1 {
                                for m in -(n as i64)..=n as i64 {
                                    let mm = m1 - m;
                                    if mm.unsigned_abs() as usize > n1 - n {
                                        continue;
                                    }
                                    let e = n as i64 - m.abs() + m1.abs() - mm.abs();
                                    let w = sign(e) * c2(n1) * k.a(n, m) * k.a(n1 - n, mm) * q.r.powi(n as i32)
                                        * p.r.powi((n1 - n) as i32)
                                        / (c2(n) * c2(n1 - n) * k.a(n1, m1));
                                    s += w * yq[idx(n, m)] * yp[idx(n1 - n, mm)];
                                }
                            }
                            w4 = w4.max((lhs - s).norm());
                        }
                    }
                }
            }
        }
    }
    (w2, w3, w4)
}

/// Contour identity over the function catalog and a 3x3x3 parameter grid, plus the branch.
pub fn cagniard_checks() -> Vec<CheckResult> {
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for f in CagniardFunction::ALL {
        for rho in [0.0, 1.0, 2.0] {
            for z in [0.5, 1.0, 2.0] {
                for eta in [0.5, 1.0, 1.5] {
                    match cagniard_identity_check(f, rho, z, eta, 1e-10) {
                        Ok(c) => worst = worst.max(c.residual()),
                        Err(_) => failures += 1,
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut min_re = f64::INFINITY;
    let mut sq_err = 0.0f64;
    for _ in 0..10_000 {
        let z = Complex64::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
        let w = branch_sqrt(z);
        min_re = min_re.min(w.re);
        sq_err = sq_err.max((w * w - z).norm() / z.norm());
    }
    vec![
        CheckResult::at_most("cagniard_identity_residual", worst, 1e-8),
        CheckResult::at_most("cagniard_quadrature_failures", failures as f64, 0.0),
        CheckResult::at_least("branch_sqrt_min_real_part", min_re, 0.0),
        CheckResult::at_most("branch_sqrt_square_relative", sq_err, 1e-14),
    ]
}

fn random_point_in_layer(rng: &mut ChaCha8Rng, m: &LayeredMedium, layer: usize) -> Vec3 {
    let d = m.interfaces();
    let l = d.len();
    let (lo, hi) = if l == 0 {
        (-3.0, 3.0)
    } else if layer == 0 {
        (d[0], d[0] + 3.0)
    } else if layer == l {
        (d[l - 1] - 3.0, d[l - 1])
    } else {
        (d[layer], d[layer - 1])
    };
    loop {
        let z: f64 = rng.gen_range(lo..hi);
        if m.in_layer(layer, z) {
            return [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), z];
        }
    }
}

/// Density properties: image coefficient, symmetry, homogeneous stacks, coordinate maps.
pub fn density_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let mut worst = 0.0f64;
    for eps in [2.0, 10.0, 80.0] {
        let m = LayeredMedium::dielectric(vec![0.0], vec![1.0, eps]).unwrap();
        let s0 = reaction_densities(&m, 0, 0, Complex64::new(0.0, 0.0)).unwrap().get(1, 1).unwrap();
        worst = worst.max((s0.re - (1.0 - eps) / (1.0 + eps)).abs());
        for i in 0..=1000 {
            let k = Complex64::new(0.1 * i as f64, 0.0);
            let s = reaction_densities(&m, 0, 0, k).unwrap().get(1, 1).unwrap();
            worst = worst.max((s - s0).norm());
        }
    }
    out.push(CheckResult::at_most("two_layer_density_constant", worst, 1e-12));

    let mut worst = 0.0f64;
    for _ in 0..200 {
        let l = rng.gen_range(1..=4);
        let m = random_medium(&mut rng, l);
        let k = random_k(&mut rng, 20.0);
        let (ll, lp) = (rng.gen_range(0..=l), rng.gen_range(0..=l));
        let s = reaction_densities(&m, ll, lp, k).unwrap();
        let t = reaction_densities(&m, ll, lp, k.conj()).unwrap();
        for (x, y) in s.sigma.iter().flatten().zip(t.sigma.iter().flatten()) {
            if let (Some(x), Some(y)) = (x, y) {
                worst = worst.max((x.conj() - y).norm() / (1.0 + x.norm()));
            }
        }
    }
    out.push(CheckResult::at_most("density_conjugate_symmetry", worst, 1e-13));

    let (mut zero, mut transfer) = (0.0f64, 0.0f64);
    for l in 1..=4usize {
        let d: Vec<f64> = (0..l).map(|j| 1.0 - 0.7 * j as f64).collect();
        let m = LayeredMedium::new(d, vec![1.7; l + 1], vec![0.6; l + 1]).unwrap();
        for _ in 0..10 {
            let k = random_k(&mut rng, 30.0);
            for ll in 0..=l {
                for lp in 0..=l {
                    let s = reaction_densities(&m, ll, lp, k).unwrap();
                    for (ai, row) in s.sigma.iter().enumerate() {
                        for (bi, v) in row.iter().enumerate() {
                            let Some(v) = v else { continue };
                            let expect = match (ai, bi) {
                                (0, 1) if ll < lp => (-k * (m.d(ll as isize) - m.d(lp as isize - 1))).exp(),
                                (1, 0) if ll > lp => (-k * (m.d(lp as isize) - m.d(ll as isize - 1))).exp(),
                                _ => Complex64::new(0.0, 0.0),
                            };
                            if expect == Complex64::new(0.0, 0.0) {
                                zero = zero.max(v.norm());
                            } else {
                                transfer = transfer.max((v - expect).norm());
                            }
                        }
                    }
                }
            }
        }
    }
    out.push(CheckResult::at_most("homogeneous_reflection_densities", zero, 1e-13));
    out.push(CheckResult::at_most("homogeneous_transmission_is_free_transfer", transfer, 1e-13));

    let (mut min_tau, mut ident, mut side) = (f64::INFINITY, 0.0f64, 0usize);
    for _ in 0..1000 {
        let l = rng.gen_range(1..=4);
        let m = random_medium(&mut rng, l);
        let (ll, lp) = (rng.gen_range(0..=l), rng.gen_range(0..=l));
        let r = random_point_in_layer(&mut rng, &m, ll);
        let rp = random_point_in_layer(&mut rng, &m, lp);
        for c in ReactionComponent::all(&m, ll, lp) {
            let t = tau_map(&m, c, r, rp).unwrap();
            min_tau = min_tau.min(t[2]);
            let pol = polarization_source(&m, c, rp).unwrap();
            let alt = if c.a == 1 { sub(r, pol) } else { reflect(sub(r, pol)) };
            ident = ident.max(norm(sub(t, alt)) / (1.0 + norm(t)));
            let ok = if c.a == 1 { pol[2] < m.d(ll as isize) } else { pol[2] > m.d(ll as isize - 1) };
            if !ok {
                side += 1;
            }
        }
    }
    out.push(CheckResult::at_least("tau_vertical_min_positive", min_tau, f64::MIN_POSITIVE));
    out.push(CheckResult::at_most("polarization_identity", ident, 1e-14));
    out.push(CheckResult::at_most("polarization_center_side_violations", side as f64, 0.0));

    let m = LayeredMedium::dielectric(vec![0.0, -1.0, -3.0], vec![1.0, 4.0, 2.0, 9.0]).unwrap();
    let mut finite = true;
    for k in [100.0, 350.0, 700.0] {
        for (ll, lp) in [(1, 1), (0, 3), (3, 0), (2, 1)] {
            let s = reaction_densities(&m, ll, lp, Complex64::new(k, 0.0)).unwrap();
            finite &= s.sigma.iter().flatten().flatten().all(|v| v.re.is_finite() && v.im.is_finite());
        }
    }
    out.push(CheckResult::at_most("overflow_at_k_maxD_700", if finite { 0.0 } else { 1.0 }, 0.0));

    // Three-layer slab: bounded on [0, 200] by the estimate, constant tail.
    let slab = LayeredMedium::dielectric(vec![0.0, -1.0], vec![1.0, 5.0, 2.0]).unwrap();
    let (mut over, mut tail) = (0.0f64, 0.0f64);
    for c in ReactionComponent::all(&slab, 1, 1) {
        let b = density_bound(&slab, c).unwrap().value;
        let s = |k: f64| reaction_densities(&slab, 1, 1, Complex64::new(k, 0.0)).unwrap().get(c.a, c.b).unwrap();
        for i in 0..=2000 {
            over = over.max(s(0.1 * i as f64).norm() - b);
        }
        tail = tail.max((s(200.0) - s(1000.0)).norm());
    }
    out.push(CheckResult::at_most("slab_density_within_bound", over, 0.0));
    out.push(CheckResult::at_most("slab_density_limit", tail, 1e-12));

    let mut worst = 0.0f64;
    for eps in [2.0, 10.0, 80.0] {
        let m = LayeredMedium::dielectric(vec![0.0], vec![1.0, eps]).unwrap();
        let b = density_bound(&m, ReactionComponent::new(1, 1, 0, 0)).unwrap().value;
        let expect = (eps - 1.0) / (eps + 1.0) * 1.05;
        worst = worst.max((b - expect).abs() / expect);
    }
    out.push(CheckResult::at_most("two_layer_bound_relative", worst, 0.01));

    let c = ReactionComponent::new(1, 1, 1, 1);
    let coarse = density_bound_with(&slab, c, 1e3, 1.0).unwrap().value;
    let fine = density_bound_with(&slab, c, 1e3, 2.0).unwrap().value;
    out.push(CheckResult::at_least("bound_refinement_monotone", fine - coarse, -1e-15 * coarse));
    out
}
