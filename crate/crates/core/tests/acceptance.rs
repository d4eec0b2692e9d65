//! Acceptance criteria, one line each. Runs without the libtest harness so every line is
//! printed; the process fails if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use layerfmm::densities::reaction_densities;
use layerfmm::expansions::{eval_reaction_me, reaction_me_from_charges};
use layerfmm::geometry::{fibonacci_sphere, norm, sub, Vec3};
use layerfmm::lab::suite::{cagniard_checks, density_checks, harmonic_checks, interface_inequality_checks};
use layerfmm::lab::{generate_charges, run_experiment, CheckResult, ConvergenceReport, ExperimentConfig, ExperimentKind, MediumSpec};
use layerfmm::medium::{polarization_source, LayeredMedium, ReactionComponent};
use layerfmm::sommerfeld::{eval_reaction_green, MeForm};

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn report_outcome(reps: &[ConvergenceReport]) -> Outcome {
    let pass = reps.iter().all(|r| r.pass);
    let detail = reps.iter().map(|r| r.summary_line()).collect::<Vec<_>>().join(" | ");
    ok(pass, detail)
}

fn checks_outcome(checks: &[CheckResult], names: &[&str]) -> Outcome {
    let sel: Vec<&CheckResult> = checks.iter().filter(|c| names.iter().any(|n| c.name.starts_with(n))).collect();
    assert_eq!(sel.len(), names.len(), "missing checks");
    let detail = sel.iter().map(|c| format!("{}={:.2e}", c.name, c.value)).collect::<Vec<_>>().join(", ");
    ok(sel.iter().all(|c| c.pass), detail)
}

fn two_layer(eps: f64) -> LayeredMedium {
    LayeredMedium::dielectric(vec![0.0], vec![1.0, eps]).unwrap()
}

fn three_layer() -> LayeredMedium {
    LayeredMedium::dielectric(vec![0.0, -1.0], vec![1.0, 5.0, 2.0]).unwrap()
}

fn c1_two_layer_image() -> Outcome {
    let mut flat = 0.0f64;
    let mut rel = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for eps in [2.0, 10.0, 80.0] {
        let m = two_layer(eps);
        let s0 = reaction_densities(&m, 0, 0, Complex64::new(0.0, 0.0)).unwrap().get(1, 1).unwrap();
        for i in 0..=10_000 {
            let k = Complex64::new(0.01 * i as f64, 0.0);
            let s = reaction_densities(&m, 0, 0, k).unwrap().get(1, 1).unwrap();
            flat = flat.max((s - s0).norm());
        }
        let c = ReactionComponent::new(1, 1, 0, 0);
        let coef = (1.0 - eps) / (1.0 + eps);
        for _ in 0..50 {
            let mut pt = || -> Vec3 { [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.05..3.0)] };
            let (r, rp) = (pt(), pt());
            let img = [rp[0], rp[1], -rp[2]];
            let expect = coef / (4.0 * PI * norm(sub(r, img)));
            let u = eval_reaction_green(&m, c, r, rp, 1e-12).unwrap().value.re;
            rel = rel.max((u - expect).abs() / expect.abs());
        }
    }
    ok(flat < 1e-12 && rel < 1e-10, format!("density deviation {flat:.2e}, image relative error {rel:.2e}"))
}

fn c2_homogeneous() -> Outcome {
    let checks = density_checks();
    let dens = checks_outcome(&checks, &["homogeneous_reflection_densities", "homogeneous_transmission_is_free_transfer"]);
    let tol = 1e-10;
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for l in 1..=4usize {
        let d: Vec<f64> = (0..l).map(|j| 1.0 - 0.8 * j as f64).collect();
        let m = LayeredMedium::new(d.clone(), vec![2.5; l + 1], vec![0.7; l + 1]).unwrap();
        let lo = |layer: usize| if layer == l { d[l - 1] - 2.0 } else { d[layer] };
        let hi = |layer: usize| if layer == 0 { d[0] + 2.0 } else { d[layer - 1] };
        for _ in 0..6 {
            let (ll, lp) = (rng.gen_range(0..=l), rng.gen_range(0..=l));
            let pick = |rng: &mut ChaCha8Rng, layer: usize| -> Vec3 {
                let (a, b) = (lo(layer), hi(layer));
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), a + (b - a) * rng.gen_range(0.1..0.9)]
            };
            let (r, rp) = (pick(&mut rng, ll), pick(&mut rng, lp));
            let mut u = 0.0;
            for c in ReactionComponent::all(&m, ll, lp) {
                u += eval_reaction_green(&m, c, r, rp, tol).unwrap().value.re;
            }
            let free = if ll == lp { 0.0 } else { 1.0 / (4.0 * PI * norm(sub(r, rp))) };
            worst = worst.max((u - free).abs());
        }
    }
    let mut reps = Vec::new();
    for (l, comp) in [(2usize, ReactionComponent::new(1, 1, 0, 0)), (4, ReactionComponent::new(2, 1, 2, 2))] {
        let d: Vec<f64> = (0..l).map(|j| -3.0 * j as f64).collect();
        let m = LayeredMedium::new(d, vec![1.0; l + 1], vec![1.0; l + 1]).unwrap();
        let mut cfg = ExperimentConfig::new(ExperimentKind::ReactionMe);
        cfg.medium = Some(MediumSpec::Inline(m.clone()));
        cfg.component = Some(comp);
        cfg.geometry.a_s = 0.5;
        cfg.geometry.source_center = if comp.ellp == 0 { [0.0, 0.0, 1.5] } else { [0.0, 0.0, -4.5] };
        cfg.charges = 10;
        cfg.p_max = 6;
        cfg.geometry.eval_radius = Some(2.5);
        cfg.targets = 32;
        cfg.tol = tol;
        reps.push(run_experiment(&cfg).unwrap());
    }
    let exp_ok = reps.iter().all(|r| r.pass && r.degenerate);
    let pass = dens.pass && worst < tol && exp_ok;
    ok(pass, format!("{}; reaction field minus free-space transfer {worst:.2e}; expansions degenerate and below tol: {exp_ok}", dens.detail))
}

fn c3_interface_inequality() -> Outcome {
    let checks = interface_inequality_checks(10_000, 21);
    checks_outcome(&checks, &["interface_inequality_violations_of_10000", "interface_inequality_worst_relative_slack", "exp_factor_modulus_max"])
}

fn c4_free_me() -> Outcome {
    let mut reps = Vec::new();
    for r in [2.0, 4.0, 8.0] {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Me);
        cfg.geometry.eval_radius = Some(r);
        cfg.seed = 1;
        cfg.targets = 5000;
        reps.push(run_experiment(&cfg).unwrap());
    }
    report_outcome(&reps)
}

fn c5_le_translations() -> Outcome {
    let mut reps = Vec::new();
    for (kind, seed) in [(ExperimentKind::Le, 2), (ExperimentKind::M2m, 3), (ExperimentKind::L2l, 4)] {
        let mut cfg = ExperimentConfig::new(kind);
        cfg.seed = seed;
        if kind == ExperimentKind::M2m {
            cfg.geometry.eval_radius = Some(4.0);
        }
        reps.push(run_experiment(&cfg).unwrap());
    }
    report_outcome(&reps)
}

fn c6_free_m2l() -> Outcome {
    let mut reps = Vec::new();
    for c in [2.0, 3.0] {
        let mut cfg = ExperimentConfig::new(ExperimentKind::M2l);
        cfg.geometry.c = Some(c);
        cfg.seed = 5;
        reps.push(run_experiment(&cfg).unwrap());
    }
    report_outcome(&reps)
}

fn reaction_cfg(kind: ExperimentKind, comp: ReactionComponent, center: Vec3, a_s: f64, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind);
    cfg.medium = Some(MediumSpec::Inline(three_layer()));
    cfg.component = Some(comp);
    cfg.geometry.source_center = center;
    cfg.geometry.a_s = a_s;
    cfg.charges = 10;
    cfg.p_max = 15;
    cfg.seed = seed;
    cfg
}

fn c7_reaction_me() -> Outcome {
    let cases = [
        (ReactionComponent::new(1, 1, 0, 0), [0.0, 0.0, 1.5], 1.0),
        (ReactionComponent::new(1, 2, 0, 1), [0.0, 0.0, -0.5], 0.4),
        (ReactionComponent::new(2, 1, 2, 1), [0.0, 0.0, -0.5], 0.4),
    ];
    let mut reps = Vec::new();
    let mut decay = true;
    for (i, (comp, center, a_s)) in cases.into_iter().enumerate() {
        let cfg = reaction_cfg(ExperimentKind::ReactionMe, comp, center, a_s, 70 + i as u64);
        let rep = run_experiment(&cfg).unwrap();
        decay &= rep.rate_fit.zip(rep.rate_theory).map(|(f, t)| f >= 0.9 * t).unwrap_or(false);
        reps.push(rep);
    }
    let o = report_outcome(&reps);
    ok(o.pass && decay, format!("geometric decay {decay}; {}", o.detail))
}

fn c8_reaction_le_m2l() -> Outcome {
    let comp = ReactionComponent::new(1, 1, 0, 0);
    let mut le = reaction_cfg(ExperimentKind::ReactionLe, comp, [0.0, 0.0, 1.5], 1.0, 80);
    le.geometry.target_center = Some([0.0, 0.0, 2.0]);
    let mut m2l = reaction_cfg(ExperimentKind::ReactionM2l, comp, [0.0, 0.0, 1.5], 1.0, 81);
    m2l.geometry.c = Some(3.0);
    let mut m2l_lower = reaction_cfg(ExperimentKind::ReactionM2l, ReactionComponent::new(2, 2, 2, 2), [0.0, 0.0, -2.5], 1.0, 82);
    m2l_lower.geometry.c = Some(3.0);
    let mut two = reaction_cfg(ExperimentKind::ReactionM2l, comp, [0.0, 0.0, 1.5], 1.0, 83);
    two.medium = Some(MediumSpec::Inline(two_layer(10.0)));
    two.geometry.c = Some(3.0);
    let reps: Vec<ConvergenceReport> = [le, m2l, m2l_lower, two].iter().map(|c| run_experiment(c).unwrap()).collect();
    let single = reps[3].checks.iter().find(|c| c.name == "single_charge_p15").unwrap();
    let o = report_outcome(&reps);
    ok(o.pass && single.pass, format!("two-layer single charge {:.2e}; {}", single.value, o.detail))
}

fn c9_direct_vs_polarization() -> Outcome {
    let m = three_layer();
    let tol = 1e-12;
    let mut worst = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for (comp, center, a_s) in [
        (ReactionComponent::new(1, 1, 0, 0), [0.0, 0.0, 1.5], 1.0),
        (ReactionComponent::new(2, 2, 2, 2), [0.0, 0.0, -2.5], 1.0),
        (ReactionComponent::new(1, 2, 0, 1), [0.0, 0.0, -0.5], 0.4),
    ] {
        let sys = generate_charges(9, 10, &m, center, a_s).unwrap();
        let pc = polarization_source(&m, comp, center).unwrap();
        let pol = reaction_me_from_charges(&sys, &m, comp, MeForm::Polarization, pc, a_s, 12).unwrap();
        let dir = reaction_me_from_charges(&sys, &m, comp, MeForm::Direct, center, a_s, 12).unwrap();
        let targets: Vec<Vec3> =
            fibonacci_sphere(32, pc, 3.0 * a_s).into_iter().filter(|t| m.in_layer(comp.ell, t[2])).collect();
        let res: Vec<(f64, f64)> = targets
            .par_iter()
            .map(|&t| {
                let a = eval_reaction_me(&pol, &m, t, tol).unwrap();
                let b = eval_reaction_me(&dir, &m, t, tol).unwrap();
                let allowed = a.quad.abs_error + b.quad.abs_error + 1e-14 * a.value.abs().max(1e-300);
                ((a.value - b.value).abs(), allowed)
            })
            .collect();
        for (d, allowed) in res {
            worst = worst.max(d);
            worst_ratio = worst_ratio.max(d / allowed);
        }
    }
    ok(worst_ratio <= 1.0, format!("max difference {worst:.2e}, difference / combined quadrature error {worst_ratio:.2e}"))
}

fn c10_harmonics() -> Outcome {
    let checks = harmonic_checks();
    checks_outcome(
        &checks,
        &[
            "legendre_addition_n12",
            "multipole_translation",
            "multipole_to_local",
            "local_translation",
            "plane_wave_expansion",
            "legendre_vs_rodrigues",
            "bessel_reference_relative",
        ],
    )
}

fn c11_cagniard() -> Outcome {
    let checks = cagniard_checks();
    checks_outcome(&checks, &["cagniard_identity_residual", "cagniard_quadrature_failures", "branch_sqrt_min_real_part"])
}

type Criterion = (usize, &'static str, u64, fn() -> Outcome);

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [Criterion; 11] = [
        (1, "two-layer image charge", 10, c1_two_layer_image),
        (2, "homogeneous stack", 5, c2_homogeneous),
        (3, "interface inequality", 10, c3_interface_inequality),
        (4, "free multipole", 30, c4_free_me),
        (5, "free local and translations", 30, c5_le_translations),
        (6, "free multipole-to-local", 60, c6_free_m2l),
        (7, "reaction multipole", 300, c7_reaction_me),
        (8, "reaction local and multipole-to-local", 600, c8_reaction_le_m2l),
        (9, "direct versus polarization multipole", 120, c9_direct_vs_polarization),
        (10, "addition theorems and references", 10, c10_harmonics),
        (11, "contour identity and branch", 30, c11_cagniard),
    ];
    let mut all = true;
    for (n, name, budget, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|s| name.contains(s.as_str()) || s == &n.to_string()) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        let el = t.elapsed();
        let in_time = el <= Duration::from_secs(budget);
        let pass = o.pass && in_time;
        all &= pass;
        println!(
            "criterion {n:2} [{name}]: {} ({:.2} s of {budget} s) {}",
            if pass { "PASS" } else { "FAIL" },
            el.as_secs_f64(),
            o.detail
        );
    }
    if !all {
        std::process::exit(1);
    }
}
