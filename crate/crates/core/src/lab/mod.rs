//! Experiment harness: charge generation, order sweeps against direct oracles, bound
//! checks and decay-rate fits.

pub mod config;
pub mod report;
pub mod suite;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::densities::density_bound;
use crate::error::{Error, Result};
use crate::expansions::free::{local_degree_terms, multipole_degree_terms, partial_sums};
use crate::expansions::reaction::{apply_m2l, eval_local_partial, reaction_m2l_operator, QuadStats};
use crate::expansions::{
    eval_local, eval_reaction_me, l2l, le_from_charges, m2l_free, m2m, me_from_charges, reaction_le_from_charges,
    reaction_me_from_charges, ChargeSystem,
};
use crate::geometry::{add, fibonacci_sphere, norm, scale, sub, Vec3};
use crate::medium::{polarization_source, LayeredMedium, ReactionComponent};
use crate::sommerfeld::{eval_reaction_green, MeForm};

pub use config::{ExperimentConfig, ExperimentKind, Geometry, MediumSpec};
pub use report::{CheckResult, ConvergenceReport, ReportMeta, ReportRow};
pub use suite::{run_property_suite, SuiteKind, SuiteSummary};

const FOUR_PI: f64 = 4.0 * PI;

/// Deterministic charges uniform in the ball `(center, radius)`, `q` uniform in `[-1, 1]`.
/// The ball must lie inside one layer.
pub fn generate_charges(seed: u64, count: usize, medium: &LayeredMedium, center: Vec3, radius: f64) -> Result<ChargeSystem> {
    let layer = medium.layer_of(center[2])?;
    if medium.clearance(layer, center[2]) <= radius {
        return Err(Error::BoxCrossesInterface);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(count);
    while pts.len() < count {
        let v: Vec3 = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if norm(v) > 1.0 {
            continue;
        }
        let q = rng.gen_range(-1.0..=1.0);
        pts.push((q, add(center, scale(v, radius))));
    }
    ChargeSystem::new(medium, &pts)
}

fn min_distance(targets: &[Vec3], sources: &[Vec3]) -> f64 {
    let mut d = f64::INFINITY;
    for t in targets {
        for s in sources {
            d = d.min(norm(sub(*t, *s)));
        }
    }
    d
}

/// Max over targets of `|partial[p] - oracle|` for every `p <= p_max`.
fn max_errors(per_target: &[(Vec<f64>, f64)], p_max: usize) -> Vec<f64> {
    let mut e = vec![0.0f64; p_max + 1];
    for (partial, oracle) in per_target {
        for p in 0..=p_max {
            e[p] = e[p].max((partial[p.min(partial.len() - 1)] - oracle).abs());
        }
    }
    e
}

fn meta_for(cfg: &ExperimentConfig, sys: &ChargeSystem, targets: usize) -> ReportMeta {
    ReportMeta {
        seed: cfg.seed,
        charges: sys.len(),
        total_charge: sys.total_abs_charge(),
        tol: cfg.tol,
        targets,
        ..Default::default()
    }
}

fn geometric(q: f64, pre: f64, ratio: f64, p: usize) -> f64 {
    q * pre * ratio.powi(p as i32 + 1)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    match cfg.kind {
        ExperimentKind::Me => run_me(cfg),
        ExperimentKind::Le => run_le(cfg),
        ExperimentKind::M2m => run_m2m(cfg),
        ExperimentKind::L2l => run_l2l(cfg),
        ExperimentKind::M2l => run_m2l(cfg),
        ExperimentKind::ReactionMe => run_reaction_me(cfg),
        ExperimentKind::ReactionLe => run_reaction_le(cfg),
        ExperimentKind::ReactionM2l => run_reaction_m2l(cfg),
        k => {
            let kind = match k {
                ExperimentKind::DensityProps => SuiteKind::DensityProps,
                ExperimentKind::Cagniard => SuiteKind::Cagniard,
                ExperimentKind::AdditionTheorems => SuiteKind::AdditionTheorems,
                _ => SuiteKind::InterfaceInequality,
            };
            let s = run_property_suite(kind);
            let mut r = ConvergenceReport::new(cfg.kind, ReportMeta { seed: cfg.seed, tol: cfg.tol, ..Default::default() });
            r.checks = s.checks;
            r.finish();
            Ok(r)
        }
    }
}

fn free_floor(sys: &ChargeSystem, targets: &[Vec3]) -> f64 {
    let pos: Vec<Vec3> = sys.charges.iter().map(|c| c.position()).collect();
    1e-14 * sys.total_abs_charge() / (FOUR_PI * min_distance(targets, &pos))
}

fn free_sources(cfg: &ExperimentConfig) -> Result<ChargeSystem> {
    let g = &cfg.geometry;
    generate_charges(cfg.seed, cfg.charges, &LayeredMedium::homogeneous(), g.source_center, g.a_s)
}

fn run_me(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    let g = &cfg.geometry;
    let (a, r) = (g.a_s, g.eval_radius.unwrap_or(4.0 * g.a_s));
    if r <= a {
        return Err(Error::Config("eval_radius must exceed a_s".into()));
    }
    let sys = free_sources(cfg)?;
    let me = me_from_charges(&sys, g.source_center, a, cfg.p_max)?;
    let targets = fibonacci_sphere(cfg.targets, g.source_center, r);
    let per: Vec<(Vec<f64>, f64)> = targets
        .par_iter()
        .map(|&t| {
            let (terms, mags) = multipole_degree_terms(&me.coeff, me.p, me.center, t)?;
            Ok((partial_sums(&terms, &mags)?, sys.free_potential(t)))
        })
        .collect::<Result<_>>()?;
    let err = max_errors(&per, cfg.p_max);
    let mut rep = ConvergenceReport::new(cfg.kind, meta_for(cfg, &sys, targets.len()));
    rep.meta.noise_floor = free_floor(&sys, &targets);
    let q = sys.total_abs_charge();
    for p in cfg.p_min..=cfg.p_max {
        rep.push_row(p, err[p], geometric(q, 1.0 / (FOUR_PI * (r - a)), a / r, p));
    }
    rep.rate_theory = Some((r / a).ln());
    rep.finish();
    let theory = rep.rate_theory.unwrap();
    let dev = rep.rate_fit.map(|f| (f - theory).abs() / theory).unwrap_or(f64::INFINITY);
    rep.checks.push(CheckResult::at_most("rate_fit_relative_deviation", dev, 0.10));
    rep.finish();
    Ok(rep)
}

/// Target center, outer radius `a_t` (closest approach of the source ball) and evaluation radius.
fn le_geometry(cfg: &ExperimentConfig) -> Result<(Vec3, f64, f64)> {
    let g = &cfg.geometry;
    let tc = g.target_center.unwrap_or(add(g.source_center, [4.0 * g.a_s, 0.0, 0.0]));
    let a_t = norm(sub(tc, g.source_center)) - g.a_s;
    let r_t = g.eval_radius.unwrap_or(a_t / 4.0);
    if !(a_t > 0.0 && r_t < a_t) {
        return Err(Error::Config(format!("local geometry needs 0 < eval_radius < a_t = {a_t}")));
    }
    Ok((tc, a_t, r_t))
}

fn run_le(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    let (tc, a_t, r_t) = le_geometry(cfg)?;
    let sys = free_sources(cfg)?;
    let le = le_from_charges(&sys, tc, a_t * (1.0 - 1e-12), cfg.p_max)?;
    let targets = fibonacci_sphere(cfg.targets, tc, r_t);
    let per: Vec<(Vec<f64>, f64)> = targets
        .par_iter()
        .map(|&t| {
            let (terms, mags) = local_degree_terms(&le.coeff, le.p, le.center, t);
            Ok((partial_sums(&terms, &mags)?, sys.free_potential(t)))
        })
        .collect::<Result<_>>()?;
    let err = max_errors(&per, cfg.p_max);
    let mut rep = ConvergenceReport::new(cfg.kind, meta_for(cfg, &sys, targets.len()));
    rep.meta.noise_floor = free_floor(&sys, &targets);
    let q = sys.total_abs_charge();
    for p in cfg.p_min..=cfg.p_max {
        rep.push_row(p, err[p], geometric(q, 1.0 / (FOUR_PI * (a_t - r_t)), r_t / a_t, p));
    }
    rep.rate_theory = Some((a_t / r_t).ln());
    rep.finish();
    Ok(rep)
}

fn run_m2m(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    let g = &cfg.geometry;
    let a = g.a_s;
    let shift = g.shift.unwrap_or([0.3 * a, -0.2 * a, 0.25 * a]);
    let nc = add(g.source_center, shift);
    let r_ss = norm(shift);
    let big = a + r_ss;
    let r = g.eval_radius.unwrap_or(4.0 * big);
    if r <= big {
        return Err(Error::Config("eval_radius must exceed a_s + |shift|".into()));
    }
    let sys = free_sources(cfg)?;
    let me = me_from_charges(&sys, g.source_center, a, cfg.p_max)?;
    let shifted = m2m(&me, nc)?;
    let direct = me_from_charges(&sys, nc, big, cfg.p_max)?;
    let scale_c = direct.coeff.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let diff = shifted.coeff.iter().zip(&direct.coeff).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let targets = fibonacci_sphere(cfg.targets, nc, r);
    let per: Vec<(Vec<f64>, f64)> = targets
        .par_iter()
        .map(|&t| {
            let (terms, mags) = multipole_degree_terms(&shifted.coeff, shifted.p, nc, t)?;
            Ok((partial_sums(&terms, &mags)?, sys.free_potential(t)))
        })
        .collect::<Result<_>>()?;
    let err = max_errors(&per, cfg.p_max);
    let mut rep = ConvergenceReport::new(cfg.kind, meta_for(cfg, &sys, targets.len()));
    rep.meta.noise_floor = free_floor(&sys, &targets);
    let q = sys.total_abs_charge();
    for p in cfg.p_min..=cfg.p_max {
        rep.push_row(p, err[p], geometric(q, 1.0 / (FOUR_PI * (r - big)), big / r, p));
    }
    rep.rate_theory = Some((r / big).ln());
    rep.checks.push(CheckResult::at_most("m2m_vs_recomputed_relative", diff / scale_c, 1e-12));
    rep.finish();
    Ok(rep)
}

fn run_l2l(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    let (tc, a_t, r_t) = le_geometry(cfg)?;
    let shift = cfg.geometry.shift.unwrap_or([0.1 * r_t, 0.05 * r_t, -0.08 * r_t]);
    let nc = add(tc, shift);
    let r_eff = r_t + norm(shift);
    if r_eff >= a_t {
        return Err(Error::Config("shifted target sphere leaves the local region".into()));
    }
    let sys = free_sources(cfg)?;
    let le = le_from_charges(&sys, tc, a_t * (1.0 - 1e-12), cfg.p_max)?;
    let targets = fibonacci_sphere(cfg.targets, nc, r_t);
    let mut rep = ConvergenceReport::new(cfg.kind, meta_for(cfg, &sys, targets.len()));
    rep.meta.noise_floor = free_floor(&sys, &targets);
    let q = sys.total_abs_charge();
    let mut worst_rel = 0.0f64;
    for p in cfg.p_min..=cfg.p_max {
        let orig = le.truncated(p);
        let sh = l2l(&orig, nc)?;
        let vals: Vec<(f64, f64, f64)> = targets
            .par_iter()
            .map(|&t| Ok((eval_local(&sh, t)?, eval_local(&orig, t)?, sys.free_potential(t))))
            .collect::<Result<_>>()?;
        let scale_v = vals.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
        let d = vals.iter().map(|v| (v.0 - v.1).abs()).fold(0.0, f64::max);
        worst_rel = worst_rel.max(d / scale_v);
        let e = vals.iter().map(|v| (v.0 - v.2).abs()).fold(0.0, f64::max);
        rep.push_row(p, e, geometric(q, 1.0 / (FOUR_PI * (a_t - r_eff)), r_eff / a_t, p));
    }
    rep.rate_theory = Some((a_t / r_eff).ln());
    rep.checks.push(CheckResult::at_most("l2l_pointwise_relative", worst_rel, 1e-12));
    rep.finish();
    Ok(rep)
}

fn unit(v: Vec3) -> Vec3 {
    scale(v, 1.0 / norm(v))
}

fn run_m2l(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    let g = &cfg.geometry;
    let a_s = g.a_s;
    let a_t = g.a_t.unwrap_or(a_s);
    let c = g.c.unwrap_or(3.0);
    let dir = unit(g.direction.unwrap_or([0.0, 0.0, 1.0]));
    let tc = add(g.source_center, scale(dir, (a_s + c * a_t) * (1.0 + 1e-9)));
    let sys = free_sources(cfg)?;
    let me = me_from_charges(&sys, g.source_center, a_s, cfg.p_max)?;
    let targets = fibonacci_sphere(cfg.targets, tc, a_t);
    let mut rep = ConvergenceReport::new(cfg.kind, meta_for(cfg, &sys, targets.len()));
    rep.meta.noise_floor = free_floor(&sys, &targets);
    rep.meta.notes.push(format!("c = {c}, a_t = {a_t}"));
    let q = sys.total_abs_charge();
    let exact: Vec<f64> = targets.iter().map(|&t| sys.free_potential(t)).collect();
    let ratio = (a_s + a_t) / (a_s + c * a_t);
    for p in cfg.p_min..=cfg.p_max {
        let le = m2l_free(&me, tc, a_s, a_t, p)?;
        let e = targets
            .par_iter()
            .zip(&exact)
            .map(|(&t, &u)| Ok((eval_local(&le, t)? - u).abs()))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        rep.push_row(p, e, geometric(q, 1.0 / (FOUR_PI * (c - 1.0) * a_t), ratio, p));
    }
    rep.rate_theory = Some(-ratio.ln());
    rep.finish();
    Ok(rep)
}

struct ReactionSetup {
    medium: LayeredMedium,
    comp: ReactionComponent,
    sys: ChargeSystem,
    m_sigma: f64,
    pol_center: Vec3,
    pol_charges: Vec<Vec3>,
}

fn reaction_setup(cfg: &ExperimentConfig) -> Result<ReactionSetup> {
    let medium = cfg.medium()?;
    let comp = cfg.component.ok_or_else(|| Error::Config("missing component".into()))?;
    comp.check(&medium)?;
    let g = &cfg.geometry;
    if medium.layer_of(g.source_center[2])? != comp.ellp {
        return Err(Error::WrongLayer { z: g.source_center[2], layer: comp.ellp });
    }
    let sys = generate_charges(cfg.seed, cfg.charges, &medium, g.source_center, g.a_s)?;
    let m_sigma = density_bound(&medium, comp)?.value;
    let pol_center = polarization_source(&medium, comp, g.source_center)?;
    let pol_charges = sys
        .charges
        .iter()
        .map(|c| polarization_source(&medium, comp, c.position()))
        .collect::<Result<_>>()?;
    Ok(ReactionSetup { medium, comp, sys, m_sigma, pol_center, pol_charges })
}

impl ReactionSetup {
    fn targets(&self, n: usize, center: Vec3, radius: f64) -> Result<Vec<Vec3>> {
        let t: Vec<Vec3> = fibonacci_sphere(n, center, radius)
            .into_iter()
            .filter(|x| self.medium.in_layer(self.comp.ell, x[2]))
            .collect();
        if t.is_empty() {
            return Err(Error::Config("no target of the sphere lies in the target layer".into()));
        }
        Ok(t)
    }

    fn oracle(&self, r: Vec3, tol: f64) -> Result<(f64, f64)> {
        let mut v = 0.0;
        let mut e = 0.0;
        for c in &self.sys.charges {
            let u = eval_reaction_green(&self.medium, self.comp, r, c.position(), tol)?;
            v += c.q * u.value.re;
            e += c.q.abs() * u.error;
        }
        Ok((v, e))
    }

    fn meta(&self, cfg: &ExperimentConfig, targets: &[Vec3]) -> ReportMeta {
        let mut m = meta_for(cfg, &self.sys, targets.len());
        m.m_sigma = Some(self.m_sigma);
        let scale = self.sys.total_abs_charge() * self.m_sigma / (FOUR_PI * min_distance(targets, &self.pol_charges));
        m.noise_floor = 10.0 * cfg.tol * scale;
        m
    }
}

fn finish_reaction(rep: &mut ConvergenceReport, s: &ReactionSetup, errors: &[f64], tol: f64) {
    if s.m_sigma == 0.0 {
        rep.degenerate = true;
        rep.meta.notes.push("degenerate: zero field".into());
        let worst = errors.iter().cloned().fold(0.0, f64::max);
        rep.checks.push(CheckResult::at_most("degenerate_errors_below_tol", worst, tol));
    }
    rep.finish();
}

fn run_reaction_me(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    let s = reaction_setup(cfg)?;
    let g = &cfg.geometry;
    let a = g.a_s;
    let r = g.eval_radius.unwrap_or(3.0 * a);
    let center = match cfg.formulation {
        MeForm::Polarization => s.pol_center,
        MeForm::Direct => g.source_center,
    };
    let me = reaction_me_from_charges(&s.sys, &s.medium, s.comp, cfg.formulation, center, a, cfg.p_max)?;
    let targets = s.targets(cfg.targets, s.pol_center, r)?;
    let per: Vec<((Vec<f64>, f64), QuadStats)> = targets
        .par_iter()
        .map(|&t| {
            let ev = eval_reaction_me(&me, &s.medium, t, cfg.tol)?;
            let (u, ue) = s.oracle(t, cfg.tol)?;
            Ok(((ev.partial, u), ev.quad.merge(QuadStats { rel_error: 0.0, abs_error: ue })))
        })
        .collect::<Result<_>>()?;
    let stats = per.iter().fold(QuadStats::default(), |a, (_, q)| a.merge(*q));
    let per: Vec<(Vec<f64>, f64)> = per.into_iter().map(|(x, _)| x).collect();
    let err = max_errors(&per, cfg.p_max);
    let mut rep = ConvergenceReport::new(cfg.kind, s.meta(cfg, &targets));
    rep.meta.quad_rel_error = stats.rel_error;
    rep.meta.quad_abs_error = stats.abs_error;
    rep.meta.notes.push(format!("formulation {:?}, component {:?}", cfg.formulation, s.comp));
    let q = s.sys.total_abs_charge();
    for p in cfg.p_min..=cfg.p_max {
        rep.push_row(p, err[p], geometric(q * s.m_sigma, 1.0 / (FOUR_PI * (r - a)), a / r, p));
    }
    rep.rate_theory = Some((r / a).ln());
    finish_reaction(&mut rep, &s, &err, cfg.tol);
    Ok(rep)
}

fn run_reaction_le(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    let s = reaction_setup(cfg)?;
    let g = &cfg.geometry;
    let tc = g.target_center.unwrap_or(g.source_center);
    if !s.medium.in_layer(s.comp.ell, tc[2]) {
        return Err(Error::WrongLayer { z: tc[2], layer: s.comp.ell });
    }
    let a_t = norm(sub(tc, s.pol_center)) - g.a_s;
    let r_t = g.eval_radius.unwrap_or(a_t / 3.0);
    if !(a_t > 0.0 && r_t < a_t) {
        return Err(Error::Config(format!("reaction local geometry needs 0 < eval_radius < a_t = {a_t}")));
    }
    let (le, qs) = reaction_le_from_charges(&s.sys, &s.medium, s.comp, tc, a_t * (1.0 - 1e-9), cfg.p_max, cfg.tol)?;
    let targets = s.targets(cfg.targets, tc, r_t)?;
    let per: Vec<(Vec<f64>, f64)> = targets
        .par_iter()
        .map(|&t| Ok((eval_local_partial(&le, t)?, s.oracle(t, cfg.tol)?.0)))
        .collect::<Result<_>>()?;
    let err = max_errors(&per, cfg.p_max);
    let mut rep = ConvergenceReport::new(cfg.kind, s.meta(cfg, &targets));
    rep.meta.quad_rel_error = qs.rel_error;
    rep.meta.quad_abs_error = qs.abs_error;
    let q = s.sys.total_abs_charge();
    for p in cfg.p_min..=cfg.p_max {
        rep.push_row(p, err[p], geometric(q * s.m_sigma, 1.0 / (FOUR_PI * (a_t - r_t)), r_t / a_t, p));
    }
    rep.rate_theory = Some((a_t / r_t).ln());
    finish_reaction(&mut rep, &s, &err, cfg.tol);
    Ok(rep)
}

fn run_reaction_m2l(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    let s = reaction_setup(cfg)?;
    let g = &cfg.geometry;
    let a_s = g.a_s;
    let a_t = g.a_t.unwrap_or(a_s);
    let c = g.c.unwrap_or(3.0);
    let default_dir = if s.comp.a == 1 { [0.0, 0.0, 1.0] } else { [0.0, 0.0, -1.0] };
    let dir = unit(g.direction.unwrap_or(default_dir));
    let tc = add(s.pol_center, scale(dir, (a_s + c * a_t) * (1.0 + 1e-9)));
    if !s.medium.in_layer(s.comp.ell, tc[2]) {
        return Err(Error::WrongLayer { z: tc[2], layer: s.comp.ell });
    }
    let me = reaction_me_from_charges(&s.sys, &s.medium, s.comp, MeForm::Polarization, s.pol_center, a_s, cfg.p_max)?;
    let op = reaction_m2l_operator(&me, &s.medium, tc, a_s, a_t, cfg.tol)?;
    let targets = s.targets(cfg.targets, tc, a_t)?;
    let oracle: Vec<f64> = targets.par_iter().map(|&t| Ok(s.oracle(t, cfg.tol)?.0)).collect::<Result<_>>()?;
    let mut rep = ConvergenceReport::new(cfg.kind, s.meta(cfg, &targets));
    rep.meta.quad_rel_error = op.rel_error;
    rep.meta.notes.push(format!("c = {c}, a_t = {a_t}, operator cached at p = {}", cfg.p_max));
    let q = s.sys.total_abs_charge();
    let ratio = (a_s + a_t) / (a_s + c * a_t);
    let mut errs = Vec::new();
    for p in cfg.p_min..=cfg.p_max {
        let le = apply_m2l(&op, &me, tc, p);
        let e = targets
            .iter()
            .zip(&oracle)
            .map(|(&t, &u)| Ok((eval_local(&le, t)? - u).abs()))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        errs.push(e);
        rep.push_row(p, e, geometric(q * s.m_sigma, 1.0 / (2.0 * PI * (c - 1.0) * a_t), ratio, p));
    }
    rep.rate_theory = Some(-ratio.ln());

    // One unit charge at the source center: the truncated operator alone must reproduce the oracle.
    let single = ChargeSystem::new(&s.medium, &[(1.0, g.source_center)])?;
    let me1 = reaction_me_from_charges(&single, &s.medium, s.comp, MeForm::Polarization, s.pol_center, a_s, cfg.p_max)?;
    let le1 = apply_m2l(&op, &me1, tc, cfg.p_max);
    let mut worst = 0.0f64;
    for &t in &targets {
        let u = eval_reaction_green(&s.medium, s.comp, t, g.source_center, cfg.tol)?.value.re;
        worst = worst.max((eval_local(&le1, t)? - u).abs());
    }
    rep.checks.push(CheckResult::at_most(format!("single_charge_p{}", cfg.p_max), worst, 1e-8));
    finish_reaction(&mut rep, &s, &errs, cfg.tol);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charges_are_reproducible() {
        let m = LayeredMedium::homogeneous();
        let a = generate_charges(7, 5, &m, [0.0; 3], 1.0).unwrap();
        let b = generate_charges(7, 5, &m, [0.0; 3], 1.0).unwrap();
        assert_eq!(a, b);
        assert!(a.charges.iter().all(|c| norm(c.position()) <= 1.0 && c.q.abs() <= 1.0));
        assert!(generate_charges(0, 0, &m, [0.0; 3], 1.0).unwrap().is_empty());
    }

    #[test]
    fn box_must_fit_layer() {
        let m = LayeredMedium::dielectric(vec![0.0], vec![1.0, 2.0]).unwrap();
        assert!(matches!(generate_charges(0, 3, &m, [0.0, 0.0, 0.5], 1.0), Err(Error::BoxCrossesInterface)));
    }

    #[test]
    fn small_me_run() {
        let mut c = ExperimentConfig::new(ExperimentKind::Me);
        c.p_max = 12;
        c.geometry.eval_radius = Some(4.0);
        let r = run_experiment(&c).unwrap();
        assert!(r.pass, "{}", r.summary_line());
        assert_eq!(r.rows.len(), 12);
    }
}
