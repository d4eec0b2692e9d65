use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;

use layerfmm::densities::{density_bound, reaction_densities};
use layerfmm::expansions::{eval_multipole, eval_reaction_me, me_from_charges, reaction_me_from_charges, ChargeSystem};
use layerfmm::geometry::{norm, sub, Vec3};
use layerfmm::lab::{run_experiment, run_property_suite, ExperimentConfig, SuiteKind};
use layerfmm::medium::{polarization_source, LayeredMedium, ReactionComponent};
use layerfmm::sommerfeld::{eval_reaction_green, MeForm};
use layerfmm::{Error, Result};

#[derive(Parser)]
#[command(name = "layerfmm", about = "Layered-media reaction densities, Green's functions and expansion bounds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate the reaction densities on a real k grid (CSV on stdout or --out).
    Density {
        #[arg(long)]
        medium: PathBuf,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        ellprime: usize,
        /// `start:stop:count`, endpoints included.
        #[arg(long, default_value = "0:50:512")]
        k_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One reaction component of the Green's function.
    Green {
        #[arg(long)]
        medium: PathBuf,
        #[arg(long)]
        component: String,
        #[arg(long, allow_hyphen_values = true)]
        source: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Multipole expansion of a charge set versus the direct sum.
    Me {
        #[arg(long)]
        medium: Option<PathBuf>,
        #[arg(long)]
        charges: PathBuf,
        /// Reaction component `ab`; omit for free space.
        #[arg(long)]
        component: Option<String>,
        /// Physical center of the source box.
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        targets: PathBuf,
        #[arg(long, default_value = "polarization")]
        form: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Experiments and property suites.
    Lab {
        #[command(subcommand)]
        cmd: LabCmd,
    },
}

#[derive(Subcommand)]
enum LabCmd {
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    Suite {
        #[arg(long, default_value = "all")]
        kind: String,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ChargeEntry {
    Obj { q: f64, position: Vec3 },
    Flat([f64; 4]),
}

fn parse_vec3(s: &str) -> Result<Vec3> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad coordinate {t:?}"))))
        .collect::<Result<_>>()?;
    v.try_into().map_err(|_| Error::Config(format!("expected x,y,z, got {s:?}")))
}

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Config(format!("k grid must be start:stop:count, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if n == 0 || a < 0.0 || b < a {
        return Err(bad());
    }
    Ok((0..n).map(|i| if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect())
}

fn emit(out: &Option<PathBuf>, s: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, s)?,
        None => print!("{s}"),
    }
    Ok(())
}

fn density(medium: PathBuf, ell: usize, ellp: usize, grid: &str, out: Option<PathBuf>) -> Result<bool> {
    let m = LayeredMedium::load(medium)?;
    let comps = ReactionComponent::all(&m, ell, ellp);
    m.check_layer(ell)?;
    m.check_layer(ellp)?;
    let mut s = String::from("k");
    for c in &comps {
        let _ = write!(s, ",re_sigma{}{},im_sigma{}{}", c.a, c.b, c.a, c.b);
    }
    s.push('\n');
    for k in parse_grid(grid)? {
        let set = reaction_densities(&m, ell, ellp, Complex64::new(k, 0.0))?;
        let _ = write!(s, "{k:.10e}");
        for c in &comps {
            let v = set.get(c.a, c.b)?;
            let _ = write!(s, ",{:.16e},{:.16e}", v.re, v.im);
        }
        s.push('\n');
    }
    emit(&out, &s)?;
    Ok(true)
}

fn green(medium: PathBuf, component: &str, source: &str, target: &str, tol: f64) -> Result<bool> {
    let m = LayeredMedium::load(medium)?;
    let (a, b) = ReactionComponent::parse_ab(component)?;
    let (rp, r) = (parse_vec3(source)?, parse_vec3(target)?);
    let comp = ReactionComponent::new(a, b, m.layer_of(r[2])?, m.layer_of(rp[2])?);
    let q = eval_reaction_green(&m, comp, r, rp, tol)?;
    println!("value {:.16e}", q.value.re);
    println!("error_estimate {:.3e}", q.error);
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn me(
    medium: Option<PathBuf>,
    charges: PathBuf,
    component: Option<String>,
    center: &str,
    p: usize,
    targets: PathBuf,
    form: &str,
    tol: f64,
    out: Option<PathBuf>,
) -> Result<bool> {
    let m = match medium {
        Some(p) => LayeredMedium::load(p)?,
        None => LayeredMedium::homogeneous(),
    };
    let entries: Vec<ChargeEntry> = serde_json::from_str(&std::fs::read_to_string(charges)?)?;
    let pts: Vec<(f64, Vec3)> = entries
        .into_iter()
        .map(|e| match e {
            ChargeEntry::Obj { q, position } => (q, position),
            ChargeEntry::Flat([q, x, y, z]) => (q, [x, y, z]),
        })
        .collect();
    let tg: Vec<Vec3> = serde_json::from_str(&std::fs::read_to_string(targets)?)?;
    let c = parse_vec3(center)?;
    let a = pts.iter().map(|(_, x)| norm(sub(*x, c))).fold(0.0, f64::max);
    let qsum: f64 = pts.iter().map(|(q, _)| q.abs()).sum();
    let mut s = String::from("target,expansion,oracle,abs_error,bound\n");
    let mut pass = true;
    let mut row = |i: usize, v: f64, u: f64, bound: f64, floor: f64| {
        let e = (v - u).abs();
        pass &= e <= bound || e <= floor;
        let _ = writeln!(s, "{i},{v:.16e},{u:.16e},{e:.6e},{bound:.6e}");
    };
    match component {
        None => {
            let sys = ChargeSystem::free(&pts);
            let exp = me_from_charges(&sys, c, a, p)?;
            for (i, t) in tg.iter().enumerate() {
                let r = norm(sub(*t, c));
                if r <= a {
                    return Err(Error::ChargeInsideBox { dist: r, radius: a });
                }
                let bound = qsum / (4.0 * PI * (r - a)) * (a / r).powi(p as i32 + 1);
                let dmin = pts.iter().map(|(_, x)| norm(sub(*t, *x))).fold(f64::INFINITY, f64::min);
                row(i, eval_multipole(&exp, *t)?, sys.free_potential(*t), bound, 1e-14 * qsum / (4.0 * PI * dmin));
            }
        }
        Some(ab) => {
            let (ca, cb) = ReactionComponent::parse_ab(&ab)?;
            let ellp = m.layer_of(c[2])?;
            let ell = match tg.first() {
                Some(t) => m.layer_of(t[2])?,
                None => ellp,
            };
            let comp = ReactionComponent::new(ca, cb, ell, ellp);
            comp.check(&m)?;
            let form: MeForm = serde_json::from_value(serde_json::Value::String(form.to_string()))?;
            let sys = ChargeSystem::new(&m, &pts)?;
            let pc = polarization_source(&m, comp, c)?;
            let ec = if form == MeForm::Polarization { pc } else { c };
            let exp = reaction_me_from_charges(&sys, &m, comp, form, ec, a, p)?;
            let ms = density_bound(&m, comp)?.value;
            let pol: Vec<Vec3> = pts.iter().map(|(_, x)| polarization_source(&m, comp, *x)).collect::<Result<_>>()?;
            for (i, t) in tg.iter().enumerate() {
                if m.layer_of(t[2])? != ell {
                    return Err(Error::WrongLayer { z: t[2], layer: ell });
                }
                let r = norm(sub(*t, pc));
                let bound = qsum * ms / (4.0 * PI * (r - a)) * (a / r).powi(p as i32 + 1);
                let mut u = 0.0;
                for (q, x) in &pts {
                    u += q * eval_reaction_green(&m, comp, *t, *x, tol)?.value.re;
                }
                let dmin = pol.iter().map(|x| norm(sub(*t, *x))).fold(f64::INFINITY, f64::min);
                let floor = 10.0 * tol * qsum * ms / (4.0 * PI * dmin);
                row(i, eval_reaction_me(&exp, &m, *t, tol)?.value, u, bound, floor);
            }
        }
    }
    emit(&out, &s)?;
    Ok(pass)
}

fn lab_run(config: PathBuf, out: PathBuf, json: Option<PathBuf>) -> Result<bool> {
    let cfg = ExperimentConfig::load(config)?;
    let rep = run_experiment(&cfg)?;
    std::fs::write(out, rep.to_csv())?;
    if let Some(j) = json {
        std::fs::write(j, rep.to_json())?;
    }
    println!("{}", rep.summary_line());
    for c in &rep.checks {
        println!("  {} {:.3e} (threshold {:.1e}) {}", c.name, c.value, c.threshold, if c.pass { "ok" } else { "FAIL" });
    }
    Ok(rep.pass)
}

fn lab_suite(kind: &str) -> Result<bool> {
    let s = run_property_suite(kind.parse::<SuiteKind>()?);
    for c in &s.checks {
        println!("{} {} {:.3e} (threshold {:.1e})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.threshold);
    }
    Ok(s.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Density { medium, ell, ellprime, k_grid, out } => density(medium, ell, ellprime, &k_grid, out),
        Cmd::Green { medium, component, source, target, tol } => green(medium, &component, &source, &target, tol),
        Cmd::Me { medium, charges, component, center, p, targets, form, tol, out } => {
            me(medium, charges, component, &center, p, targets, &form, tol, out)
        }
        Cmd::Lab { cmd: LabCmd::Run { config, out, json } } => lab_run(config, out, json),
        Cmd::Lab { cmd: LabCmd::Suite { kind } } => lab_suite(&kind),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
