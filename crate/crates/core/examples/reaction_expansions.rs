//! Reaction-field multipole (both forms), local and multipole-to-local expansions in a slab.

use layerfmm::expansions::reaction::eval_local_partial;
use layerfmm::expansions::{eval_reaction_me, m2l_reaction, reaction_le_from_charges, reaction_me_from_charges};
use layerfmm::lab::generate_charges;
use layerfmm::medium::{polarization_source, LayeredMedium, ReactionComponent};
use layerfmm::sommerfeld::{eval_reaction_green, MeForm};

fn main() -> layerfmm::Result<()> {
    let m = LayeredMedium::dielectric(vec![0.0, -1.0], vec![1.0, 5.0, 2.0])?;
    let comp = ReactionComponent::new(1, 1, 0, 0);
    let center = [0.0, 0.0, 1.5];
    let sys = generate_charges(6, 10, &m, center, 1.0)?;
    let pc = polarization_source(&m, comp, center)?;
    let oracle = |t| -> layerfmm::Result<f64> {
        let mut u = 0.0;
        for c in &sys.charges {
            u += c.q * eval_reaction_green(&m, comp, t, c.position(), 1e-12)?.value.re;
        }
        Ok(u)
    };

    let t = [0.5, 0.5, 1.2];
    let u = oracle(t)?;
    for p in [3, 6, 9, 12] {
        let pol = reaction_me_from_charges(&sys, &m, comp, MeForm::Polarization, pc, 1.0, p)?;
        let dir = reaction_me_from_charges(&sys, &m, comp, MeForm::Direct, center, 1.0, p)?;
        let (a, b) = (eval_reaction_me(&pol, &m, t, 1e-12)?, eval_reaction_me(&dir, &m, t, 1e-12)?);
        println!("ME p={p:>2}: polarization {:.3e}, direct {:.3e}", (a.value - u).abs(), (b.value - u).abs());
    }

    let tc = [0.0, 0.0, 2.0];
    let (le, _) = reaction_le_from_charges(&sys, &m, comp, tc, 2.4, 12, 1e-12)?;
    let x = [0.2, -0.1, 2.3];
    let partial = eval_local_partial(&le, x)?;
    let ux = oracle(x)?;
    for p in [3, 6, 9, 12] {
        println!("LE p={p:>2}: error {:.3e}", (partial[p] - ux).abs());
    }

    let me = reaction_me_from_charges(&sys, &m, comp, MeForm::Polarization, pc, 1.0, 12)?;
    let tc = [0.0, 0.0, pc[2] + 4.0];
    let local = m2l_reaction(&me, &m, tc, 1.0, 1.0, 12, 1e-12)?;
    let y = [0.3, 0.3, tc[2] + 0.2];
    println!("M2L p=12: error {:.3e}", (*eval_local_partial(&local, y)?.last().unwrap() - oracle(y)?).abs());
    Ok(())
}
