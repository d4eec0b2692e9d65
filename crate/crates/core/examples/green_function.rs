//! Reaction Green's function by Sommerfeld quadrature, checked against the image charge.

use std::f64::consts::PI;

use layerfmm::geometry::{norm, sub};
use layerfmm::medium::{LayeredMedium, ReactionComponent};
use layerfmm::sommerfeld::eval_reaction_green;

fn main() -> layerfmm::Result<()> {
    let (r, rp) = ([0.4, -0.3, 0.8], [0.0, 0.2, 0.5]);
    let c = ReactionComponent::new(1, 1, 0, 0);
    for eps in [2.0, 10.0, 80.0] {
        let m = LayeredMedium::dielectric(vec![0.0], vec![1.0, eps])?;
        let q = eval_reaction_green(&m, c, r, rp, 1e-12)?;
        let image = (1.0 - eps) / (1.0 + eps) / (4.0 * PI * norm(sub(r, [rp[0], rp[1], -rp[2]])));
        println!("eps {eps:>4}: quadrature {:.15e} (est. {:.1e}), image {image:.15e}", q.value.re, q.error);
    }
    let slab = LayeredMedium::dielectric(vec![0.0, -1.0], vec![1.0, 5.0, 2.0])?;
    for comp in ReactionComponent::all(&slab, 0, 1) {
        let q = eval_reaction_green(&slab, comp, r, [0.0, 0.0, -0.5], 1e-12)?;
        println!("slab u^{}{}_(0,1): {:.15e}", comp.a, comp.b, q.value.re);
    }
    Ok(())
}
