//! Reaction densities of a three-layer slab along the real axis, and their uniform bounds.

use num_complex::Complex64;

use layerfmm::densities::{density_bound, reaction_densities};
use layerfmm::medium::{LayeredMedium, ReactionComponent};

fn main() -> layerfmm::Result<()> {
    let m = LayeredMedium::dielectric(vec![0.0, -1.0], vec![1.0, 5.0, 2.0])?;
    println!("{:>6} {:>14} {:>14} {:>14}", "k", "sigma11_00", "sigma12_01", "sigma22_22");
    for k in [0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 20.0] {
        let kc = Complex64::new(k, 0.0);
        let a = reaction_densities(&m, 0, 0, kc)?.get(1, 1)?;
        let b = reaction_densities(&m, 0, 1, kc)?.get(1, 2)?;
        let c = reaction_densities(&m, 2, 2, kc)?.get(2, 2)?;
        println!("{k:>6.2} {:>14.10} {:>14.10} {:>14.10}", a.re, b.re, c.re);
    }
    for ell in 0..=2 {
        for ellp in 0..=2 {
            for c in ReactionComponent::all(&m, ell, ellp) {
                let b = density_bound(&m, c)?;
                println!("M_sigma for {}{} ({ell},{ellp}): {:.6}", c.a, c.b, b.value);
            }
        }
    }
    Ok(())
}
