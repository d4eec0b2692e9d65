//! Multipole-to-multipole, local-to-local and multipole-to-local translations in free space.

use layerfmm::expansions::{eval_local, l2l, le_from_charges, m2l_free, m2m, me_from_charges, ChargeSystem};
use layerfmm::lab::generate_charges;
use layerfmm::medium::LayeredMedium;

fn main() -> layerfmm::Result<()> {
    let sys = generate_charges(3, 20, &LayeredMedium::homogeneous(), [0.0; 3], 1.0)?;
    let me = me_from_charges(&sys, [0.0; 3], 1.0, 16)?;
    let shifted = m2m(&me, [0.3, -0.2, 0.1])?;
    let direct = me_from_charges(&sys, [0.3, -0.2, 0.1], 1.5, 16)?;
    let diff = shifted.coeff.iter().zip(&direct.coeff).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("M2M versus recomputed coefficients: {diff:.2e}");

    let far = ChargeSystem::free(&[(1.0, [6.0, 0.0, 0.0]), (-0.5, [0.0, 7.0, 1.0])]);
    let le = le_from_charges(&far, [0.0; 3], 1.0, 16)?;
    let moved = l2l(&le, [0.2, 0.1, -0.1])?;
    let t = [0.4, 0.0, 0.1];
    println!("L2L pointwise: {:.2e}", (eval_local(&le, t)? - eval_local(&moved, t)?).abs());

    for c in [2.0, 3.0] {
        let tc = [1.0 + c, 0.0, 0.0];
        for p in [4, 8, 16] {
            let local = m2l_free(&me, tc, 1.0, 1.0, p)?;
            let x = [tc[0] + 0.5, 0.3, -0.2];
            println!("M2L c={c} p={p:>2}: error {:.3e}", (eval_local(&local, x)? - sys.free_potential(x)).abs());
        }
    }
    Ok(())
}
