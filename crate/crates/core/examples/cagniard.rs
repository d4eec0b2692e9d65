//! Contour deformation identity for a few test functions.

use layerfmm::sommerfeld::{cagniard_identity_check, CagniardFunction};

fn main() -> layerfmm::Result<()> {
    for f in CagniardFunction::ALL {
        for (rho, z, eta) in [(0.0, 1.0, 1.0), (1.0, 0.5, 1.5), (2.0, 2.0, 0.5)] {
            let c = cagniard_identity_check(f, rho, z, eta, 1e-10)?;
            println!("{:<10} rho={rho} z={z} eta={eta}: lhs {:.12e} rhs {:.12e} residual {:.1e}", f.name(), c.lhs.re, c.rhs.re, c.residual());
        }
    }
    Ok(())
}
