//! Free-space multipole and local expansions: error against the a priori bound per order.

use layerfmm::lab::{run_experiment, ExperimentConfig, ExperimentKind};

fn main() -> layerfmm::Result<()> {
    for (kind, r) in [(ExperimentKind::Me, Some(2.0)), (ExperimentKind::Me, Some(4.0)), (ExperimentKind::Le, None)] {
        let mut cfg = ExperimentConfig::new(kind);
        cfg.geometry.eval_radius = r;
        cfg.targets = 2000;
        let rep = run_experiment(&cfg)?;
        println!("{}", rep.summary_line());
        for row in rep.rows.iter().step_by(4) {
            println!("  p={:>2} error {:.3e} bound {:.3e}", row.p, row.max_error, row.bound);
        }
    }
    Ok(())
}
