//! Runs one experiment config and prints its CSV report.
//!
//! `cargo run --release --example lab_experiment -- crates/core/examples/configs/reaction_m2l.json`

use layerfmm::lab::{run_experiment, ExperimentConfig};

fn main() -> layerfmm::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/reaction_me.json").to_string());
    let rep = run_experiment(&ExperimentConfig::load(&path)?)?;
    print!("{}", rep.to_csv());
    println!("{}", rep.summary_line());
    Ok(())
}
