//! Interface inequality, addition theorems, contour identity and density properties.

use layerfmm::lab::{run_property_suite, SuiteKind};

fn main() {
    let s = run_property_suite(SuiteKind::All);
    for c in &s.checks {
        println!("{:<45} {:>11.3e}  limit {:>9.1e}  {}", c.name, c.value, c.threshold, if c.pass { "ok" } else { "FAIL" });
    }
    println!("all passed: {}", s.pass);
}
