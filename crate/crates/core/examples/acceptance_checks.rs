//! Run a few of the built-in acceptance checks programmatically.

use surface_beta::verify::{run_checks, Probes};

fn main() {
    let report = run_checks(&[2, 5, 7, 11, 13, 15], &Probes::default());
    for c in &report.checks {
        println!("{:>2} {} {:<45} {}", c.id, if c.passed { "PASS" } else { "FAIL" }, c.title, c.detail);
    }
    for v in report.verdicts.residue_normalisation.iter().chain(&report.verdicts.sphere_power) {
        println!("verdict: {v}");
    }
    println!("all passed: {}", report.all_passed());
}
