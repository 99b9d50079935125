//! Acceptance criteria 1 to 15, one PASS/FAIL line each. Runs without the
//! libtest harness so every line reaches the output even when a check fails.

use std::process::ExitCode;

use surface_beta::verify::{run_all, Probes};

fn main() -> ExitCode {
    let report = run_all(&Probes::default());
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} [{:.1}s] {}: {}", c.id, c.seconds, c.title, c.detail);
    }
    if let Some(v) = &report.verdicts.residue_normalisation {
        println!("verdict (residue at -4): {v}");
    }
    if let Some(v) = &report.verdicts.sphere_power {
        println!("verdict (sphere power of two): {v}");
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!("acceptance: {} passed, {failed} failed", report.checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
