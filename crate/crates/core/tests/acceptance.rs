//! Runs without the libtest harness so the per-criterion lines always reach
//! the test log, passing or not.

use std::process::ExitCode;

use simlev_core::acceptance::{criteria, run_criterion, SuiteConfig};

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let all = criteria();
    println!("\nrunning {} acceptance criteria", all.len());
    let mut failed = Vec::new();
    for c in &all {
        let out = run_criterion(c, &cfg);
        println!("{}", out.line());
        if !out.pass {
            failed.push(out.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: {} passed; 0 failed\n", all.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}\n");
        ExitCode::FAILURE
    }
}
