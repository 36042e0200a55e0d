//! Runs every acceptance criterion and prints one status line per criterion.
//!
//! Criteria listed in `KNOWN_DEFECTS` are evaluated unchanged and printed as
//! failures, but do not fail this target; every other gating criterion must
//! pass.

use std::process::ExitCode;

use distlab::harness::{VerifyConfig, Verifier, CRITERIA, KNOWN_DEFECTS};

fn main() -> ExitCode {
    let verifier = Verifier::new(VerifyConfig::default());
    let ids: Vec<u32> = CRITERIA.iter().map(|c| c.0).collect();
    println!("acceptance: {} criteria", ids.len());
    let report = verifier.run(&ids, |c| {
        println!("{}", c.line());
        for d in &c.details {
            println!("       {d}");
        }
    });
    let unexpected: Vec<u32> = report
        .criteria
        .iter()
        .filter(|c| c.gating && !c.passed && !KNOWN_DEFECTS.contains(&c.id))
        .map(|c| c.id)
        .collect();
    let defects_now_pass: Vec<u32> =
        report.criteria.iter().filter(|c| KNOWN_DEFECTS.contains(&c.id) && c.passed).map(|c| c.id).collect();
    println!("total {:.1} s", report.total_seconds);
    if !defects_now_pass.is_empty() {
        println!("criteria {defects_now_pass:?} are listed as known defects but now pass; update the list");
    }
    if unexpected.is_empty() && defects_now_pass.is_empty() {
        println!("acceptance: ok");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
