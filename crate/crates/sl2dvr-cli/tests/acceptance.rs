//! Acceptance suite: evaluates criteria 1 to 10 exactly and prints one
//! PASS/FAIL line per criterion.
//!
//! Criterion 3 asserts that the X² coefficient of the zeta polynomial is the
//! same at levels 2 and 3 for both ring families. It holds for 𝔽₂[t]/t^r but
//! not for ℤ/2^r: SL₂(ℤ/8) has six degree-2 characters against two for
//! SL₂(ℤ/4), confirmed by an independent regular-representation computation.
//! That outcome is recorded in `EXPECTED_FAILURES`; any other failure, or
//! criterion 3 starting to pass, fails this test.

use std::process::ExitCode;
use std::time::Instant;

use sl2dvr_cli::suites::{run_criterion, summarize, SuiteConfig};

/// (criterion, assertion name) pairs known to fail, with the reason above.
const EXPECTED_FAILURES: &[(u8, &str)] = &[(3, "X^2 coefficient 2adic")];

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut unexpected = Vec::new();
    for c in 1..=10u8 {
        let start = Instant::now();
        let assertions = match run_criterion(c, &cfg) {
            Ok(a) => a,
            Err(e) => {
                println!("FAIL criterion {c}: error {e:#}");
                unexpected.push(format!("criterion {c} errored"));
                continue;
            }
        };
        let outcome = &summarize(&assertions)[0];
        let secs = start.elapsed().as_secs_f64();
        println!("{} criterion {c}: {} ({} assertions, {} failing, {secs:.1}s)", if outcome.passed { "PASS" } else { "FAIL" }, outcome.title, outcome.assertions, outcome.failures);
        for a in &assertions {
            let expected_fail = EXPECTED_FAILURES.contains(&(a.criterion, a.name.as_str()));
            if !a.passed {
                println!("    failing: {}: {}", a.name, a.detail);
            }
            if a.passed == expected_fail {
                unexpected.push(format!("criterion {c} assertion '{}' passed = {}", a.name, a.passed));
            }
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: outcomes as recorded");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcomes {unexpected:?}");
        ExitCode::FAILURE
    }
}
