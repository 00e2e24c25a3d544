//! Running the built-in verification suites from code.
//!
//! Run with `cargo run --release --example verify_suites`.

use rcgc_kit::cli::verify::{run_suite, Suite, SuiteOptions};

fn main() {
    let opts = SuiteOptions::default();
    for suite in [
        Suite::WorkedExamples,
        Suite::Unitarity,
        Suite::Hypergeometric,
        Suite::Rcgc,
    ] {
        let report = run_suite(suite, &opts);
        println!("{} ({:.0} ms)", report.suite, report.elapsed_ms);
        for c in &report.checks {
            println!(
                "  {:<4} {:<40} max error {:.2e} (tolerance {:.0e})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_error,
                c.tolerance
            );
        }
    }
}
