//! Run a slice of the identity-verification suite programmatically and
//! inspect the report.
//!
//! ```bash
//! cargo run --release -p sdg-kernel --example verify_report
//! ```

use sdg_kernel::report::{run_suite, SuiteConfig};

fn main() {
    // Everything the suite knows about the sphere-derivative identity in
    // dimension 2, at the default quadrature order.
    let config = SuiteConfig {
        only: Some("a4".to_string()),
        dim: Some(2),
        ..Default::default()
    };
    let report = run_suite(&config);
    println!(
        "{} entries, {} passed, {} failed",
        report.entries.len(),
        report.passed,
        report.failed
    );
    for entry in report.entries.iter().take(4) {
        println!(
            "  {:<22} rel_err {:.2e}  tol {:.0e}  {}",
            entry.id,
            entry.rel_err,
            entry.tolerance,
            if entry.pass { "ok" } else { "FAILED" }
        );
    }

    // The same identities fall over when the quadrature is deliberately
    // under-resolved; the report records the failures.
    let degraded = run_suite(&SuiteConfig {
        quad_order: 2,
        ..config.clone()
    });
    println!(
        "\nwith quad_order = 2: {} of {} entries fail",
        degraded.failed,
        degraded.entries.len()
    );

    // Reports serialize deterministically; this is what `sdg verify`
    // prints.
    let json = report.to_json();
    println!(
        "\nreport head:\n{}",
        &json[..json.find("entries").unwrap() + 8]
    );
}
