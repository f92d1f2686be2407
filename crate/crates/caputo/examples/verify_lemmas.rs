//! Run the full coefficient verification suite in-process (same checks as
//! `caputo verify`) and dump one report as JSON.
//!
//! ```bash
//! cargo run --release --example verify_lemmas
//! ```

use caputo::verification::{run_all, VerificationConfig};

fn main() -> caputo::Result<()> {
    let cfg = VerificationConfig::default();
    let reports = run_all(&cfg)?;
    for rep in &reports {
        println!("{}", rep.summary_line());
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("\n{passed} of {} checks passed", reports.len());

    println!("\nmachine-readable form of the first report:");
    println!("{}", serde_json::to_string_pretty(&reports[0]).unwrap());
    Ok(())
}
