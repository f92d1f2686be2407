//! Reproduce a convergence table: max errors and observed orders over a
//! dyadic step-size ladder, printed in the usual side-by-side layout.
//!
//! ```bash
//! cargo run --release --example convergence_table
//! ```

use caputo::study::{emit_combined_markdown, run_study, OutputFormat, StudySpec};

fn main() -> caputo::Result<()> {
    let spec = StudySpec {
        problem: "example1".into(),
        nu: vec![0.3, 0.5, 0.8, 0.99],
        levels: (3..=8).collect(),
        t: 1.0,
        corrected: false,
        sigma_rule: None,
        format: OutputFormat::Markdown,
        out: None,
    };
    let reports = run_study(&spec)?;
    println!("{}", emit_combined_markdown(&reports));
    println!("expected asymptotic order per column: 3 - nu");
    Ok(())
}
