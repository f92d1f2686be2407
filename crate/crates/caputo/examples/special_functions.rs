//! Scalar building blocks: gamma, Mittag-Leffler, and exact Caputo
//! derivatives of power functions.
//!
//! ```bash
//! cargo run --example special_functions
//! ```

use caputo::special::{gamma_fn, mittag_leffler, monomial_caputo};

fn main() -> caputo::Result<()> {
    println!("gamma on the working range:");
    for x in [0.5, 1.0, 1.5, 2.5, 4.5] {
        println!("  gamma({x:>4}) = {:.15}", gamma_fn(x)?);
    }

    println!("\nMittag-Leffler E_nu(z), the eigenfunction of the Caputo derivative:");
    for nu in [0.3, 0.5, 0.9, 1.0] {
        let v = mittag_leffler(nu, -1.0)?;
        println!("  E_{nu:<4}(-1) = {v:.12}");
    }
    println!("  (E_1(-1) is exp(-1) = {:.12})", (-1f64).exp());

    println!("\nCaputo derivative of x^sigma at x = 1:");
    for (nu, sigma) in [(0.5, 3.5), (0.5, 0.5), (0.3, 2.0)] {
        let v = monomial_caputo(nu, sigma, 1.0)?;
        println!("  D^{nu} x^{sigma} |_1 = {v:.12}");
    }

    // out-of-domain arguments surface as errors, not NaNs
    match mittag_leffler(0.1, 50.0) {
        Err(e) => println!("\nE_0.1(50) overflows f64 and reports: {e}"),
        Ok(v) => println!("\nunexpected: {v}"),
    }
    Ok(())
}
