//! Starting-weight corrections for singular solutions.
//!
//! The eigenproblem solution E_nu(-x^nu) behaves like 1 - x^nu/Gamma(1+nu)
//! near zero, which drags the plain scheme down to order nu. Making the
//! operator exact on x^nu, x^2nu, x^3nu recovers fast convergence.
//!
//! ```bash
//! cargo run --release --example corrected_method
//! ```

use caputo::corrections::starting_weights;
use caputo::problems::make_problem;
use caputo::solver::{solve, solve_corrected, NewtonConfig};
use caputo::{Grid, Order};

fn main() -> caputo::Result<()> {
    let nu = 0.6;
    let order = Order::new(nu)?;
    let problem = make_problem("example3", order)?;
    let sigma: Vec<f64> = (1..=3).map(|k| k as f64 * nu).collect();
    let cfg = NewtonConfig::default();

    println!("eigenproblem D^{nu} y = -y, exact E_{nu}(-x^{nu}), T = 1\n");
    println!(
        "{:>8} {:>14} {:>14} {:>9}",
        "dx", "plain", "corrected", "gain"
    );
    for l in 3..=8 {
        let grid = Grid::with_step(1.0, 0.5f64.powi(l))?;
        let plain = solve(&problem, grid, &cfg)?.max_error(&problem).unwrap();
        let corr = solve_corrected(&problem, grid, &cfg, &sigma)?
            .max_error(&problem)
            .unwrap();
        println!(
            "{:>8} {:>14.4e} {:>14.4e} {:>8.0}x",
            format!("1/{}", 1 << l),
            plain,
            corr,
            plain / corr
        );
    }

    // the weights themselves are small numbers attached to the first steps
    let grid = Grid::with_step(1.0, 1.0 / 16.0)?;
    let w = starting_weights(order, grid, &sigma)?;
    println!("\nstarting weights W[n][j] for the first few steps:");
    for n in 1..=4 {
        let row: Vec<String> = w.row(n).iter().map(|v| format!("{v:>12.4e}")).collect();
        println!("  n={n}: {}", row.join(" "));
    }
    Ok(())
}
