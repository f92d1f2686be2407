//! Define a problem from scratch: a nonlinear right-hand side without an
//! analytic Jacobian (Newton falls back to finite differences), solved and
//! then refined once to estimate the convergence rate.
//!
//! ```bash
//! cargo run --example custom_problem
//! ```

use caputo::solver::{solve, NewtonConfig, Problem};
use caputo::{Grid, Order};

fn main() -> caputo::Result<()> {
    let order = Order::new(0.7)?;
    // D^0.7 y = cos(x) - y^3, y(0) = 1: no closed-form solution
    let problem = Problem::new(order, 1.0, |x: f64, y: f64| x.cos() - y * y * y);

    let cfg = NewtonConfig::default();
    let coarse = solve(&problem, Grid::with_step(2.0, 1.0 / 64.0)?, &cfg)?;
    let fine = solve(&problem, Grid::with_step(2.0, 1.0 / 128.0)?, &cfg)?;
    let finest = solve(&problem, Grid::with_step(2.0, 1.0 / 256.0)?, &cfg)?;

    println!("y(2) on three grids (self-convergence, no exact solution needed):");
    let (a, b, c) = (
        *coarse.values.last().unwrap(),
        *fine.values.last().unwrap(),
        *finest.values.last().unwrap(),
    );
    println!("  dx=1/64 : {a:.12}");
    println!("  dx=1/128: {b:.12}");
    println!("  dx=1/256: {c:.12}");
    let rate = ((a - b) / (b - c)).abs().log2();
    println!(
        "  observed order from differences: {rate:.3} (expect about {})",
        3.0 - 0.7
    );

    let total_iters: u32 = finest.newton_iters.iter().sum();
    println!(
        "\nfinite-difference Newton spent {} iterations over {} steps",
        total_iters,
        finest.grid.steps()
    );
    Ok(())
}
