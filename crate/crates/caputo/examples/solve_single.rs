//! Solve one fractional initial-value problem and compare against its exact
//! solution.
//!
//! ```bash
//! cargo run --example solve_single
//! ```

use caputo::problems::make_problem;
use caputo::solver::{solve, NewtonConfig};
use caputo::{Grid, Order};

fn main() -> caputo::Result<()> {
    let nu = 0.5;
    let order = Order::new(nu)?;
    let problem = make_problem("example2-nonlinear", order)?;
    let grid = Grid::with_step(1.0, 1.0 / 32.0)?;

    let traj = solve(&problem, grid, &NewtonConfig::default())?;

    println!("D^{nu} y = G(x) - y^2 on [0, 1], dx = 1/32, exact y = x^(3+nu)\n");
    println!(
        "{:>8} {:>22} {:>22} {:>12} {:>6}",
        "x", "y", "exact", "error", "iters"
    );
    for k in (0..=grid.steps()).step_by(4) {
        let x = grid.x(k);
        let exact = problem.exact(x).unwrap();
        println!(
            "{:>8.4} {:>22.15} {:>22.15} {:>12.3e} {:>6}",
            x,
            traj.values[k],
            exact,
            (exact - traj.values[k]).abs(),
            traj.newton_iters[k]
        );
    }
    println!(
        "\nmax error over the grid: {:.4e}",
        traj.max_error(&problem).unwrap()
    );
    Ok(())
}
