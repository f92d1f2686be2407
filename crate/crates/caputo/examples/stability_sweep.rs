//! Unconditional stability: for D^nu y = -lambda y the numerical solution
//! never exceeds (2+nu)/(2-nu) |y0|, regardless of how stiff lambda dx^nu is.
//!
//! ```bash
//! cargo run --release --example stability_sweep
//! ```

use caputo::solver::{solve, NewtonConfig, Problem};
use caputo::verification::stability_bound;
use caputo::{Grid, Order};

fn main() -> caputo::Result<()> {
    let dx = 0.1f64;
    println!("max |y_j| over 200 steps vs the bound (2+nu)/(2-nu), y0 = 1\n");
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>8}",
        "nu", "la*dx^nu", "max|y|", "bound", "ok"
    );
    for i in 1..=9 {
        let nu = i as f64 / 10.0;
        let order = Order::new(nu)?;
        for &target in &[1e-3, 1.0, 1e3] {
            let lambda = target / dx.powf(nu);
            let problem = Problem::new(order, 1.0, move |_, y| -lambda * y)
                .with_jacobian(move |_, _| -lambda);
            let grid = Grid::new(dx * 200.0, 100)?;
            let traj = solve(&problem, grid, &NewtonConfig::default())?;
            let max = traj.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let bound = stability_bound(order);
            println!(
                "{:>6} {:>12.1e} {:>12.6} {:>12.6} {:>8}",
                nu,
                target,
                max,
                bound,
                if max <= bound + 1e-10 { "yes" } else { "NO" }
            );
        }
    }
    Ok(())
}
