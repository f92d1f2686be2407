//! Measure the truncation order of the discrete Caputo operator directly:
//! apply it to samples of a smooth function with a known derivative and
//! watch the max defect decay like dx^(3-nu).
//!
//! ```bash
//! cargo run --release --example truncation_slope
//! ```

use caputo::operator::discrete_caputo;
use caputo::special::monomial_caputo;
use caputo::{Grid, Order};

fn main() -> caputo::Result<()> {
    for &nu in &[0.3, 0.5, 0.8] {
        let order = Order::new(nu)?;
        println!(
            "y = x^(3+{nu}): defect of the discrete operator, target order {}",
            3.0 - nu
        );
        let mut prev: Option<f64> = None;
        for l in 4..=8 {
            let steps = 1usize << l;
            let grid = Grid::new(1.0, steps / 2)?;
            let samples: Vec<f64> = (0..=steps).map(|k| grid.x(k).powf(3.0 + nu)).collect();
            let mut worst = 0.0f64;
            for j in 1..=steps {
                let got = discrete_caputo(order, grid, &samples, j)?;
                let want = monomial_caputo(nu, 3.0 + nu, grid.x(j))?;
                worst = worst.max((got - want).abs());
            }
            let order_line = prev
                .map(|p: f64| format!("{:.4}", (p / worst).log2()))
                .unwrap_or_else(|| "-".into());
            println!(
                "  dx = 1/{:>4}: max defect {worst:.4e}  order {order_line}",
                steps
            );
            prev = Some(worst);
        }
        println!();
    }
    Ok(())
}
