//! The analysis kernels behind the convergence proof: the transformed rows
//! are positive and sub-stochastic, the Bbar kernel decreases, and the
//! complementary kernel P inverts it exactly.
//!
//! ```bash
//! cargo run --example kernel_identity
//! ```

use caputo::analysis::{bbar_kernel, nu_zero, p_kernel, transformed_row};
use caputo::Order;

fn main() -> caputo::Result<()> {
    let nu = 0.5;
    let order = Order::new(nu)?;

    let tr = transformed_row(order, 10)?;
    println!("transformed row dbar_k^10 (all positive below the diagonal):");
    println!(
        "  {:?}",
        tr.dbar
            .iter()
            .map(|v| (v * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );
    let sum: f64 = tr.dbar[..9].iter().sum();
    println!("  theta + sum = {:.6} < 1\n", 2.0 * nu / (2.0 + nu) + sum);

    let n = 8;
    let b = bbar_kernel(order, 1.0, n)?;
    println!(
        "Bbar_k^{n} decreasing positive: {:?}\n",
        b.bbar
            .iter()
            .map(|v| (v * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );

    let p = p_kernel(order, 1.0, n)?;
    println!(
        "complementary kernel P_j^{n}: {:?}",
        p.p.iter()
            .map(|v| (v * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );
    println!("convolution identity sum_(j=m..n) P_(n-j) Bbar_(j-m)^j:");
    for m in 3..=n {
        let mut acc = 0.0;
        for j in m..=n {
            acc += p.p[n - j] * bbar_kernel(order, 1.0, j)?.bbar[j - m];
        }
        println!("  m={m}: {acc:.15}");
    }

    println!(
        "\nsign-change order for the d_(j-2) entry: nu0 = {:.12}",
        nu_zero()
    );
    Ok(())
}
