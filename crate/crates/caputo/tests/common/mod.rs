//! Shared test-side oracles: adaptive quadrature of the weight-defining
//! integrals, independent of the closed forms under test.

use caputo::weights::Order;

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
            + rec(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// Derivative of the quadratic Lagrange basis on nodes `x_{base}..x_{base+2}`
/// (unit grid spacing).
fn phi_prime(i: usize, base: f64, s: f64) -> f64 {
    let (x0, x1, x2) = (base, base + 1.0, base + 2.0);
    match i {
        0 => (2.0 * s - x1 - x2) / 2.0,
        1 => -(2.0 * s - x0 - x2),
        _ => (2.0 * s - x0 - x1) / 2.0,
    }
}

/// `int_lo^hi phi'_{i,base}(s) (xj - s)^-nu / Gamma(1-nu) ds` on the unit
/// grid, evaluated by quadrature after the substitution
/// `u = (xj - s)^(1-nu)` that absorbs the endpoint singularity.
pub fn a_integral(order: Order, xj: f64, i: usize, base: f64, lo: f64, hi: f64) -> f64 {
    let nu = order.nu();
    let gamma_1m = gamma_oracle(1.0 - nu);
    let p = 1.0 / (1.0 - nu);
    let g = |u: f64| -> f64 {
        let t = u.powf(p); // t = xj - s
        phi_prime(i, base, xj - t) / ((1.0 - nu) * gamma_1m)
    };
    let (ua, ub) = ((xj - hi).powf(1.0 - nu), (xj - lo).powf(1.0 - nu));
    adaptive_simpson(&g, ua, ub, 1e-12)
}

/// Full dimensionless weight row at step `j` from the defining integrals
/// (unit grid): the first-step rows for `j = 1, 2` and the block-partitioned
/// history rows beyond.
#[allow(clippy::needless_range_loop)]
pub fn row_from_integrals(order: Order, j: usize) -> Vec<f64> {
    let xj = j as f64;
    let mut w = vec![0.0; j.max(2) + 1];
    if j <= 2 {
        for (i, slot) in w.iter_mut().enumerate() {
            *slot = a_integral(order, xj, i, 0.0, 0.0, xj);
        }
        return w;
    }
    if j % 2 == 1 {
        // [0, x1] under the (x0, x1, x2) parabola, then two-step blocks
        let m = (j - 1) / 2;
        for i in 0..3 {
            w[i] += a_integral(order, xj, i, 0.0, 0.0, 1.0);
        }
        for k in 1..=m {
            let base = (2 * k - 1) as f64;
            for i in 0..3 {
                w[2 * k - 1 + i] += a_integral(order, xj, i, base, base, base + 2.0);
            }
        }
    } else {
        let m = (j - 2) / 2;
        for k in 0..=m {
            let base = (2 * k) as f64;
            for i in 0..3 {
                w[2 * k + i] += a_integral(order, xj, i, base, base, base + 2.0);
            }
        }
    }
    w
}

/// Gamma by the Stirling series at a shifted argument; an algorithm
/// independent of the crate's Lanczos path, accurate to ~1e-14 relative.
pub fn gamma_oracle(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut shift = 1.0;
    let mut z = x;
    while z < 12.0 {
        shift *= z;
        z += 1.0;
    }
    // Bernoulli tail B_2k / (2k (2k-1) z^(2k-1))
    let zi = 1.0 / z;
    let z2 = zi * zi;
    let series = zi
        * (1.0 / 12.0
            + z2 * (-1.0 / 360.0
                + z2 * (1.0 / 1260.0
                    + z2 * (-1.0 / 1680.0
                        + z2 * (1.0 / 1188.0 + z2 * (-691.0 / 360360.0 + z2 / 156.0))))));
    let half_ln_2pi = 0.9189385332046727;
    let ln_gamma = (z - 0.5) * z.ln() - z + half_ln_2pi + series;
    ln_gamma.exp() / shift
}
