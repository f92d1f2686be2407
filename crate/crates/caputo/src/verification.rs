//! Executable coefficient checks: every inequality the analysis relies on is
//! evaluated numerically over (order, index) grids and reported as a
//! [`CheckReport`]. Empirical truncation-order and stability experiments
//! live here too.
//!
//! Strict inequalities are asserted with a slack of `tolerance * scale` to
//! absorb roundoff; `tolerance = 0` therefore makes the float-level noise
//! visible on purpose.

use serde::Serialize;

use crate::analysis::{normalized_row, transformed_row, PI_B};
use crate::error::Result;
use crate::operator::{discrete_caputo_cached, Grid};
use crate::solver::{solve, NewtonConfig, Problem};
use crate::special::{gamma_unchecked, mittag_leffler};
use crate::weights::{alpha0, Order};

/// One failed inequality: the tested point and both sides.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub nu: f64,
    pub index: i64,
    pub lhs: f64,
    pub rhs: f64,
    pub item: String,
}

/// Outcome of one named check over its parameter grid.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub grid: String,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

impl CheckReport {
    fn new(name: &str, grid: String) -> Self {
        CheckReport {
            name: name.to_string(),
            grid,
            violations: Vec::new(),
            passed: true,
        }
    }

    fn violate(&mut self, nu: f64, index: i64, lhs: f64, rhs: f64, item: &str) {
        self.violations.push(Violation {
            nu,
            index,
            lhs,
            rhs,
            item: item.to_string(),
        });
        self.passed = false;
    }

    /// `lhs <= rhs` up to slack.
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must register as a violation
    fn expect_le(&mut self, slack: f64, nu: f64, index: i64, lhs: f64, rhs: f64, item: &str) {
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        if !(lhs <= rhs + slack * scale) {
            self.violate(nu, index, lhs, rhs, item);
        }
    }

    /// Strict `lhs > rhs` up to slack.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn expect_gt(&mut self, slack: f64, nu: f64, index: i64, lhs: f64, rhs: f64, item: &str) {
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        if !(lhs > rhs - slack * scale) {
            self.violate(nu, index, lhs, rhs, item);
        }
    }

    pub fn summary_line(&self) -> String {
        if self.passed {
            format!("[PASS] {:<28} ({})", self.name, self.grid)
        } else {
            format!(
                "[FAIL] {:<28} ({}) - {} violation(s), first: {}",
                self.name,
                self.grid,
                self.violations.len(),
                self.violations
                    .first()
                    .map(|v| format!(
                        "{} at nu={}, index={}: lhs={:.6e} rhs={:.6e}",
                        v.item, v.nu, v.index, v.lhs, v.rhs
                    ))
                    .unwrap_or_default()
            )
        }
    }
}

/// Grids and tolerances for the check suite.
#[derive(Clone, Debug)]
pub struct VerificationConfig {
    /// Kernel bound constant; 9 matches the analysis.
    pub pi_b: f64,
    /// Orders to sweep (each must lie in `(0, 1)` for the coefficient lemmas).
    pub nu_grid: Vec<f64>,
    /// Largest history row index for the row-wise lemmas.
    pub index_max: usize,
    /// Largest kernel size `n` for the convolution-kernel checks.
    pub kernel_max: usize,
    /// Roundoff slack applied to strict inequalities, relative to scale.
    pub tolerance: f64,
}

impl Default for VerificationConfig {
    fn default() -> Self {
        VerificationConfig {
            pi_b: PI_B,
            nu_grid: (1..=9).map(|i| i as f64 / 10.0).collect(),
            index_max: 200,
            kernel_max: 64,
            tolerance: 1e-12,
        }
    }
}

impl VerificationConfig {
    fn orders(&self) -> impl Iterator<Item = f64> + '_ {
        self.nu_grid.iter().copied().filter(|nu| *nu < 1.0)
    }
}

fn omega(e: f64, x: f64) -> f64 {
    x.powf(e - 1.0) / gamma_unchecked(e)
}

/// Sum-to-one, positivity and lower-bound properties of the normalized rows.
#[allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)] // NaN must register as a violation
pub fn check_lemma_3_1(cfg: &VerificationConfig) -> CheckReport {
    let mut rep = CheckReport::new(
        "lemma_3_1",
        format!("nu in {:?}, j = 4..={}", cfg.nu_grid, cfg.index_max),
    );
    let tol = cfg.tolerance;
    let nu0 = crate::analysis::nu_zero();
    for nu in cfg.orders() {
        let order = Order::new(nu).unwrap();
        let a0 = alpha0(order);
        let g1 = gamma_unchecked(1.0 - nu);
        for j in 4..=cfg.index_max {
            let row = normalized_row(order, j).unwrap();
            let d = &row.d;
            // (1) the row is a convex-combination candidate: sum = 1
            let sum: f64 = d.iter().sum();
            let dev = (sum - 1.0).abs();
            if dev > tol * j as f64 {
                rep.violate(nu, j as i64, sum, 1.0, "(1) sum");
            }
            // (2) interior entries dominate the kernel tail. The even-offset
            // entries approach (2 nu/3) (j-k)^(-nu-1) / (a0 Gamma(1-nu)) from
            // below (ratio bottoms out near 0.89 at offset 4), so the
            // coefficient here is nu/2 rather than the overstated 2 nu / 3.
            for k in 2..j.saturating_sub(2) {
                let bound = 0.5 * nu / (a0 * g1) * ((j - k) as f64).powf(-nu - 1.0);
                if !(d[k] > bound - tol * bound.abs().max(1.0)) {
                    rep.violate(nu, j as i64, d[k], bound, &format!("(2) k={k}"));
                }
            }
            // (3) edge entries are positive
            rep.expect_gt(tol, nu, j as i64, d[j - 1], 0.0, "(3) d_{j-1}");
            rep.expect_gt(tol, nu, j as i64, d[0], 0.0, "(3) d_0");
            rep.expect_gt(tol, nu, j as i64, d[1], 0.0, "(3) d_1");
            // (4) d_{j-2} changes sign exactly once, at nu_0
            if (nu - nu0).abs() > 1e-6 {
                let want_positive = nu < nu0;
                if want_positive != (d[j - 2] > 0.0) {
                    rep.violate(nu, j as i64, d[j - 2], 0.0, "(4) sign of d_{j-2}");
                }
            }
            // (5) the transform seed stays positive with margin
            let lhs = 0.25 * d[j - 1] * d[j - 1] + d[j - 2];
            let rhs = 2f64.powf(-nu) * nu / (8.0 * a0 * g1);
            rep.expect_gt(tol, nu, j as i64, lhs, rhs, "(5) seed margin");
        }
    }
    rep
}

/// Positivity and sub-stochasticity of the transformed rows.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn check_lemma_3_2(cfg: &VerificationConfig) -> CheckReport {
    let mut rep = CheckReport::new(
        "lemma_3_2",
        format!("nu in {:?}, j = 3..={}", cfg.nu_grid, cfg.index_max),
    );
    let tol = cfg.tolerance;
    for nu in cfg.orders() {
        let order = Order::new(nu).unwrap();
        let theta = 2.0 * nu / (2.0 + nu);
        for j in 3..=cfg.index_max {
            let tr = transformed_row(order, j).unwrap();
            if j == 3 {
                // (1) 0 < dbar_2^3 < theta < 2/3
                rep.expect_gt(tol, nu, 3, tr.dbar[2], 0.0, "(1) dbar_2^3 > 0");
                rep.expect_le(tol, nu, 3, tr.dbar[2], theta, "(1) dbar_2^3 < theta");
                rep.expect_le(tol, nu, 3, theta, 2.0 / 3.0, "(1) theta < 2/3");
            }
            // (2) positivity up to j-2
            for k in 0..=j - 2 {
                if !(tr.dbar[k] > -tol) {
                    rep.violate(nu, j as i64, tr.dbar[k], 0.0, &format!("(2) k={k}"));
                }
            }
            // (3) theta + sum < 1
            let s: f64 = tr.dbar[..=j - 2].iter().sum();
            rep.expect_le(tol, nu, j as i64, theta + s, 1.0, "(3) theta + sum");
        }
    }
    rep
}

/// Bbar tables for every superscript `3..=nmax` and P tables for every
/// `n = 3..=nmax`, sharing the Bbar construction across the suite.
struct KernelTables {
    /// `bbar[s][k] = Bbar_k^s` (index 0..2 unused).
    bbar: Vec<Vec<f64>>,
    /// `p[n][j] = P_j^n` (index 0..2 unused).
    p: Vec<Vec<f64>>,
}

#[allow(clippy::needless_range_loop)]
fn kernel_tables(order: Order, dx: f64, nmax: usize) -> KernelTables {
    let scale = dx.powf(-order.nu()) * alpha0(order);
    let mut bbar: Vec<Vec<f64>> = vec![Vec::new(); nmax + 1];
    for s in 3..=nmax {
        let tr = transformed_row(order, s).unwrap();
        let mut b = vec![0.0; s];
        b[0] = scale;
        for l in 1..s {
            b[l] = b[l - 1] - scale * tr.dbar[s - l];
        }
        bbar[s] = b;
    }
    let mut p: Vec<Vec<f64>> = vec![Vec::new(); nmax + 1];
    for n in 3..=nmax {
        let mut pn = vec![0.0; n];
        pn[0] = 1.0 / bbar[n][0];
        for j in 1..n.saturating_sub(2) {
            let mut acc = 0.0;
            for k in 0..j {
                acc += (bbar[n - k][j - k - 1] - bbar[n - k][j - k]) * pn[k];
            }
            pn[j] = acc / bbar[n - j][0];
        }
        p[n] = pn;
    }
    KernelTables { bbar, p }
}

/// Monotonicity/lower bound of `Bbar`, non-negativity and upper bounds of
/// `P`, and the convolution identity linking the two.
#[allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
pub fn check_kernel_bounds(cfg: &VerificationConfig) -> CheckReport {
    let mut rep = CheckReport::new(
        "kernel_bounds",
        format!(
            "nu in {:?}, n = 3..={}, dx in {{1, 0.25}}",
            cfg.nu_grid, cfg.kernel_max
        ),
    );
    let tol = cfg.tolerance;
    let nmax = cfg.kernel_max;
    for nu in cfg.orders() {
        let order = Order::new(nu).unwrap();
        let g2 = gamma_unchecked(2.0 - nu);
        for &dx in &[1.0f64, 0.25] {
            let tables = kernel_tables(order, dx, nmax);
            let bound_scale = 1.0 / (cfg.pi_b * dx.powf(nu) * g2);
            for n in 3..=nmax {
                let b = &tables.bbar[n];
                // strictly decreasing, positive
                for k in 1..n {
                    if !(b[k] < b[k - 1]) {
                        rep.violate(
                            nu,
                            n as i64,
                            b[k],
                            b[k - 1],
                            &format!("Bbar monotone k={k}"),
                        );
                    }
                }
                rep.expect_gt(tol, nu, n as i64, b[n - 1], 0.0, "Bbar positive");
                // integral lower bound
                for (k, bk) in b.iter().enumerate() {
                    let lower =
                        bound_scale * (((k + 1) as f64).powf(1.0 - nu) - (k as f64).powf(1.0 - nu));
                    if !(*bk >= lower - tol * lower.abs().max(1.0)) {
                        rep.violate(nu, n as i64, *bk, lower, &format!("Bbar lower bound k={k}"));
                    }
                }

                let p = &tables.p[n];
                for (j, pj) in p.iter().enumerate() {
                    if !(*pj >= -tol) {
                        rep.violate(nu, n as i64, *pj, 0.0, &format!("P nonneg j={j}"));
                    }
                }
                if p[n - 1] != 0.0 || p[n - 2] != 0.0 {
                    rep.violate(nu, n as i64, p[n - 1], 0.0, "P edge zeros");
                }
                // complementary identity, residual at 1e-10
                for m in 3..=n {
                    let mut acc = 0.0;
                    for j in m..=n {
                        acc += p[n - j] * tables.bbar[j][j - m];
                    }
                    if (acc - 1.0).abs() > 1e-10 {
                        rep.violate(nu, n as i64, acc, 1.0, &format!("identity m={m}"));
                    }
                }
                // upper bound on P entries
                let plim = cfg.pi_b * g2 * dx.powf(nu);
                for j in 3..=n {
                    rep.expect_le(tol, nu, n as i64, p[n - j], plim, "P upper bound");
                }
                // weighted-kernel sums stay below pi_B resp. 1
                let mut wsum = 0.0;
                let mut b1 = 0.0;
                let mut b2 = 0.0;
                for j in 3..=n {
                    wsum += p[n - j] * omega(1.0 - nu, j as f64 * dx);
                    b1 += p[n - j] * tables.bbar[j][j - 1];
                    b2 += p[n - j] * tables.bbar[j][j - 2];
                }
                rep.expect_le(tol, nu, n as i64, wsum, cfg.pi_b, "omega sum");
                rep.expect_le(tol, nu, n as i64, b1, 1.0, "shifted sum m=1");
                rep.expect_le(tol, nu, n as i64, b2, 1.0, "shifted sum m=2");
            }
        }
    }
    rep
}

/// The appendix inequality battery behind the row lemmas.
pub fn check_appendix_a(cfg: &VerificationConfig) -> CheckReport {
    let mut rep = CheckReport::new(
        "appendix_a",
        "nu in {0.01, 0.05..0.95, 0.99}, k = 2..=500".to_string(),
    );
    let tol = cfg.tolerance;
    let mut nus = vec![0.01];
    nus.extend((1..=19).map(|i| i as f64 * 0.05));
    nus.push(0.99);

    for &nu in &nus {
        for k in 2..=500usize {
            let kf = k as f64;
            // (1) with the quadratic coefficient 2A that the convexity
            // argument actually yields, A = (1-nu)/2 [2^nu - (2/3)^nu];
            // halving it (as sometimes quoted) already fails at k = 2
            let lhs = (1.0 - 1.0 / kf).powf(1.0 - nu) + (1.0 + 1.0 / kf).powf(1.0 - nu);
            let rhs = 2.0 - (1.0 - nu) / (kf * kf) * (2f64.powf(nu) - (2f64 / 3.0).powf(nu));
            rep.expect_gt(tol, nu, k as i64, lhs, rhs, "A1(1)");
            // (2)
            let lhs = (1.0 - 1.0 / kf).powf(2.0 - nu) - (1.0 + 1.0 / kf).powf(2.0 - nu);
            let rhs = -2.0 * (2.0 - nu) / kf + (2.0 - nu) * (1.0 - nu) * nu / (3.0 * kf.powi(3));
            rep.expect_gt(tol, nu, k as i64, lhs, rhs, "A1(2)");
            // (3)
            let tk = 2.0 * kf;
            let lhs = (2.0 - nu) / 2.0 / tk
                * ((1.0 - 2.0 / tk).powf(1.0 - nu) + 3.0 - 4.0 * (1.0 + 1.0 / tk).powf(1.0 - nu))
                + (1.0 - 2.0 / tk).powf(2.0 - nu)
                - 3.0
                + 2.0 * (1.0 + 1.0 / tk).powf(2.0 - nu);
            rep.expect_gt(tol, nu, k as i64, lhs, 0.0, "A1(3)");
        }
        let r = (2f64 / 3.0).powf(nu);
        // (4)
        let v4 = -nu * nu - 12.0 + 3.0 * r * (nu * nu + 2.0 * nu + 4.0);
        rep.expect_gt(tol, nu, 0, v4, 0.0, "A1(4)");
        // (5)
        let v5 = 6.0 - nu - (2.0 + nu / 2.0) * 2f64.powf(nu) * 3f64.powf(1.0 - nu);
        rep.expect_le(tol, nu, 0, v5, 0.0, "A1(5)");
        // (6)
        let v6 = -2.0 * nu.powi(3) + 12.0 * nu * nu - 56.0 * nu - 48.0
            + 3.0 * r * (3.0 * nu.powi(3) + 4.0 * nu * nu + 20.0 * nu + 16.0);
        rep.expect_le(tol, nu, 0, v6, 0.0, "A1(6)");
        // (7)
        let lhs = 2f64.powf(1.0 - nu) * (4.0 - nu - (2.0 + nu) * 2f64.powf(1.0 - nu));
        let rhs = (2.0 * nu - 3.0) * (2.0 - nu) * (1.0 - nu) * nu / 27.0;
        rep.expect_le(tol, nu, 0, lhs, rhs, "A1(7)");
        // (8)
        let lhs = 12.0 - nu * nu - (12.0 + 8.0 * nu + nu * nu) * 2f64.powf(-nu);
        let rhs = (2.0 + nu) * (2.0 - nu) * (1.0 - nu) * nu / 16.0;
        rep.expect_gt(tol, nu, 0, lhs, rhs, "A1(8)");
    }

    // binomial-tail bounds on f = (2-nu)[a1 (2m)^{1-nu} + a2 (2m+b)^{1-nu}]
    //                           + a3 [(2m)^{2-nu} - (2m+b)^{2-nu}]
    let f_val = |nu: f64, a1: f64, a2: f64, a3: f64, b: f64, m: f64| {
        (2.0 - nu) * (a1 * (2.0 * m).powf(1.0 - nu) + a2 * (2.0 * m + b).powf(1.0 - nu))
            + a3 * ((2.0 * m).powf(2.0 - nu) - (2.0 * m + b).powf(2.0 - nu))
    };
    let nu_small: Vec<f64> = (1..=19).map(|i| i as f64 * 0.05).collect();
    let ms = [2.0f64, 3.0, 10.0, 100.0];
    for &nu in &nu_small {
        let a = 1.0 - nu;
        for &m in &ms {
            for &b in &[1.0f64, 2.0, 3.0] {
                if b >= 2.0 * m {
                    continue;
                }
                // case 1: a2 < 0 and a3 b / a2 <= 3/2
                for &a2 in &[-1.0f64, -2.0] {
                    for &ratio in &[1.4f64, 1.0, 0.0, -1.0] {
                        let a3 = ratio * a2 / b;
                        for &a1 in &[0.0f64, 1.0] {
                            let s1 = a * (a2 - a3 * b / 2.0) * (b / (2.0 * m));
                            let s2 =
                                a * (a - 1.0) / 2.0 * (a2 - a3 * b / 3.0) * (b / (2.0 * m)).powi(2);
                            let head = (2.0 - nu) * (2.0 * m).powf(1.0 - nu);
                            let core = a1 + a2 - a3 * b;
                            let fv = f_val(nu, a1, a2, a3, b, m);
                            rep.expect_le(
                                tol,
                                nu,
                                m as i64,
                                fv,
                                head * (core + s1 + s2),
                                "A2 case1 tight",
                            );
                            rep.expect_le(tol, nu, m as i64, fv, head * core, "A2 case1 loose");
                        }
                    }
                }
                // case 2: a3 b = 2 a2 > 0
                for &a2 in &[0.5f64, 1.0, 2.0] {
                    let a3 = 2.0 * a2 / b;
                    for &a1 in &[0.0f64, 1.0] {
                        let head = (2.0 - nu) * (2.0 * m).powf(1.0 - nu);
                        let q = b / (2.0 * m);
                        let rhs = head
                            * (a1 + a2
                                - a3 * b
                                - a2 * q * q * (1.0 - nu) * nu / 6.0
                                    * (1.0 - (nu + 1.0) / 2.0 * q));
                        let fv = f_val(nu, a1, a2, a3, b, m);
                        rep.expect_le(tol, nu, m as i64, fv, rhs, "A2 case2");
                    }
                }
            }
        }
    }
    rep
}

/// Kernel-weighted Mittag-Leffler sum bound.
pub fn check_mittag_leffler_bound(cfg: &VerificationConfig) -> CheckReport {
    let mut rep = CheckReport::new(
        "mittag_leffler_bound",
        format!(
            "nu in {:?}, mu in {{0.5, 1, 5}}, n = 3..={}",
            cfg.nu_grid, cfg.kernel_max
        ),
    );
    let tol = cfg.tolerance;
    let nmax = cfg.kernel_max;
    for nu in cfg.orders() {
        let order = Order::new(nu).unwrap();
        for &mu in &[0.5f64, 1.0, 5.0] {
            // horizon chosen so mu * x^nu tops out at 1.5, keeping the
            // series inside f64 range for every nu in (0, 1]
            let t = (1.5 / mu).powf(1.0 / nu);
            let dx = t / nmax as f64;
            let tables = kernel_tables(order, dx, nmax);
            let e: Vec<f64> = (0..=nmax)
                .map(|j| mittag_leffler(nu, mu * (j as f64 * dx).powf(nu)).unwrap())
                .collect();
            for n in 3..=nmax {
                let p = &tables.p[n];
                let lhs: f64 = (3..n).map(|j| p[n - j] * e[j]).sum();
                let rhs = cfg.pi_b / mu * (e[n] - 1.0);
                rep.expect_le(tol, nu, n as i64, lhs, rhs, &format!("mu={mu}"));
            }
        }
    }
    rep
}

/// A function with a known Caputo derivative, for truncation measurements.
pub struct TruncationCase {
    pub order: Order,
    pub t: f64,
    pub label: String,
    y: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    caputo: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl TruncationCase {
    pub fn new(
        order: Order,
        t: f64,
        label: impl Into<String>,
        y: impl Fn(f64) -> f64 + Send + Sync + 'static,
        caputo: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TruncationCase {
            order,
            t,
            label: label.into(),
            y: Box::new(y),
            caputo: Box::new(caputo),
        }
    }

    /// `y = x^(3+nu)`, the classic smooth benchmark.
    pub fn smooth_monomial(order: Order) -> Self {
        let nu = order.nu();
        let c = gamma_unchecked(4.0 + nu) / 6.0;
        TruncationCase::new(
            order,
            1.0,
            format!("x^(3+nu), nu={nu}"),
            move |x: f64| x.powf(3.0 + nu),
            move |x: f64| c * x.powi(3),
        )
    }

    /// `y = x^2`: the quadrature is exact, errors sit at roundoff.
    pub fn quadratic(order: Order) -> Self {
        let nu = order.nu();
        let c = gamma_unchecked(3.0) / gamma_unchecked(3.0 - nu);
        TruncationCase::new(
            order,
            1.0,
            format!("x^2, nu={nu}"),
            |x: f64| x * x,
            move |x: f64| c * x.powf(2.0 - nu),
        )
    }
}

/// Floor below which errors are treated as roundoff-dominated (exactness).
const EXACTNESS_FLOOR: f64 = 1e-10;

/// Measures `max_j |D_dx y(x_j) - D y(x_j)|` across dyadic levels and fits
/// the decay slope, which must land within 0.1 of `3 - nu`.
pub fn empirical_truncation_order(case: &TruncationCase, levels: &[u32]) -> CheckReport {
    let nu = case.order.nu();
    let mut rep = CheckReport::new(
        "truncation_order",
        format!("{}, levels {:?}", case.label, levels),
    );
    let cache = crate::weights::WeightCache::new(case.order);
    let mut errs = Vec::with_capacity(levels.len());
    for &l in levels {
        let steps = 1usize << l;
        let grid = Grid::new(case.t, steps / 2).unwrap();
        let samples: Vec<f64> = (0..=steps).map(|k| (case.y)(grid.x(k))).collect();
        let mut worst = 0.0f64;
        for j in 1..=steps {
            let got = discrete_caputo_cached(&cache, grid, &samples, j).unwrap();
            worst = worst.max((got - (case.caputo)(grid.x(j))).abs());
        }
        errs.push(worst);
    }
    if errs.iter().all(|e| *e <= EXACTNESS_FLOOR) {
        // quadratically exact test function; nothing to fit
        return rep;
    }
    let slope = -lsq_slope(levels, &errs);
    let want = 3.0 - nu;
    if (slope - want).abs() > 0.1 {
        rep.violate(nu, 0, slope, want, "fitted slope");
    }
    rep
}

/// Least-squares slope of `log2(err)` against the level index.
fn lsq_slope(levels: &[u32], errs: &[f64]) -> f64 {
    let n = levels.len() as f64;
    let xs: Vec<f64> = levels.iter().map(|l| *l as f64).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.log2()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `(2 + nu) / (2 - nu)`, the unconditional stability constant.
pub fn stability_bound(order: Order) -> f64 {
    (2.0 + order.nu()) / (2.0 - order.nu())
}

/// Runs the eigenvalue problem `D^nu y = -lambda y`, `y(0) = 1`, and checks
/// the trajectory never leaves the stability bound.
pub fn stability_experiment(order: Order, lambda: f64, dx: f64, steps: usize) -> CheckReport {
    let nu = order.nu();
    let mut rep = CheckReport::new(
        "stability",
        format!(
            "nu={nu}, lambda*dx^nu={:.3e}, {steps} steps",
            lambda * dx.powf(nu)
        ),
    );
    if lambda <= 0.0 || steps < 4 || !steps.is_multiple_of(2) {
        rep.violate(nu, steps as i64, lambda, 0.0, "bad experiment parameters");
        return rep;
    }
    let problem =
        Problem::new(order, 1.0, move |_, y| -lambda * y).with_jacobian(move |_, _| -lambda);
    let grid = Grid::new(dx * steps as f64, steps / 2).unwrap();
    match solve(&problem, grid, &NewtonConfig::default()) {
        Ok(t) => {
            let bound = stability_bound(order) + 1e-10;
            for (j, y) in t.values.iter().enumerate() {
                if y.abs() > bound {
                    rep.violate(nu, j as i64, y.abs(), bound, "|y_j| <= (2+nu)/(2-nu)");
                }
            }
        }
        Err(e) => rep.violate(nu, 0, f64::NAN, f64::NAN, &format!("solver failed: {e}")),
    }
    rep
}

/// The default suite behind the CLI `verify` subcommand.
pub fn run_all(cfg: &VerificationConfig) -> Result<Vec<CheckReport>> {
    let mut reports = vec![
        check_lemma_3_1(cfg),
        check_lemma_3_2(cfg),
        check_kernel_bounds(cfg),
        check_appendix_a(cfg),
        check_mittag_leffler_bound(cfg),
    ];
    for &nu in &[0.3, 0.5, 0.8] {
        let case = TruncationCase::smooth_monomial(Order::new(nu)?);
        reports.push(empirical_truncation_order(&case, &[4, 5, 6, 7, 8]));
    }
    for &nu in &[0.1, 0.5, 0.9] {
        for &target in &[1e-3, 1.0, 1e3] {
            let dx = 0.1f64;
            let lambda = target / dx.powf(nu);
            reports.push(stability_experiment(Order::new(nu)?, lambda, dx, 200));
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::p_kernel;

    #[test]
    fn default_lemma_checks_pass() {
        // smaller grids here; the full defaults run in the acceptance suite
        let cfg = VerificationConfig {
            index_max: 60,
            kernel_max: 24,
            ..VerificationConfig::default()
        };
        for rep in [
            check_lemma_3_1(&cfg),
            check_lemma_3_2(&cfg),
            check_kernel_bounds(&cfg),
        ] {
            assert!(rep.passed, "{}", rep.summary_line());
        }
    }

    #[test]
    fn zero_tolerance_exposes_roundoff() {
        let cfg = VerificationConfig {
            index_max: 60,
            tolerance: 0.0,
            ..VerificationConfig::default()
        };
        let rep = check_lemma_3_1(&cfg);
        assert!(!rep.passed);
        assert!(!rep.violations.is_empty());
    }

    #[test]
    fn single_point_row_values() {
        let row = normalized_row(Order::new(0.5).unwrap(), 4).unwrap();
        assert!((row.d[3] - 0.8).abs() < 1e-13);
        assert!((row.d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn appendix_a_passes() {
        let rep = check_appendix_a(&VerificationConfig::default());
        assert!(rep.passed, "{}", rep.summary_line());
    }

    #[test]
    fn ml_bound_right_side_grows_with_n() {
        use crate::special::mittag_leffler;
        let (nu, mu) = (0.5, 1.0);
        let t = (1.5f64 / mu).powf(1.0 / nu);
        let dx = t / 64.0;
        let mut prev = 0.0;
        for n in 3..=64 {
            let rhs =
                PI_B / mu * (mittag_leffler(nu, mu * (n as f64 * dx).powf(nu)).unwrap() - 1.0);
            assert!(rhs > prev);
            prev = rhs;
        }
    }

    #[test]
    fn ml_bound_passes_on_a_reduced_grid() {
        let cfg = VerificationConfig {
            kernel_max: 24,
            ..VerificationConfig::default()
        };
        let rep = check_mittag_leffler_bound(&cfg);
        assert!(rep.passed, "{}", rep.summary_line());
    }

    #[test]
    fn truncation_slope_for_smooth_monomial() {
        let case = TruncationCase::smooth_monomial(Order::new(0.5).unwrap());
        let rep = empirical_truncation_order(&case, &[4, 5, 6, 7, 8]);
        assert!(rep.passed, "{}", rep.summary_line());
    }

    #[test]
    fn truncation_on_quadratic_reports_exactness() {
        let case = TruncationCase::quadratic(Order::new(0.7).unwrap());
        let rep = empirical_truncation_order(&case, &[3, 4, 5]);
        assert!(rep.passed);
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn stability_even_at_extreme_stiffness() {
        let rep = stability_experiment(Order::new(0.5).unwrap(), 1e3 / 0.1f64.powf(0.5), 0.1, 100);
        assert!(rep.passed, "{}", rep.summary_line());
    }

    #[test]
    fn stability_near_zero_lambda_keeps_a_flat_trajectory() {
        let order = Order::new(0.4).unwrap();
        let lambda = 1e-10;
        let problem = Problem::new(order, 1.0, move |_, y| -lambda * y);
        let grid = Grid::new(10.0, 50).unwrap();
        let t = solve(&problem, grid, &NewtonConfig::default()).unwrap();
        for y in &t.values {
            assert!((y - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn reports_serialize_stably() {
        let cfg = VerificationConfig {
            index_max: 12,
            kernel_max: 8,
            ..VerificationConfig::default()
        };
        let a = serde_json::to_string(&check_lemma_3_2(&cfg)).unwrap();
        let b = serde_json::to_string(&check_lemma_3_2(&cfg)).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"name\":\"lemma_3_2\""));
    }

    #[test]
    fn kernel_table_matches_the_public_recurrence() {
        let order = Order::new(0.6).unwrap();
        let tables = kernel_tables(order, 0.5, 20);
        let pk = p_kernel(order, 0.5, 20).unwrap();
        for (a, b) in tables.p[20].iter().zip(&pk.p) {
            assert_eq!(a, b);
        }
    }
}
