//! Implicit time stepping for `D^nu y = f(x, y)`.
//!
//! The first two unknowns are coupled (the step-1 row reaches forward to
//! `y_2`) and solved as one 2x2 Newton system; every later step is a scalar
//! Newton solve against its history row. The corrected variant couples the
//! first `max(m, 2)` unknowns, since the starting-weight sum ties them
//! together.

use crate::analysis::PI_B;
use crate::corrections::{starting_weights, StartingWeights};
use crate::error::{Error, Result};
use crate::linalg::{solve as lin_solve, SmallMat};
use crate::operator::{row_dot, Grid};
use crate::weights::{alpha0, Order, WeightCache};

type Rhs = dyn Fn(f64, f64) -> f64 + Send + Sync;
type Exact = dyn Fn(f64) -> f64 + Send + Sync;

/// A scalar Caputo initial-value problem.
pub struct Problem {
    order: Order,
    y0: f64,
    rhs: Box<Rhs>,
    rhs_dy: Option<Box<Rhs>>,
    exact: Option<Box<Exact>>,
    lipschitz_hint: Option<f64>,
}

impl Problem {
    pub fn new(
        order: Order,
        y0: f64,
        rhs: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Problem {
            order,
            y0,
            rhs: Box::new(rhs),
            rhs_dy: None,
            exact: None,
            lipschitz_hint: None,
        }
    }

    /// Analytic `df/dy`; without it Newton falls back to central differences.
    pub fn with_jacobian(mut self, dfdy: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.rhs_dy = Some(Box::new(dfdy));
        self
    }

    /// Known exact solution, enabling error measurement in studies.
    /// Must agree with `y0` at the origin.
    pub fn with_exact(mut self, exact: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        debug_assert!(
            (exact(0.0) - self.y0).abs() <= 1e-12 * (1.0 + self.y0.abs()),
            "exact(0) = {} disagrees with y0 = {}",
            exact(0.0),
            self.y0
        );
        self.exact = Some(Box::new(exact));
        self
    }

    /// Lipschitz constant of `f` in `y`, if known; only used to warn when the
    /// step size leaves the theoretical comfort zone.
    pub fn with_lipschitz_hint(mut self, l: f64) -> Self {
        self.lipschitz_hint = Some(l);
        self
    }

    #[inline]
    pub fn order(&self) -> Order {
        self.order
    }

    #[inline]
    pub fn y0(&self) -> f64 {
        self.y0
    }

    #[inline]
    pub fn rhs(&self, x: f64, y: f64) -> f64 {
        (self.rhs)(x, y)
    }

    pub fn exact(&self, x: f64) -> Option<f64> {
        self.exact.as_ref().map(|e| e(x))
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    fn dfdy(&self, x: f64, y: f64, fd_eps: f64) -> f64 {
        match &self.rhs_dy {
            Some(d) => d(x, y),
            None => {
                let h = fd_eps.max(fd_eps * y.abs());
                (self.rhs(x, y + h) - self.rhs(x, y - h)) / (2.0 * h)
            }
        }
    }
}

/// Newton iteration controls.
#[derive(Clone, Copy, Debug)]
pub struct NewtonConfig {
    /// Residual tolerance, relative to the operator scale times `1 + |y|`.
    pub tol: f64,
    pub max_iter: u32,
    /// Base step for the finite-difference Jacobian fallback.
    pub fd_eps: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        // residual tolerance far below the scheme error so the nonlinear
        // solver never pollutes convergence-order measurements
        NewtonConfig {
            tol: 1e-13,
            max_iter: 50,
            fd_eps: 1e-7,
        }
    }
}

impl NewtonConfig {
    // negated comparisons so NaN settings are rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_iter == 0 || !(self.fd_eps > 0.0) {
            return Err(Error::InvalidConfig(
                "newton config needs tol > 0, max_iter >= 1, fd_eps > 0".into(),
            ));
        }
        Ok(())
    }
}

const MAX_HALVINGS: u32 = 30;

/// Solution samples on the full grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub grid: Grid,
    /// `values[j] = y_j`, `j = 0..=2N`.
    pub values: Vec<f64>,
    /// Newton iterations spent on each step (coupled steps share a count).
    pub newton_iters: Vec<u32>,
}

impl Trajectory {
    /// `max_k |exact(x_k) - y_k|` over `k = 1..=2N`, when an exact solution
    /// is attached to the problem.
    pub fn max_error(&self, problem: &Problem) -> Option<f64> {
        if !problem.has_exact() {
            return None;
        }
        let mut worst = 0.0f64;
        for (k, y) in self.values.iter().enumerate().skip(1) {
            let e = (problem.exact(self.grid.x(k)).unwrap() - y).abs();
            if e.is_nan() {
                return Some(f64::NAN);
            }
            worst = worst.max(e);
        }
        Some(worst)
    }
}

/// Per-equation residual scale: operator magnitude plus the right-hand side.
#[inline]
fn residual_scale(s_a0: f64, y: f64, f: f64) -> f64 {
    s_a0 * (1.0 + y.abs()) + f.abs()
}

/// Scalar Newton solve for step `j >= 3`: `s*(c + a0*y) = f(x, y)` where `c`
/// collects the known history (and any correction) contributions.
#[allow(clippy::too_many_arguments)]
fn scalar_newton(
    problem: &Problem,
    x: f64,
    c: f64,
    s: f64,
    a0: f64,
    j: usize,
    guess: f64,
    cfg: &NewtonConfig,
) -> Result<(f64, u32)> {
    let s_a0 = s * a0;
    let resid = |y: f64| s * (c + a0 * y) - problem.rhs(x, y);
    let mut y = guess;
    let mut g = resid(y);
    for iter in 0..cfg.max_iter {
        if g.abs() <= cfg.tol * residual_scale(s_a0, y, problem.rhs(x, y)) {
            return Ok((y, iter));
        }
        let gp = s_a0 - problem.dfdy(x, y, cfg.fd_eps);
        if !gp.is_finite() || gp.abs() <= f64::EPSILON * s_a0.abs() {
            return Err(Error::SingularJacobian { step: j });
        }
        let mut step = -g / gp;
        let mut y_new = y + step;
        let mut g_new = resid(y_new);
        let mut halvings = 0;
        // negated so a NaN residual also triggers backtracking
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        while !(g_new.abs() <= g.abs()) && halvings < MAX_HALVINGS {
            step *= 0.5;
            y_new = y + step;
            g_new = resid(y_new);
            halvings += 1;
        }
        y = y_new;
        g = g_new;
    }
    Err(Error::NonConvergence {
        step: j,
        iters: cfg.max_iter,
        residual: g.abs(),
    })
}

/// Coupled Newton solve for the first `p` unknowns `y_1..y_p`.
///
/// Equation `n` applies the step-`n` weight row (first-step rows for
/// `n = 1, 2`) plus the optional correction sum.
fn coupled_block(
    problem: &Problem,
    grid: Grid,
    cache: &WeightCache,
    p: usize,
    corrections: Option<&StartingWeights>,
    cfg: &NewtonConfig,
) -> Result<(Vec<f64>, u32)> {
    let nu = problem.order().nu();
    let s = grid.dx().powf(-nu);
    let a0 = alpha0(problem.order());
    let s_a0 = s * a0;
    let y0 = problem.y0();
    let m = corrections.map_or(0, |w| w.m());

    let rows: Vec<_> = (1..=p).map(|n| cache.row(n)).collect::<Result<_>>()?;

    // linear part of equation n as a function of the unknown block
    let linear = |u: &[f64], n: usize| -> f64 {
        let row = &rows[n - 1];
        let mut acc = row[0] * y0;
        for (c, w) in row.iter().enumerate().skip(1) {
            acc += w * u[c - 1];
        }
        if let Some(sw) = corrections {
            for (i, wi) in sw.row(n).iter().enumerate() {
                acc += wi * (u[i] - y0);
            }
        }
        s * acc
    };
    let resid_vec = |u: &[f64]| -> Vec<f64> {
        (1..=p)
            .map(|n| linear(u, n) - problem.rhs(grid.x(n), u[n - 1]))
            .collect()
    };
    let max_abs = |g: &[f64]| g.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));

    let mut u = vec![y0; p];
    let mut g = resid_vec(&u);
    for iter in 0..cfg.max_iter {
        let converged = (0..p).all(|n| {
            g[n].abs() <= cfg.tol * residual_scale(s_a0, u[n], problem.rhs(grid.x(n + 1), u[n]))
        });
        if converged {
            return Ok((u, iter));
        }

        let mut jac = SmallMat::zeros(p);
        for n in 1..=p {
            let row = &rows[n - 1];
            for c in 1..=p {
                let mut v = if c < row.len() { s * row[c] } else { 0.0 };
                if let Some(sw) = corrections {
                    if c <= m {
                        v += s * sw.row(n)[c - 1];
                    }
                }
                if c == n {
                    v -= problem.dfdy(grid.x(n), u[n - 1], cfg.fd_eps);
                }
                *jac.at_mut(n - 1, c - 1) = v;
            }
        }
        let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
        let step = lin_solve(jac, neg_g).ok_or(Error::SingularJacobian { step: 1 })?;

        let mut lambda = 1.0;
        let mut halvings = 0;
        loop {
            let u_new: Vec<f64> = u
                .iter()
                .zip(&step)
                .map(|(ui, si)| ui + lambda * si)
                .collect();
            let g_new = resid_vec(&u_new);
            if max_abs(&g_new) <= max_abs(&g) || halvings >= MAX_HALVINGS {
                u = u_new;
                g = g_new;
                break;
            }
            lambda *= 0.5;
            halvings += 1;
        }
    }
    Err(Error::NonConvergence {
        step: p,
        iters: cfg.max_iter,
        residual: max_abs(&g),
    })
}

/// Solves the coupled `(y_1, y_2)` pair. Returns the two values and the
/// Newton iteration count.
pub fn solve_initial_pair(
    problem: &Problem,
    grid: Grid,
    cfg: &NewtonConfig,
) -> Result<(f64, f64, u32)> {
    cfg.validate()?;
    let cache = WeightCache::new(problem.order());
    let (u, iters) = coupled_block(problem, grid, &cache, 2, None, cfg)?;
    Ok((u[0], u[1], iters))
}

/// Advances one scalar step `j >= 3` given the history `values[0..j]`.
pub fn advance_step(
    problem: &Problem,
    grid: Grid,
    values_so_far: &[f64],
    j: usize,
    cfg: &NewtonConfig,
) -> Result<(f64, u32)> {
    if j < 3 {
        return Err(Error::Index {
            index: j,
            reason: "advance_step handles j >= 3; steps 1 and 2 are coupled",
        });
    }
    if values_so_far.len() < j {
        return Err(Error::SampleLength {
            need: j,
            got: values_so_far.len(),
        });
    }
    cfg.validate()?;
    let cache = WeightCache::new(problem.order());
    advance_step_cached(problem, grid, &cache, values_so_far, j, None, cfg)
}

fn advance_step_cached(
    problem: &Problem,
    grid: Grid,
    cache: &WeightCache,
    values: &[f64],
    j: usize,
    corrections: Option<&StartingWeights>,
    cfg: &NewtonConfig,
) -> Result<(f64, u32)> {
    let nu = problem.order().nu();
    let s = grid.dx().powf(-nu);
    let a0 = alpha0(problem.order());
    let row = cache.row(j)?;
    let mut c = row_dot(&row[..j], &values[..j]);
    if let Some(sw) = corrections {
        let y0 = values[0];
        for (i, wi) in sw.row(j).iter().enumerate() {
            c += wi * (values[i + 1] - y0);
        }
    }
    scalar_newton(problem, grid.x(j), c, s, a0, j, values[j - 1], cfg)
}

fn warn_step_size(problem: &Problem, grid: Grid) {
    if let Some(l) = problem.lipschitz_hint {
        let nu = problem.order().nu();
        if l > 0.0 && grid.dx().powf(nu) > 1.0 / (24.0 * PI_B * l) {
            log::warn!(
                "dx^nu = {:.3e} exceeds 1/(24 pi_B L) = {:.3e}; the convergence theory \
                 no longer guarantees the rate (runs are typically still fine)",
                grid.dx().powf(nu),
                1.0 / (24.0 * PI_B * l)
            );
        }
    }
}

/// Runs the scheme over the whole grid.
#[allow(clippy::needless_range_loop)]
pub fn solve(problem: &Problem, grid: Grid, cfg: &NewtonConfig) -> Result<Trajectory> {
    cfg.validate()?;
    warn_step_size(problem, grid);
    let cache = WeightCache::new(problem.order());
    let steps = grid.steps();
    let mut values = Vec::with_capacity(steps + 1);
    let mut iters = vec![0u32; steps + 1];
    values.push(problem.y0());

    let (u, pair_iters) = coupled_block(problem, grid, &cache, 2, None, cfg)?;
    values.extend_from_slice(&u);
    iters[1] = pair_iters;
    iters[2] = pair_iters;

    for j in 3..=steps {
        let (yj, it) = advance_step_cached(problem, grid, &cache, &values, j, None, cfg)?;
        values.push(yj);
        iters[j] = it;
    }
    Ok(Trajectory {
        grid,
        values,
        newton_iters: iters,
    })
}

/// Runs the corrected scheme with starting weights for the exponents
/// `sigma`. An empty list reproduces [`solve`] exactly.
#[allow(clippy::needless_range_loop)]
pub fn solve_corrected(
    problem: &Problem,
    grid: Grid,
    cfg: &NewtonConfig,
    sigma: &[f64],
) -> Result<Trajectory> {
    if sigma.is_empty() {
        return solve(problem, grid, cfg);
    }
    warn_step_size(problem, grid);
    let weights = starting_weights(problem.order(), grid, sigma)?;
    let m = weights.m();
    let p = m.max(2);
    let steps = grid.steps();
    if p > steps {
        return Err(Error::InvalidConfig(format!(
            "{m} corrections couple the first {p} steps but the grid only has {steps}"
        )));
    }
    let cache = WeightCache::new(problem.order());
    let mut values = Vec::with_capacity(steps + 1);
    let mut iters = vec![0u32; steps + 1];
    values.push(problem.y0());

    let (u, block_iters) = coupled_block(problem, grid, &cache, p, Some(&weights), cfg)?;
    values.extend_from_slice(&u);
    for slot in iters.iter_mut().take(p + 1).skip(1) {
        *slot = block_iters;
    }

    for j in p + 1..=steps {
        let (yj, it) = advance_step_cached(problem, grid, &cache, &values, j, Some(&weights), cfg)?;
        values.push(yj);
        iters[j] = it;
    }
    Ok(Trajectory {
        grid,
        values,
        newton_iters: iters,
    })
}
