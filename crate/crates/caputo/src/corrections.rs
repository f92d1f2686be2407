//! Lubich-style starting weights.
//!
//! For a list of singular exponents `sigma_1 < ... < sigma_m` the weights
//! `W[n][j]` are chosen so that the corrected operator differentiates every
//! monomial `x^sigma_k` exactly at every grid point `x_n`. Each `n` yields an
//! independent `m x m` Vandermonde-like system in the values `x_j^sigma_k`.

use crate::error::{Error, Result};
use crate::linalg::{cond_1, solve, SmallMat};
use crate::operator::Grid;
use crate::special::gamma_unchecked;
use crate::weights::{Order, WeightCache};

/// Largest supported number of correction exponents. The monomial columns
/// lose roughly two digits of conditioning per extra exponent, which makes
/// larger sets pointless in double precision.
pub const MAX_CORRECTIONS: usize = 8;

/// Condition-estimate ceiling before the system is rejected.
const COND_LIMIT: f64 = 1e12;

/// Starting-weight table `W[n][j]`, `n = 1..=2N`, `j = 1..=m`.
///
/// The weights are dimensionless and independent of the grid size; the table
/// records the order and grid it was built for so that accidental reuse on a
/// different discretization is caught at application time.
#[derive(Clone, Debug)]
pub struct StartingWeights {
    nu: f64,
    dx: f64,
    steps: usize,
    sigma: Vec<f64>,
    w: Vec<f64>, // row-major, steps x m
}

impl StartingWeights {
    #[inline]
    pub fn m(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Weight row for step `n` (1-based).
    pub fn row(&self, n: usize) -> &[f64] {
        let m = self.m();
        &self.w[(n - 1) * m..n * m]
    }

    pub(crate) fn check_compatible(&self, order: Order, grid: Grid, j: usize) -> Result<()> {
        let same = self.nu.to_bits() == order.nu().to_bits()
            && self.dx.to_bits() == grid.dx().to_bits()
            && self.steps == grid.steps();
        if !same || j == 0 || j > self.steps {
            return Err(Error::WeightMismatch);
        }
        Ok(())
    }
}

fn validate_sigma(sigma: &[f64]) -> Result<()> {
    if sigma.is_empty() {
        return Err(Error::InvalidConfig(
            "starting weights need at least one exponent".into(),
        ));
    }
    if sigma.len() > MAX_CORRECTIONS {
        return Err(Error::InvalidConfig(format!(
            "at most {MAX_CORRECTIONS} correction exponents are supported, got {}",
            sigma.len()
        )));
    }
    for (i, s) in sigma.iter().enumerate() {
        if !(s.is_finite() && *s > 0.0) {
            return Err(Error::InvalidConfig(format!("exponent {s} must be > 0")));
        }
        if i > 0 && sigma[i - 1] >= *s {
            return Err(Error::InvalidConfig(
                "exponents must be strictly increasing".into(),
            ));
        }
    }
    Ok(())
}

/// Builds the starting-weight table for `(order, grid, sigma)`.
pub fn starting_weights(order: Order, grid: Grid, sigma: &[f64]) -> Result<StartingWeights> {
    validate_sigma(sigma)?;
    let m = sigma.len();
    let steps = grid.steps();
    if m.max(2) > steps {
        return Err(Error::InvalidConfig(format!(
            "{m} correction exponents need a grid with at least {} steps",
            m.max(2)
        )));
    }
    let nu = order.nu();
    let cache = WeightCache::new(order);
    let dx = grid.dx();
    let x_m = grid.x(m);

    // columns scaled by x_m^sigma_k: entries (x_j/x_m)^sigma_k stay O(1)
    let mut mat = SmallMat::zeros(m);
    for (k, sk) in sigma.iter().enumerate() {
        for j in 1..=m {
            *mat.at_mut(k, j - 1) = (grid.x(j) / x_m).powf(*sk);
        }
    }
    let cond = cond_1(&mat);
    if !cond.is_finite() || cond > COND_LIMIT {
        return Err(Error::IllConditioned { cond });
    }

    let gamma_ratio: Vec<f64> = sigma
        .iter()
        .map(|sk| gamma_unchecked(1.0 + sk) / gamma_unchecked(1.0 - nu + sk))
        .collect();

    let mut w = Vec::with_capacity(steps * m);
    for n in 1..=steps {
        let row = cache.row(n)?;
        let xn = grid.x(n);
        let mut rhs = vec![0.0; m];
        for (k, sk) in sigma.iter().enumerate() {
            // recentering against x_n^sigma exploits the zero row sum and
            // avoids the n^nu-fold cancellation of the raw dot product
            let xns = xn.powf(*sk);
            let defect: f64 = row
                .iter()
                .enumerate()
                .map(|(l, wl)| wl * (grid.x(l).powf(*sk) - xns))
                .sum();
            let target = gamma_ratio[k] * xn.powf(sk - nu) * dx.powf(nu);
            rhs[k] = (target - defect) / x_m.powf(*sk);
        }
        let sol = solve(mat.clone(), rhs).ok_or(Error::IllConditioned { cond })?;
        w.extend_from_slice(&sol);
    }

    Ok(StartingWeights {
        nu,
        dx,
        steps,
        sigma: sigma.to_vec(),
        w,
    })
}
