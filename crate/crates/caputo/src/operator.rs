//! The discrete Caputo derivative: a uniform grid plus row-times-samples
//! application of the scheme weights, with an optional Lubich-style
//! correction term for singular solutions.
//!
//! No operator matrix is ever stored; each application builds (or fetches
//! from a [`WeightCache`]) the single row it needs.

use crate::corrections::StartingWeights;
use crate::error::{Error, Result};
use crate::weights::{first_step_weights, history_row, Order, WeightCache};

/// Uniform mesh on `[0, T]` with `2N + 1` points, `dx = T / (2N)`.
///
/// The block scheme advances two half-steps at a time, which is why the
/// point count is kept even by construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    t: f64,
    half_steps: usize,
}

impl Grid {
    /// Grid over `[0, t]` with `2 * half_steps` intervals.
    pub fn new(t: f64, half_steps: usize) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "final time must be positive, got {t}"
            )));
        }
        if half_steps == 0 {
            return Err(Error::InvalidConfig("grid needs at least one block".into()));
        }
        Ok(Grid { t, half_steps })
    }

    /// Grid from a target step size; `t / dx` must round to an even integer.
    pub fn with_step(t: f64, dx: f64) -> Result<Self> {
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidConfig(format!("bad step size {dx}")));
        }
        let steps = t / dx;
        let rounded = steps.round();
        if (steps - rounded).abs() > 1e-9 * steps.max(1.0) {
            return Err(Error::InvalidConfig(format!(
                "t/dx = {steps} is not an integer"
            )));
        }
        let n = rounded as usize;
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "t/dx = {n} must be a positive even point count"
            )));
        }
        Grid::new(t, n / 2)
    }

    #[inline]
    pub fn t(&self) -> f64 {
        self.t
    }

    /// Number of intervals, `2N`.
    #[inline]
    pub fn steps(&self) -> usize {
        2 * self.half_steps
    }

    #[inline]
    pub fn half_steps(&self) -> usize {
        self.half_steps
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.t / (2 * self.half_steps) as f64
    }

    /// Grid point `x_j = j * dx`.
    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }
}

fn check_samples(samples: &[f64], j: usize) -> Result<()> {
    if j == 0 {
        return Err(Error::Index {
            index: 0,
            reason: "the discrete derivative starts at j = 1",
        });
    }
    // the j = 1 row reaches forward to y2
    let need = j.max(2) + 1;
    if samples.len() < need {
        return Err(Error::SampleLength {
            need,
            got: samples.len(),
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn row_dot(row: &[f64], samples: &[f64]) -> f64 {
    row.iter().zip(samples).map(|(w, y)| w * y).sum()
}

/// Discrete Caputo derivative of the sample prefix `y_0..y_j` at `x_j`.
///
/// `samples` must hold at least `max(j, 2) + 1` values.
pub fn discrete_caputo(order: Order, grid: Grid, samples: &[f64], j: usize) -> Result<f64> {
    check_samples(samples, j)?;
    let scale = grid.dx().powf(-order.nu());
    let dot = match j {
        1 => row_dot(&first_step_weights(order).dhat, samples),
        2 => row_dot(&first_step_weights(order).dtilde, samples),
        _ => row_dot(&history_row(order, j)?.coeffs, samples),
    };
    Ok(scale * dot)
}

/// Same as [`discrete_caputo`] but reusing rows from a cache; used by the
/// solver and the convergence harness.
pub(crate) fn discrete_caputo_cached(
    cache: &WeightCache,
    grid: Grid,
    samples: &[f64],
    j: usize,
) -> Result<f64> {
    check_samples(samples, j)?;
    let row = cache.row(j)?;
    Ok(grid.dx().powf(-cache.order().nu()) * row_dot(&row, samples))
}

/// Correction-augmented discrete Caputo derivative:
/// the plain operator plus `dx^-nu * sum_i W[j][i] * (y_i - y_0)`.
///
/// The weights must have been built for the same order and grid, and with an
/// `n`-range covering `j`; anything else is a [`Error::WeightMismatch`].
pub fn corrected_discrete_caputo(
    order: Order,
    grid: Grid,
    samples: &[f64],
    j: usize,
    weights: &StartingWeights,
) -> Result<f64> {
    weights.check_compatible(order, grid, j)?;
    if samples.len() <= weights.m() {
        return Err(Error::SampleLength {
            need: weights.m() + 1,
            got: samples.len(),
        });
    }
    let plain = discrete_caputo(order, grid, samples, j)?;
    let scale = grid.dx().powf(-order.nu());
    let w = weights.row(j);
    let corr: f64 = w
        .iter()
        .enumerate()
        .map(|(i, wi)| wi * (samples[i + 1] - samples[0]))
        .sum();
    Ok(plain + scale * corr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::monomial_caputo;

    fn order(nu: f64) -> Order {
        Order::new(nu).unwrap()
    }

    #[test]
    fn grid_accessors() {
        let g = Grid::new(1.0, 4).unwrap();
        assert_eq!(g.steps(), 8);
        assert_eq!(g.dx(), 0.125);
        assert_eq!(g.x(8), 1.0);
        assert!(Grid::new(0.0, 4).is_err());
        assert!(Grid::new(1.0, 0).is_err());
    }

    #[test]
    fn grid_from_step() {
        let g = Grid::with_step(1.0, 0.125).unwrap();
        assert_eq!(g.half_steps(), 4);
        // odd interval count is rejected
        assert!(Grid::with_step(0.875, 0.125).is_err());
        assert!(Grid::with_step(1.0, 0.3).is_err());
    }

    #[test]
    fn constants_are_annihilated() {
        let g = Grid::new(2.0, 16).unwrap();
        let samples = vec![7.25; 33];
        for j in 1..=32 {
            let d = discrete_caputo(order(0.6), g, &samples, j).unwrap();
            assert!(d.abs() < 1e-11, "j = {j}: {d:e}");
        }
    }

    #[test]
    fn quadratic_samples_reproduce_exact_derivative() {
        let nu = 0.5;
        let g = Grid::new(1.0, 5); // dx = 0.1
        let g = g.unwrap();
        let samples: Vec<f64> = (0..=10).map(|k| g.x(k) * g.x(k)).collect();
        let got = discrete_caputo(order(nu), g, &samples, 4).unwrap();
        let want = monomial_caputo(nu, 2.0, 0.4).unwrap();
        assert!((got - want).abs() <= 1e-9 * want);
    }

    #[test]
    fn short_sample_vectors_are_rejected() {
        let g = Grid::new(1.0, 4).unwrap();
        let two = vec![0.0, 1.0];
        assert!(matches!(
            discrete_caputo(order(0.5), g, &two, 1),
            Err(Error::SampleLength { need: 3, .. })
        ));
        let five = vec![0.0; 5];
        assert!(matches!(
            discrete_caputo(order(0.5), g, &five, 5),
            Err(Error::SampleLength { need: 6, .. })
        ));
        assert!(matches!(
            discrete_caputo(order(0.5), g, &five, 0),
            Err(Error::Index { .. })
        ));
    }

    #[test]
    fn operator_is_linear() {
        let g = Grid::new(1.0, 8).unwrap();
        let o = order(0.7);
        let u: Vec<f64> = (0..=16).map(|k| (k as f64 * 0.37).sin()).collect();
        let v: Vec<f64> = (0..=16).map(|k| (k as f64 * 0.11).cos()).collect();
        let (a, b) = (1.75, -0.4);
        let combo: Vec<f64> = u.iter().zip(&v).map(|(ui, vi)| a * ui + b * vi).collect();
        for j in [1, 2, 3, 8, 15, 16] {
            let lhs = discrete_caputo(o, g, &combo, j).unwrap();
            let rhs = a * discrete_caputo(o, g, &u, j).unwrap()
                + b * discrete_caputo(o, g, &v, j).unwrap();
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            assert!((lhs - rhs).abs() <= 1e-12 * scale, "j = {j}");
        }
    }

    #[test]
    fn cached_path_matches_direct_path() {
        let o = order(0.45);
        let g = Grid::new(1.5, 6).unwrap();
        let cache = WeightCache::new(o);
        let samples: Vec<f64> = (0..=12).map(|k| (k as f64).sqrt()).collect();
        for j in 1..=12 {
            let a = discrete_caputo(o, g, &samples, j).unwrap();
            let b = discrete_caputo_cached(&cache, g, &samples, j).unwrap();
            assert_eq!(a, b);
        }
    }
}
