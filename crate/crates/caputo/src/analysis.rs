//! Derived coefficient sequences used by the stability and convergence
//! analysis: the normalized rows `d_k^j`, their theta-transformed positive
//! counterparts, and the discrete convolution kernel pair `Bbar`/`P` with
//! `sum P Bbar = 1`.
//!
//! Nothing here feeds the production solver; these sequences exist so the
//! verification suite can evaluate the coefficient lemmas numerically.

use crate::error::{Error, Result};
use crate::weights::{alpha0, history_row, Order};

/// Constant in the kernel lower bound and the step-size restriction.
pub const PI_B: f64 = 9.0;

/// Normalized history row: `d_k^j = -(row entry k) / alpha0`, plus the
/// transform parameter `theta = 2 nu / (2 + nu)`.
#[derive(Clone, Debug)]
pub struct NormalizedRow {
    pub j: usize,
    /// `d[k] = d_k^j`, `k = 0..j-1`.
    pub d: Vec<f64>,
    pub theta: f64,
    pub alpha0: f64,
}

pub fn normalized_row(order: Order, j: usize) -> Result<NormalizedRow> {
    let row = history_row(order, j)?;
    let a0 = alpha0(order);
    let nu = order.nu();
    let d = row.coeffs[..j].iter().map(|c| -c / a0).collect();
    Ok(NormalizedRow {
        j,
        d,
        theta: 2.0 * nu / (2.0 + nu),
        alpha0: a0,
    })
}

/// Theta-transformed row `dbar_k^j`, all positive for `k <= j-2`.
#[derive(Clone, Debug)]
pub struct TransformedRow {
    pub j: usize,
    /// `dbar[k] = dbar_k^j`, `k = 0..j-1`.
    pub dbar: Vec<f64>,
}

/// Closed forms of the three `j = 3` entries.
fn transformed_row_3(nu: f64) -> Vec<f64> {
    let r = (2.0f64 / 3.0).powf(nu);
    let d2 = (nu + 6.0) / (nu + 2.0) - (4.0 + nu) / (nu + 2.0) * (2.0f64 / 3.0).powf(nu - 1.0);
    let d1 = (-nu * nu - 12.0 + 3.0 * (nu * nu + 2.0 * nu + 4.0) * r) / ((2.0 + nu) * (2.0 + nu));
    let d0 = 0.5 * (nu - 2.0) * (nu - 2.0) / ((nu + 2.0).powi(3)) * (4.0 - 2.0 * nu + 3.0 * nu * r);
    vec![d0, d1, d2]
}

pub fn transformed_row(order: Order, j: usize) -> Result<TransformedRow> {
    if j < 3 {
        return Err(Error::Index {
            index: j,
            reason: "transformed rows exist for j >= 3",
        });
    }
    let nu = order.nu();
    if j == 3 {
        return Ok(TransformedRow {
            j,
            dbar: transformed_row_3(nu),
        });
    }
    let nrow = normalized_row(order, j)?;
    let theta = nrow.theta;
    let mut dbar = vec![0.0; j];
    dbar[j - 1] = theta;
    dbar[j - 2] = theta * theta + nrow.d[j - 2];
    // backward recurrence; the O(j^2) double-sum definition is equivalent
    // and only exercised in tests
    for k in (0..j.saturating_sub(2)).rev() {
        dbar[k] = theta * dbar[k + 1] + nrow.d[k];
    }
    Ok(TransformedRow { j, dbar })
}

/// Discrete kernel `Bbar_k^n` (units `dx^-nu`), decreasing and positive.
#[derive(Clone, Debug)]
pub struct BbarKernel {
    pub n: usize,
    /// `bbar[k] = Bbar_k^n`, `k = 0..n-1`.
    pub bbar: Vec<f64>,
}

pub fn bbar_kernel(order: Order, dx: f64, n: usize) -> Result<BbarKernel> {
    if n < 3 {
        return Err(Error::Index {
            index: n,
            reason: "Bbar kernels exist for n >= 3",
        });
    }
    if !(dx.is_finite() && dx > 0.0) {
        return Err(Error::InvalidConfig(format!("bad step size {dx}")));
    }
    let scale = dx.powf(-order.nu()) * alpha0(order);
    let tr = transformed_row(order, n)?;
    let mut bbar = vec![0.0; n];
    bbar[0] = scale;
    // Bbar_{n-k} = Bbar_{n-k-1} - scale * dbar_k, i.e. walking l = n-k upward
    // consumes the transformed row from its tail
    for l in 1..n {
        bbar[l] = bbar[l - 1] - scale * tr.dbar[n - l];
    }
    Ok(BbarKernel { n, bbar })
}

/// Complementary kernel `P_j^n` satisfying `sum_{j=m}^n P_{n-j}^n Bbar_{j-m}^j = 1`.
#[derive(Clone, Debug)]
pub struct PKernel {
    pub n: usize,
    /// `p[j] = P_j^n`, `j = 0..n-1` (the last two entries are zero).
    pub p: Vec<f64>,
}

#[allow(clippy::needless_range_loop)]
pub fn p_kernel(order: Order, dx: f64, n: usize) -> Result<PKernel> {
    if n < 3 {
        return Err(Error::Index {
            index: n,
            reason: "P kernels exist for n >= 3",
        });
    }
    // kernels Bbar^s for every superscript s that the recurrence touches
    let mut bb: Vec<Option<BbarKernel>> = vec![None; n + 1];
    for s in 3..=n {
        bb[s] = Some(bbar_kernel(order, dx, s)?);
    }
    let bbar = |sup: usize, idx: usize| -> f64 { bb[sup].as_ref().unwrap().bbar[idx] };

    let mut p = vec![0.0; n];
    p[0] = 1.0 / bbar(n, 0);
    for j in 1..n.saturating_sub(2) {
        let mut acc = 0.0;
        for k in 0..j {
            acc += (bbar(n - k, j - k - 1) - bbar(n - k, j - k)) * p[k];
        }
        p[j] = acc / bbar(n - j, 0);
    }
    // p[n-2] and p[n-1] stay zero by definition
    Ok(PKernel { n, p })
}

/// The order `nu_0` at which `d_{j-2}^j` changes sign, located by bisection
/// of `h(nu) = 3(2 - nu) - (6 + nu) 2^-nu` to 1e-12.
pub fn nu_zero() -> f64 {
    let h = |nu: f64| 3.0 * (2.0 - nu) - (6.0 + nu) * 2f64.powf(-nu);
    let (mut lo, mut hi) = (0.01, 0.99);
    debug_assert!(h(lo) > 0.0 && h(hi) < 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
