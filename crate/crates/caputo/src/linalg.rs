//! Tiny dense linear algebra for the coupled Newton blocks and the
//! starting-weight systems. Systems here never exceed ~8 unknowns, so plain
//! Gaussian elimination with partial pivoting is all that is needed.

/// Row-major square matrix.
#[derive(Clone, Debug)]
pub(crate) struct SmallMat {
    pub n: usize,
    pub a: Vec<f64>,
}

impl SmallMat {
    pub fn zeros(n: usize) -> Self {
        SmallMat {
            n,
            a: vec![0.0; n * n],
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.n + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.a[r * self.n + c]
    }

    /// Max absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.n)
            .map(|c| (0..self.n).map(|r| self.at(r, c).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Solves `a x = b` in place by LU with partial pivoting.
/// Returns `None` when a pivot degenerates to (numerical) zero.
pub(crate) fn solve(mut a: SmallMat, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = a.n;
    debug_assert_eq!(b.len(), n);
    let scale = a.a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a.at(r, col).abs() > a.at(piv, col).abs() {
                piv = r;
            }
        }
        if a.at(piv, col).abs() <= f64::EPSILON * scale * n as f64 {
            return None;
        }
        if piv != col {
            #[allow(clippy::needless_range_loop)]
            for c in 0..n {
                let tmp = a.at(col, c);
                *a.at_mut(col, c) = a.at(piv, c);
                *a.at_mut(piv, c) = tmp;
            }
            b.swap(col, piv);
        }
        for r in col + 1..n {
            let f = a.at(r, col) / a.at(col, col);
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                *a.at_mut(r, c) -= f * a.at(col, c);
            }
            b[r] -= f * b[col];
        }
    }
    for r in (0..n).rev() {
        let mut s = b[r];
        #[allow(clippy::needless_range_loop)]
        for c in r + 1..n {
            s -= a.at(r, c) * b[c];
        }
        b[r] = s / a.at(r, r);
    }
    Some(b)
}

/// 1-norm condition estimate via the explicit inverse; fine at these sizes.
pub(crate) fn cond_1(a: &SmallMat) -> f64 {
    let n = a.n;
    let mut inv_norm: f64 = 0.0;
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        match solve(a.clone(), e) {
            Some(x) => inv_norm = inv_norm.max(x.iter().map(|v| v.abs()).sum::<f64>()),
            None => return f64::INFINITY,
        }
    }
    a.norm_1() * inv_norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_known_system() {
        let mut a = SmallMat::zeros(3);
        let rows = [[2.0, 1.0, -1.0], [-3.0, -1.0, 2.0], [-2.0, 1.0, 2.0]];
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                *a.at_mut(r, c) = *v;
            }
        }
        let x = solve(a, vec![8.0, -11.0, -3.0]).unwrap();
        let want = [2.0, 3.0, -1.0];
        for (xi, wi) in x.iter().zip(&want) {
            assert!((xi - wi).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let mut a = SmallMat::zeros(2);
        *a.at_mut(0, 0) = 1.0;
        *a.at_mut(0, 1) = 2.0;
        *a.at_mut(1, 0) = 2.0;
        *a.at_mut(1, 1) = 4.0;
        assert!(solve(a, vec![1.0, 2.0]).is_none());
    }

    #[test]
    fn condition_of_identity_is_one() {
        let mut a = SmallMat::zeros(4);
        for i in 0..4 {
            *a.at_mut(i, i) = 1.0;
        }
        assert!((cond_1(&a) - 1.0).abs() < 1e-12);
    }
}
