//! Complex tridiagonal systems, solved by Gaussian elimination with partial
//! pivoting (the `gtsv` scheme: pivoting adds a second superdiagonal to U).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pivots below this fraction of the row norm are treated as singular.
const PIVOT_TOLERANCE: f64 = 1e-14;

/// `lower[i]` is entry `(i+1, i)`, `upper[i]` is entry `(i, i+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub lower: Vec<Complex64>,
    pub diag: Vec<Complex64>,
    pub upper: Vec<Complex64>,
    pub rhs: Vec<Complex64>,
}

impl TridiagonalSystem {
    pub fn zeros(n: usize) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            lower: vec![z; n.saturating_sub(1)],
            diag: vec![z; n],
            upper: vec![z; n.saturating_sub(1)],
            rhs: vec![z; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        assert_eq!(x.len(), n, "vector length does not match the system");
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    fn row_norm(&self, i: usize) -> f64 {
        let mut s = self.diag[i].norm();
        if i > 0 {
            s = s.max(self.lower[i - 1].norm());
        }
        if i + 1 < self.len() {
            s = s.max(self.upper[i].norm());
        }
        s
    }

    /// Solves against the stored right-hand side.
    pub fn solve(&self) -> Result<Vec<Complex64>> {
        self.solve_with(&self.rhs)
    }

    /// Solves against an arbitrary right-hand side.
    pub fn solve_with(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.len();
        if rhs.len() != n || self.lower.len() + 1 != n || self.upper.len() + 1 != n {
            return Err(Error::InvalidArgument(format!(
                "inconsistent tridiagonal shapes: n = {n}, lower = {}, upper = {}, rhs = {}",
                self.lower.len(),
                self.upper.len(),
                rhs.len()
            )));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut d = self.diag.clone();
        let mut du = self.upper.clone();
        let mut dl = self.lower.clone();
        let mut du2 = vec![zero; n.saturating_sub(2)];
        let mut b = rhs.to_vec();

        let singular = |row: usize, pivot: Complex64, norm: f64| Error::SingularPivot {
            row,
            pivot: pivot.norm(),
            row_norm: norm,
        };

        for i in 0..n.saturating_sub(1) {
            let norm = self.row_norm(i).max(self.row_norm(i + 1));
            if d[i].norm() >= dl[i].norm() {
                if d[i].norm() <= PIVOT_TOLERANCE * norm {
                    return Err(singular(i, d[i], norm));
                }
                let f = dl[i] / d[i];
                d[i + 1] -= f * du[i];
                b[i + 1] = b[i + 1] - f * b[i];
                dl[i] = zero;
            } else {
                let f = d[i] / dl[i];
                d[i] = dl[i];
                let t = d[i + 1];
                d[i + 1] = du[i] - f * t;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du2[i];
                }
                du[i] = t;
                let tb = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tb - f * b[i + 1];
            }
        }
        if n > 0 {
            let last = n - 1;
            let norm = self.row_norm(last);
            if d[last].norm() <= PIVOT_TOLERANCE * norm {
                return Err(singular(last, d[last], norm));
            }
        }

        let mut x = vec![zero; n];
        for i in (0..n).rev() {
            let mut v = b[i];
            if i + 1 < n {
                v -= du[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= du2[i] * x[i + 2];
            }
            x[i] = v / d[i];
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_small_system_exactly() {
        // [[2,1,0],[1,3,1],[0,1,4]] x = [3,5,5] -> x = [1,1,1]
        let sys = TridiagonalSystem {
            lower: vec![c(1.0, 0.0), c(1.0, 0.0)],
            diag: vec![c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)],
            upper: vec![c(1.0, 0.0), c(1.0, 0.0)],
            rhs: vec![c(3.0, 0.0), c(5.0, 0.0), c(5.0, 0.0)],
        };
        let x = sys.solve().unwrap();
        for v in x {
            assert!((v - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let sys = TridiagonalSystem {
            lower: vec![c(1.0, 0.0), c(2.0, 0.0)],
            diag: vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 1.0)],
            upper: vec![c(1.0, 0.0), c(3.0, 0.0)],
            rhs: vec![c(1.0, 0.0), c(2.0, -1.0), c(0.5, 0.0)],
        };
        let x = sys.solve().unwrap();
        let r = sys.apply(&x);
        for (a, b) in r.iter().zip(&sys.rhs) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let sys = TridiagonalSystem {
            lower: vec![c(1.0, 0.0)],
            diag: vec![c(1.0, 0.0), c(1.0, 0.0)],
            upper: vec![c(1.0, 0.0)],
            rhs: vec![c(1.0, 0.0), c(1.0, 0.0)],
        };
        assert!(matches!(sys.solve(), Err(Error::SingularPivot { row: 1, .. })));
    }

    proptest! {
        #[test]
        fn residual_is_small(
            n in 2usize..60,
            seed in proptest::collection::vec(-1.0f64..1.0, 8 * 60),
        ) {
            let mut sys = TridiagonalSystem::zeros(n);
            for i in 0..n {
                sys.diag[i] = c(seed[8 * i] + 3.0, seed[8 * i + 1]);
                sys.rhs[i] = c(seed[8 * i + 2], seed[8 * i + 3]);
                if i + 1 < n {
                    sys.lower[i] = c(seed[8 * i + 4], seed[8 * i + 5]);
                    sys.upper[i] = c(seed[8 * i + 6], seed[8 * i + 7]);
                }
            }
            let x = sys.solve().unwrap();
            let r = sys.apply(&x);
            for (a, b) in r.iter().zip(&sys.rhs) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
