//! Dense LU factorization with partial pivoting.
//!
//! This is the single solver seam used by the absorbing-chain routines:
//! absorption probabilities, fundamental matrices and stationary
//! distributions all go through [`LuFactors`].

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major square matrix factored as `P A = L U`.
#[derive(Debug, Clone)]
pub struct LuFactors<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Real> LuFactors<T> {
    /// Factors the `n x n` row-major matrix `a`.
    ///
    /// Fails with [`Error::SingularSystem`] when a pivot is negligible relative
    /// to the largest entry of `a`.
    pub fn factor(n: usize, mut a: Vec<T>) -> Result<Self> {
        assert_eq!(a.len(), n * n, "matrix buffer has wrong length");
        let scale = a.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
        let tiny = T::epsilon() * T::lit(n.max(1) as f64) * scale.max(T::min_positive_value());
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (pivot_row, pivot_abs) = (k..n)
                .map(|r| (r, a[r * n + k].abs()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot_abs > tiny) {
                return Err(Error::SingularSystem { dim: n });
            }
            if pivot_row != k {
                for c in 0..n {
                    a.swap(k * n + c, pivot_row * n + c);
                }
                perm.swap(k, pivot_row);
            }
            let pivot = a[k * n + k];
            for r in (k + 1)..n {
                let factor = a[r * n + k] / pivot;
                if factor == T::zero() {
                    continue;
                }
                a[r * n + k] = factor;
                for c in (k + 1)..n {
                    let upper = a[k * n + c];
                    a[r * n + c] = a[r * n + c] - factor * upper;
                }
            }
        }
        Ok(LuFactors { n, lu: a, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let mut acc = x[r];
            for c in 0..r {
                acc = acc - self.lu[r * n + c] * x[c];
            }
            x[r] = acc;
        }
        for r in (0..n).rev() {
            let mut acc = x[r];
            for c in (r + 1)..n {
                acc = acc - self.lu[r * n + c] * x[c];
            }
            x[r] = acc / self.lu[r * n + r];
        }
        x
    }

    /// Solves `A^T x = b`; row `i` of `A^{-1}` is the solution for `b = e_i`.
    pub fn solve_transpose(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        assert_eq!(b.len(), n);
        // A^T = U^T L^T P, so solve U^T z = b, L^T w = z, then x = P^T w.
        let mut z = b.to_vec();
        for r in 0..n {
            let mut acc = z[r];
            for c in 0..r {
                acc = acc - self.lu[c * n + r] * z[c];
            }
            z[r] = acc / self.lu[r * n + r];
        }
        for r in (0..n).rev() {
            let mut acc = z[r];
            for c in (r + 1)..n {
                acc = acc - self.lu[c * n + r] * z[c];
            }
            z[r] = acc;
        }
        let mut x = vec![T::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = z[i];
        }
        x
    }

    /// Full inverse, row-major.
    pub fn inverse(&self) -> Vec<T> {
        let n = self.n;
        let mut inv = vec![T::zero(); n * n];
        let mut e = vec![T::zero(); n];
        for col in 0..n {
            e[col] = T::one();
            let x = self.solve(&e);
            e[col] = T::zero();
            for r in 0..n {
                inv[r * n + col] = x[r];
            }
        }
        inv
    }
}
