//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All chain, solver and entropy code is written against [`Real`] so the
//! same algorithms run in `f64` (the default, see the aliases at the crate
//! root) or in `f32`. Tolerances scale with the precision of the type.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + LowerExp + Send + Sync + 'static {
    /// Largest accepted deviation of a row sum from one.
    fn row_sum_tolerance() -> Self;

    /// Absorption probabilities at or below this value are treated as zero.
    fn absorption_epsilon() -> Self;

    /// Absorption probabilities in `(absorption_epsilon, conditioning_threshold)`
    /// are kept but flagged as poorly conditioned.
    fn conditioning_threshold() -> Self;

    /// Converts an `f64` literal. Panics only for values the type cannot hold.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn row_sum_tolerance() -> Self {
        1e-9
    }
    fn absorption_epsilon() -> Self {
        1e-12
    }
    fn conditioning_threshold() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn row_sum_tolerance() -> Self {
        1e-5
    }
    fn absorption_epsilon() -> Self {
        1e-6
    }
    fn conditioning_threshold() -> Self {
        1e-4
    }
}

/// `-p log2 p` with the convention `0 log 0 = 0`.
#[inline]
pub fn neg_plog2p<T: Real>(p: T) -> T {
    if p > T::zero() {
        -p * p.log2()
    } else {
        T::zero()
    }
}

/// Shannon entropy in bits of a probability vector. Zero entries contribute nothing.
pub fn entropy_bits<T: Real>(probs: &[T]) -> T {
    probs.iter().map(|&p| neg_plog2p(p)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_log_zero_is_zero() {
        assert_eq!(neg_plog2p(0.0_f64), 0.0);
        assert_eq!(entropy_bits(&[1.0_f64, 0.0]), 0.0);
    }

    #[test]
    fn uniform_entropy() {
        assert!((entropy_bits(&[0.25_f64; 4]) - 2.0).abs() < 1e-15);
        assert!((entropy_bits(&[0.25_f32; 4]) - 2.0).abs() < 1e-6);
    }
}
