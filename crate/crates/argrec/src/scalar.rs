//! Scalar abstraction for the numeric parts of the engine.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::AddAssign;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar used for probabilities and scores: f32 or f64.
pub trait Real:
    Float + FromPrimitive + AddAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossless-enough conversion from a count.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable")
    }

    /// Conversion from a collection size.
    fn from_len(n: usize) -> Self {
        Self::from_usize(n).expect("len representable")
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + AddAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform<F: Real>(n: usize) -> F {
        F::one() / F::from_len(n)
    }

    #[test]
    fn works_for_both_widths() {
        assert!((uniform::<f64>(4) - 0.25).abs() < 1e-12);
        assert!((uniform::<f32>(4) - 0.25).abs() < 1e-6);
    }
}
