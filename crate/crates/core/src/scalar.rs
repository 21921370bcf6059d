//! Floating-point abstraction for the balance-sheet and cascade arithmetic.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar used for prices, holdings and balance-sheet quantities: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + serde::Serialize
    + 'static
{
    /// Absolute slack used when comparing a bank's loss against its equity.
    fn solvency_tolerance() -> Self;

    /// Smallest price an exogenous devaluation may leave behind.
    fn price_floor() -> Self;

    /// Lossless-enough conversion from an `f64` constant.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }
}

impl Scalar for f64 {
    fn solvency_tolerance() -> Self {
        1e-12
    }

    fn price_floor() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn solvency_tolerance() -> Self {
        1e-6
    }

    fn price_floor() -> Self {
        1e-12
    }
}
