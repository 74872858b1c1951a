//! Coefficient scalar abstraction.
//!
//! Every truncated Euclidean number stores its monosemium coefficients as a
//! fixed-length sequence of real scalars. The arithmetic kernel and the dense
//! linear algebra are generic over that scalar through [`Real`]; the solver
//! layers use the `f64` instantiation exported at the crate root.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable as a monosemium coefficient.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Display + Debug + FromStr + Copy + Send + Sync + 'static
{
    /// Relative threshold under which a coefficient produced by cancellation
    /// is flushed to exact zero.
    const FLUSH_RELATIVE: Self;

    /// Dynamic-range cap: tail coefficients more than this factor above the
    /// leading coefficient are no longer jointly representable with it and
    /// get truncated.
    const WINDOW_RELATIVE: Self;

    /// Lossy conversion from `f64`, for algorithm constants.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in every Real type")
    }
}

impl Real for f64 {
    const FLUSH_RELATIVE: Self = 1e-15;
    const WINDOW_RELATIVE: Self = 1e15;
}

impl Real for f32 {
    const FLUSH_RELATIVE: Self = 1e-6;
    const WINDOW_RELATIVE: Self = 1e6;
}
