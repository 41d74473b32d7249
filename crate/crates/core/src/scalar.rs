//! Real scalar abstraction used for amplitudes.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};

/// Floating point type an amplitude is built from: `f32` or `f64`.
pub trait Real: Float + FloatConst + Debug + Display + Default + Send + Sync + 'static {
    /// Converts from `f64`, rounding where the target is narrower.
    fn from_f64(v: f64) -> Self;

    fn to_f64(self) -> f64;
}

impl Real for f32 {
    fn from_f64(v: f64) -> Self {
        v as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(self) -> f64 {
        self
    }
}
