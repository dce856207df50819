//! Scalar abstraction shared by every algorithm in the crate.
//!
//! All reductions are written once against [`Scalar`] and instantiated for
//! `f32` (binary32) and `f64` (binary64). Rust evaluates `f32` arithmetic
//! with a rounding step after every operation, so a run over `f32` is a
//! faithful binary32 computation with no wider intermediates.

use std::fmt::{self, Debug, Display};
use std::ops::AddAssign;
use std::str::FromStr;

use num_traits::{Num, NumCast, ToPrimitive};

use crate::Error;

/// Floating-point regime an algorithm run is carried out in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    /// IEEE 754 binary32.
    Single,
    /// IEEE 754 binary64.
    Double,
}

impl Precision {
    pub const ALL: [Precision; 2] = [Precision::Double, Precision::Single];

    /// Machine epsilon of the regime, as an `f64`.
    pub fn epsilon(self) -> f64 {
        match self {
            Precision::Single => f32::EPSILON as f64,
            Precision::Double => f64::EPSILON,
        }
    }

    /// Default row-sum tolerance used when validating stochastic input.
    pub fn stochastic_tolerance(self) -> f64 {
        match self {
            Precision::Single => 1e-5,
            Precision::Double => 1e-12,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Single => "single",
            Precision::Double => "double",
        }
    }
}

impl Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "single" | "binary32" | "f32" => Ok(Precision::Single),
            "double" | "binary64" | "f64" => Ok(Precision::Double),
            other => Err(Error::UnknownPrecision(other.to_string())),
        }
    }
}

/// Real scalar type the reductions are generic over.
///
/// Only the field operations plus `abs` are needed by the algorithms; the
/// trait deliberately avoids `num_traits::Float` so that thin wrappers such
/// as [`Counted`](crate::instrumented::Counted) stay small.
pub trait Scalar:
    Copy + Debug + Display + PartialOrd + Send + Sync + 'static + Num + NumCast + AddAssign
{
    /// Regime this type computes in.
    const PRECISION: Precision;

    fn abs(self) -> Self;

    fn is_finite(self) -> bool;

    /// Round an `f64` to this type.
    fn from_f64(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("finite f64 converts to every scalar type")
    }

    /// Widen to `f64` (exact for `f32` and `f64`).
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const PRECISION: Precision = Precision::Double;

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn as_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    const PRECISION: Precision = Precision::Single;

    fn abs(self) -> Self {
        f32::abs(self)
    }

    fn is_finite(self) -> bool {
        f32::is_finite(self)
    }

    fn from_f64(x: f64) -> Self {
        x as f32
    }

    fn as_f64(self) -> f64 {
        self as f64
    }
}
