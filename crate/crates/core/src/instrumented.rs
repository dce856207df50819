//! An operation-counting scalar used to audit which arithmetic an algorithm
//! performs.
//!
//! Counts are kept per thread. Run the algorithm under test on the current
//! thread (not through the parallel entry points) between [`reset_counts`]
//! and [`counts`].

#![allow(clippy::suspicious_arithmetic_impl)]

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Rem, Sub};

use num_traits::{Num, NumCast, One, ToPrimitive, Zero};

use crate::scalar::{Precision, Scalar};

/// Tally of arithmetic operations performed on [`Counted`] values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub additions: u64,
    pub subtractions: u64,
    pub multiplications: u64,
    pub divisions: u64,
    pub negations: u64,
    pub remainders: u64,
}

thread_local! {
    static COUNTS: Cell<OpCounts> = Cell::new(OpCounts::default());
}

fn bump(f: impl FnOnce(&mut OpCounts)) {
    COUNTS.with(|c| {
        let mut v = c.get();
        f(&mut v);
        c.set(v);
    });
}

/// Zero this thread's counters.
pub fn reset_counts() {
    COUNTS.with(|c| c.set(OpCounts::default()));
}

/// Snapshot of this thread's counters.
pub fn counts() -> OpCounts {
    COUNTS.with(Cell::get)
}

/// Run `f` with fresh counters and return its result plus the tally.
pub fn count_ops<R>(f: impl FnOnce() -> R) -> (R, OpCounts) {
    reset_counts();
    let out = f();
    (out, counts())
}

/// Wrapper around a scalar that records every arithmetic operation.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Counted<F>(pub F);

impl<F: fmt::Display> fmt::Display for Counted<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<F: Scalar> Add for Counted<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        bump(|c| c.additions += 1);
        Counted(self.0 + rhs.0)
    }
}

impl<F: Scalar> AddAssign for Counted<F> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<F: Scalar> Sub for Counted<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        bump(|c| c.subtractions += 1);
        Counted(self.0 - rhs.0)
    }
}

impl<F: Scalar> Mul for Counted<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        bump(|c| c.multiplications += 1);
        Counted(self.0 * rhs.0)
    }
}

impl<F: Scalar> Div for Counted<F> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        bump(|c| c.divisions += 1);
        Counted(self.0 / rhs.0)
    }
}

impl<F: Scalar> Rem for Counted<F> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        bump(|c| c.remainders += 1);
        Counted(self.0 % rhs.0)
    }
}

impl<F: Scalar + Neg<Output = F>> Neg for Counted<F> {
    type Output = Self;
    fn neg(self) -> Self {
        bump(|c| c.negations += 1);
        Counted(-self.0)
    }
}

impl<F: Scalar> Zero for Counted<F> {
    fn zero() -> Self {
        Counted(F::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl<F: Scalar> One for Counted<F> {
    fn one() -> Self {
        Counted(F::one())
    }
}

impl<F: Scalar> Num for Counted<F> {
    type FromStrRadixErr = F::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        F::from_str_radix(s, radix).map(Counted)
    }
}

impl<F: Scalar> ToPrimitive for Counted<F> {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }
}

impl<F: Scalar> NumCast for Counted<F> {
    fn from<T: ToPrimitive>(n: T) -> Option<Self> {
        <F as NumCast>::from(n).map(Counted)
    }
}

impl<F: Scalar> Scalar for Counted<F> {
    const PRECISION: Precision = F::PRECISION;

    fn abs(self) -> Self {
        Counted(self.0.abs())
    }

    fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    fn from_f64(x: f64) -> Self {
        Counted(F::from_f64(x))
    }

    fn as_f64(self) -> f64 {
        self.0.as_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tallies_each_operation() {
        let a = Counted(3.0f64);
        let b = Counted(2.0f64);
        let (r, c) = count_ops(|| (a + b) * b / a - b);
        assert_eq!(r.0, (3.0 + 2.0) * 2.0 / 3.0 - 2.0);
        assert_eq!(c.additions, 1);
        assert_eq!(c.multiplications, 1);
        assert_eq!(c.divisions, 1);
        assert_eq!(c.subtractions, 1);
    }

    #[test]
    fn comparisons_and_abs_are_free() {
        let (_, c) = count_ops(|| {
            let x = Counted(-1.5f32);
            let _ = x < Counted(0.0);
            x.abs()
        });
        assert_eq!(c, OpCounts::default());
    }
}
