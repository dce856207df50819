//! Explicit formulas for processes with one to four states.
//!
//! These are used as independent oracles for the reduction algorithms.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::model::{check_irreducible, MarkovRenewalProcess, MfptMatrix, StationaryDistribution, StochasticMatrix};
use crate::scalar::Scalar;

fn expect_states<T: Scalar>(p: &StochasticMatrix<T>, n: usize) -> Result<()> {
    if p.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.n(),
        });
    }
    Ok(())
}

/// The three cofactor sums of a 3-state chain:
///
/// ```text
/// d1 = p21 p31 + p21 p32 + p23 p31
/// d2 = p12 p31 + p12 p32 + p13 p32
/// d3 = p13 p21 + p12 p23 + p13 p23
/// ```
///
/// The chain is irreducible iff all three are positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaTriple<T> {
    pub d1: T,
    pub d2: T,
    pub d3: T,
}

impl<T: Scalar> DeltaTriple<T> {
    pub fn new(p: &StochasticMatrix<T>) -> Result<Self> {
        expect_states(p, 3)?;
        let q = |i: usize, j: usize| p[(i - 1, j - 1)];
        Ok(DeltaTriple {
            d1: q(2, 1) * q(3, 1) + q(2, 1) * q(3, 2) + q(2, 3) * q(3, 1),
            d2: q(1, 2) * q(3, 1) + q(1, 2) * q(3, 2) + q(1, 3) * q(3, 2),
            d3: q(1, 3) * q(2, 1) + q(1, 2) * q(2, 3) + q(1, 3) * q(2, 3),
        })
    }

    /// `d1 + d2 + d3`.
    pub fn d(&self) -> T {
        self.d1 + self.d2 + self.d3
    }

    pub fn is_irreducible(&self) -> bool {
        self.d1 > T::zero() && self.d2 > T::zero() && self.d3 > T::zero()
    }

    fn irreducible(p: &StochasticMatrix<T>) -> Result<Self> {
        let delta = Self::new(p)?;
        if delta.is_irreducible() {
            Ok(delta)
        } else {
            Err(Error::Reducible)
        }
    }
}

/// `[[mu1]]`.
pub fn mfpt_1<T: Scalar>(mu1: T) -> MfptMatrix<T> {
    MfptMatrix::new(SquareMatrix::filled(1, mu1))
}

/// ```text
/// [[mu1 + (p12/p21) mu2, mu1/p12],
///  [mu2/p21,             (p21/p12) mu1 + mu2]]
/// ```
pub fn mfpt_2<T: Scalar>(mrp: &MarkovRenewalProcess<T>) -> Result<MfptMatrix<T>> {
    let p = mrp.p();
    expect_states(p, 2)?;
    let (p12, p21) = (p[(0, 1)], p[(1, 0)]);
    if !(p12 > T::zero() && p21 > T::zero()) {
        return Err(Error::Reducible);
    }
    let (mu1, mu2) = (mrp.mu()[0], mrp.mu()[1]);
    let m = [
        [mu1 + (p12 / p21) * mu2, mu1 / p12],
        [mu2 / p21, (p21 / p12) * mu1 + mu2],
    ];
    Ok(MfptMatrix::new(SquareMatrix::from_fn(2, |i, j| m[i][j])))
}

/// `pi_i = d_i / d`.
pub fn stationary_3<T: Scalar>(p: &StochasticMatrix<T>) -> Result<StationaryDistribution<T>> {
    let delta = DeltaTriple::irreducible(p)?;
    let d = delta.d();
    Ok(StationaryDistribution::new(vec![delta.d1 / d, delta.d2 / d, delta.d3 / d]))
}

/// Full 3-state passage-time matrix in terms of `p` and `mu`.
pub fn mfpt_3<T: Scalar>(mrp: &MarkovRenewalProcess<T>) -> Result<MfptMatrix<T>> {
    let p = mrp.p();
    let DeltaTriple { d1, d2, d3 } = DeltaTriple::irreducible(p)?;
    let q = |i: usize, j: usize| p[(i - 1, j - 1)];
    let (mu1, mu2, mu3) = (mrp.mu()[0], mrp.mu()[1], mrp.mu()[2]);
    let lambda = d1 * mu1 + d2 * mu2 + d3 * mu3;
    let m = [
        [
            lambda / d1,
            ((q(3, 1) + q(3, 2)) * mu1 + q(1, 3) * mu3) / d2,
            ((q(2, 1) + q(2, 3)) * mu1 + q(1, 2) * mu2) / d3,
        ],
        [
            ((q(3, 1) + q(3, 2)) * mu2 + q(2, 3) * mu3) / d1,
            lambda / d2,
            (q(2, 1) * mu1 + (q(1, 2) + q(1, 3)) * mu2) / d3,
        ],
        [
            (q(3, 2) * mu2 + (q(2, 1) + q(2, 3)) * mu3) / d1,
            (q(3, 1) * mu1 + (q(1, 2) + q(1, 3)) * mu3) / d2,
            lambda / d3,
        ],
    ];
    Ok(MfptMatrix::new(SquareMatrix::from_fn(3, |i, j| m[i][j])))
}

/// The Markov-chain form of [`mfpt_3`], written directly in `p`. Its sums
/// are grouped as in [`mfpt_3`] so that both agree bit for bit at `mu = 1`.
pub fn mfpt_3_markov_chain<T: Scalar>(p: &StochasticMatrix<T>) -> Result<MfptMatrix<T>> {
    let delta = DeltaTriple::irreducible(p)?;
    let DeltaTriple { d1, d2, d3 } = delta;
    let d = delta.d();
    let q = |i: usize, j: usize| p[(i - 1, j - 1)];
    let m = [
        [
            d / d1,
            ((q(3, 1) + q(3, 2)) + q(1, 3)) / d2,
            ((q(2, 1) + q(2, 3)) + q(1, 2)) / d3,
        ],
        [
            ((q(3, 1) + q(3, 2)) + q(2, 3)) / d1,
            d / d2,
            (q(2, 1) + (q(1, 2) + q(1, 3))) / d3,
        ],
        [
            (q(3, 2) + (q(2, 1) + q(2, 3))) / d1,
            (q(3, 1) + (q(1, 2) + q(1, 3))) / d2,
            d / d3,
        ],
    ];
    Ok(MfptMatrix::new(SquareMatrix::from_fn(3, |i, j| m[i][j])))
}

/// Passage times `(m_14, m_24, m_34)` into state 4 of a 4-state process.
///
/// With `c = 1 - p33`:
///
/// ```text
/// m_14 = N14 / D14
/// N14  = (1 - p22 - p23 p32/c)(mu1 + p13 mu3/c) + (p12 + p13 p32/c)(mu2 + p23 mu3/c)
/// D14  = (1 - p11 - p13 p31/c)(1 - p22 - p23 p32/c) - (p12 + p13 p32/c)(p21 + p23 p31/c)
/// m_24 = ([p21 c + p23 p31] m_14 + [mu2 c + mu3 p23]) / ((1 - p22) c - p23 p32)
/// m_34 = (p31 m_14 + p32 m_24 + mu3) / (p31 + p32 + p34)
/// ```
pub fn mfpt_4_column<T: Scalar>(mrp: &MarkovRenewalProcess<T>) -> Result<[T; 3]> {
    let p = mrp.p();
    expect_states(p, 4)?;
    if !check_irreducible(p) {
        return Err(Error::Reducible);
    }
    let q = |i: usize, j: usize| p[(i - 1, j - 1)];
    let mu = |i: usize| mrp.mu()[i - 1];
    let one = T::one();

    let c = one - q(3, 3);
    let a = one - q(2, 2) - q(2, 3) * q(3, 2) / c;
    let b = one - q(1, 1) - q(1, 3) * q(3, 1) / c;
    let q12 = q(1, 2) + q(1, 3) * q(3, 2) / c;
    let q21 = q(2, 1) + q(2, 3) * q(3, 1) / c;
    let v1 = mu(1) + q(1, 3) * mu(3) / c;
    let v2 = mu(2) + q(2, 3) * mu(3) / c;

    let n14 = a * v1 + q12 * v2;
    let d14 = b * a - q12 * q21;
    let m14 = n14 / d14;
    let m24 = ((q(2, 1) * c + q(2, 3) * q(3, 1)) * m14 + (mu(2) * c + mu(3) * q(2, 3)))
        / ((one - q(2, 2)) * c - q(2, 3) * q(3, 2));
    let m34 = (q(3, 1) * m14 + q(3, 2) * m24 + mu(3)) / (q(3, 1) + q(3, 2) + q(3, 4));
    Ok([m14, m24, m34])
}
