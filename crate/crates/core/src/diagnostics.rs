//! Residuals of computed solutions and single-versus-double comparisons.
//!
//! Residuals are evaluated in the scalar type of the solution, summing from
//! zero left to right. Comparisons between two precisions widen both sides
//! to `f64` first.

use crate::egth::{mfpt_egth, stationary_from_mfpt};
use crate::error::{Error, Result};
use crate::gth::stationary_gth;
use crate::model::{MarkovRenewalProcess, MfptMatrix, StationaryDistribution, StochasticMatrix};
use crate::scalar::Scalar;

/// Minimum, maximum and sum of the absolute elementwise residuals of
/// `m_ij = mu_i + sum_{k != j} p_ik m_kj`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MfptErrorReport {
    pub min_abs: f64,
    pub max_abs: f64,
    pub residual: f64,
}

/// Minimum, maximum and sum of `|pi_j - sum_i pi_i p_ij|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryErrorReport {
    pub min_abs: f64,
    pub max_abs: f64,
    pub residual: f64,
}

/// Elementwise comparison of a computed result against a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionComparison {
    pub min_abs: f64,
    pub max_abs: f64,
    /// Sum of absolute differences.
    pub relative_error: f64,
    /// Mean of `-log10 |(reference - computed) / reference|` over the
    /// entries that differ. `None` when every entry agrees exactly.
    pub accurate_digits: Option<f64>,
    /// 1-based `(row, column)` of every entry with zero difference. A
    /// vector is treated as a single column.
    pub excluded_pairs: Vec<(usize, usize)>,
}

struct Stats {
    min: f64,
    max: f64,
    sum: f64,
}

/// Min, max and left-to-right sum, accumulated in `T`.
fn stats<T: Scalar>(values: impl IntoIterator<Item = T>) -> Stats {
    let mut min: Option<T> = None;
    let mut max = T::zero();
    let mut sum = T::zero();
    for v in values {
        min = Some(match min {
            Some(m) if m <= v => m,
            _ => v,
        });
        if v > max {
            max = v;
        }
        sum += v;
    }
    Stats {
        min: min.unwrap_or_else(T::zero).as_f64(),
        max: max.as_f64(),
        sum: sum.as_f64(),
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Absolute residuals `|(m_ij - sum_{k != j} p_ik m_kj) - mu_i|`, row-major.
pub fn mfpt_residuals<T: Scalar>(m: &MfptMatrix<T>, mrp: &MarkovRenewalProcess<T>) -> Result<Vec<T>> {
    let n = mrp.n();
    check_dim(n, m.n())?;
    let p = mrp.p();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let sum = (0..n)
                .filter(|&k| k != j)
                .fold(T::zero(), |acc, k| acc + p[(i, k)] * m[(k, j)]);
            out.push((m[(i, j)] - sum - mrp.mu()[i]).abs());
        }
    }
    Ok(out)
}

pub fn mfpt_residual<T: Scalar>(m: &MfptMatrix<T>, mrp: &MarkovRenewalProcess<T>) -> Result<MfptErrorReport> {
    let s = stats(mfpt_residuals(m, mrp)?);
    Ok(MfptErrorReport {
        min_abs: s.min,
        max_abs: s.max,
        residual: s.sum,
    })
}

/// Absolute residuals `|pi_j - sum_i pi_i p_ij|`.
pub fn stationary_residuals<T: Scalar>(pi: &StationaryDistribution<T>, p: &StochasticMatrix<T>) -> Result<Vec<T>> {
    let n = p.n();
    check_dim(n, pi.len())?;
    Ok((0..n)
        .map(|j| {
            let sum = (0..n).fold(T::zero(), |acc, i| acc + pi[i] * p[(i, j)]);
            (pi[j] - sum).abs()
        })
        .collect())
}

pub fn stationary_residual<T: Scalar>(
    pi: &StationaryDistribution<T>,
    p: &StochasticMatrix<T>,
) -> Result<StationaryErrorReport> {
    let s = stats(stationary_residuals(pi, p)?);
    Ok(StationaryErrorReport {
        min_abs: s.min,
        max_abs: s.max,
        residual: s.sum,
    })
}

/// Compare entries given as `((row, col), reference, computed)`.
fn compare_entries(entries: impl IntoIterator<Item = ((usize, usize), f64, f64)>) -> PrecisionComparison {
    let mut diffs = Vec::new();
    let mut digits = Vec::new();
    let mut excluded_pairs = Vec::new();
    for ((i, j), reference, computed) in entries {
        let diff = reference - computed;
        diffs.push(diff.abs());
        if diff == 0.0 {
            excluded_pairs.push((i + 1, j + 1));
        } else {
            digits.push(-(diff / reference).abs().log10());
        }
    }
    let s = stats(diffs);
    let accurate_digits = (!digits.is_empty()).then(|| digits.iter().sum::<f64>() / digits.len() as f64);
    PrecisionComparison {
        min_abs: s.min,
        max_abs: s.max,
        relative_error: s.sum,
        accurate_digits,
        excluded_pairs,
    }
}

/// Accurate-digits comparison of two passage-time matrices, diagonal
/// included.
pub fn accurate_digits<A: Scalar, B: Scalar>(
    reference: &MfptMatrix<A>,
    computed: &MfptMatrix<B>,
) -> Result<PrecisionComparison> {
    let n = reference.n();
    check_dim(n, computed.n())?;
    Ok(compare_entries((0..n).flat_map(|i| {
        (0..n).map(move |j| ((i, j), reference[(i, j)].as_f64(), computed[(i, j)].as_f64()))
    })))
}

/// The same statistics for two stationary vectors.
pub fn compare_stationary<A: Scalar, B: Scalar>(
    reference: &StationaryDistribution<A>,
    computed: &StationaryDistribution<B>,
) -> Result<PrecisionComparison> {
    check_dim(reference.len(), computed.len())?;
    Ok(compare_entries(
        (0..reference.len()).map(|j| ((j, 0), reference[j].as_f64(), computed[j].as_f64())),
    ))
}

/// Every result and error statistic of one run at a fixed precision.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionRun<T> {
    pub mrp: MarkovRenewalProcess<T>,
    pub mfpt: MfptMatrix<T>,
    /// Reciprocal recurrence times.
    pub pi_egth: StationaryDistribution<T>,
    pub pi_gth: StationaryDistribution<T>,
    pub mfpt_errors: MfptErrorReport,
    pub egth_stationary_errors: StationaryErrorReport,
    pub gth_stationary_errors: StationaryErrorReport,
}

impl<T: Scalar> PrecisionRun<T> {
    pub fn new(mrp: MarkovRenewalProcess<T>) -> Result<Self> {
        let mfpt = mfpt_egth(&mrp)?;
        let pi_egth = stationary_from_mfpt(&mfpt, &mrp);
        let pi_gth = stationary_gth(mrp.p())?;
        Ok(PrecisionRun {
            mfpt_errors: mfpt_residual(&mfpt, &mrp)?,
            egth_stationary_errors: stationary_residual(&pi_egth, mrp.p())?,
            gth_stationary_errors: stationary_residual(&pi_gth, mrp.p())?,
            mrp,
            mfpt,
            pi_egth,
            pi_gth,
        })
    }
}

/// A binary64 and a binary32 run of the same process and the differences
/// between them.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionStudy {
    pub double: PrecisionRun<f64>,
    pub single: PrecisionRun<f32>,
    pub mfpt: PrecisionComparison,
    pub pi_egth: PrecisionComparison,
    pub pi_gth: PrecisionComparison,
}

/// Run the process in both precisions. The binary32 input is the binary64
/// input rounded entry by entry.
pub fn compare_precisions(mrp: &MarkovRenewalProcess<f64>) -> Result<PrecisionStudy> {
    let (double, single) = rayon::join(
        || PrecisionRun::new(mrp.clone()),
        || PrecisionRun::new(mrp.cast::<f32>()),
    );
    let (double, single) = (double?, single?);
    Ok(PrecisionStudy {
        mfpt: accurate_digits(&double.mfpt, &single.mfpt)?,
        pi_egth: compare_stationary(&double.pi_egth, &single.pi_egth)?,
        pi_gth: compare_stationary(&double.pi_gth, &single.pi_gth)?,
        double,
        single,
    })
}
