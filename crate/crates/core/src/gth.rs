//! GTH state reduction.
//!
//! States are eliminated highest index first. Eliminating state `n` from the
//! level-`n` chain gives the censored chain on states `1..n-1`:
//!
//! ```text
//! p'_ij = p_ij + p_in p_nj / S(n)        S(n) = p_n1 + ... + p_n,n-1
//! mu'_i = mu_i + mu_n p_in / S(n)
//! ```
//!
//! `S(n)` is always formed as that sum, never as `1 - p_nn`, so the whole
//! reduction and the stationary back-substitution use only additions,
//! multiplications and divisions of non-negative numbers.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::model::{MarkovRenewalProcess, StationaryDistribution, StochasticMatrix};
use crate::scalar::Scalar;

/// Boundary data retained when state `level` is eliminated.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionLevel<T> {
    /// Number of states in the chain before this elimination (`n`).
    pub level: usize,
    /// Last row without its diagonal: `p_n1 .. p_n,n-1`.
    pub row: Vec<T>,
    /// Last column without its diagonal: `p_1n .. p_n-1,n`.
    pub col: Vec<T>,
    /// `S(n)`, the left-to-right sum of `row`.
    pub s: T,
    /// Holding times `mu_1 .. mu_n` of the level-`n` process.
    pub mu: Vec<T>,
}

/// Output of one elimination.
#[derive(Debug, Clone, PartialEq)]
pub struct CensorStep<T> {
    /// Transition matrix of the censored chain on `n - 1` states.
    pub p: SquareMatrix<T>,
    /// Holding times of the censored process.
    pub mu: Vec<T>,
    pub boundary: ReductionLevel<T>,
}

/// Everything the stationary and first-passage recursions need from a full
/// reduction of an `N`-state process.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTrace<T> {
    n: usize,
    /// Levels `N, N-1, ..., 2` in elimination order.
    levels: Vec<ReductionLevel<T>>,
    /// The level-2 matrix in full, when `N >= 2`.
    level2: Option<SquareMatrix<T>>,
    /// `mu_1` of the single-state process left at the end.
    mu1: T,
}

/// Sum a slice left to right.
pub(crate) fn sum_left_to_right<T: Scalar>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |acc, &x| acc + x)
}

/// Eliminate the last state of a level matrix.
///
/// Fails with [`Error::AbsorbingLastState`] when `S(n) = 0`, which can only
/// happen for reducible input.
pub fn censor_step<T: Scalar>(p: &SquareMatrix<T>, mu: &[T]) -> Result<CensorStep<T>> {
    let n = p.dim();
    assert!(n >= 2, "censor_step needs at least two states");
    assert_eq!(mu.len(), n, "holding times must match the level");
    let last = n - 1;

    let row: Vec<T> = p.row(last)[..last].to_vec();
    let col: Vec<T> = (0..last).map(|i| p[(i, last)]).collect();
    let s = sum_left_to_right(&row);
    // Negated so that a NaN sum is rejected as well.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(s > T::zero()) {
        return Err(Error::AbsorbingLastState { level: n });
    }

    let reduced = SquareMatrix::from_fn(last, |i, j| p[(i, j)] + p[(i, last)] * p[(last, j)] / s);
    let mu_last = mu[last];
    let reduced_mu = (0..last).map(|i| mu[i] + mu_last * p[(i, last)] / s).collect();

    Ok(CensorStep {
        p: reduced,
        mu: reduced_mu,
        boundary: ReductionLevel {
            level: n,
            row,
            col,
            s,
            mu: mu.to_vec(),
        },
    })
}

/// Successive level matrices `P^(N), P^(N-1), ..., P^(1)` with their holding
/// times.
pub(crate) fn level_sequence<T: Scalar>(
    mrp: &MarkovRenewalProcess<T>,
) -> Result<Vec<(SquareMatrix<T>, Vec<T>)>> {
    let mut out = Vec::with_capacity(mrp.n());
    let mut p = mrp.p().matrix().clone();
    let mut mu = mrp.mu().to_vec();
    while p.dim() >= 2 {
        let step = censor_step(&p, &mu)?;
        out.push((p, mu));
        p = step.p;
        mu = step.mu;
    }
    out.push((p, mu));
    Ok(out)
}

/// Reduce an irreducible process all the way down to one state.
pub fn reduce_fully<T: Scalar>(mrp: &MarkovRenewalProcess<T>) -> Result<ReductionTrace<T>> {
    reduce_matrix(mrp.p().matrix(), mrp.mu())
}

pub(crate) fn reduce_matrix<T: Scalar>(p: &SquareMatrix<T>, mu: &[T]) -> Result<ReductionTrace<T>> {
    let n = p.dim();
    let mut levels = Vec::with_capacity(n.saturating_sub(1));
    let mut level2 = None;
    let mut p = p.clone();
    let mut mu = mu.to_vec();
    while p.dim() >= 2 {
        if p.dim() == 2 {
            level2 = Some(p.clone());
        }
        let step = censor_step(&p, &mu)?;
        levels.push(step.boundary);
        p = step.p;
        mu = step.mu;
    }
    Ok(ReductionTrace {
        n,
        levels,
        level2,
        mu1: mu[0],
    })
}

impl<T: Scalar> ReductionTrace<T> {
    pub fn states(&self) -> usize {
        self.n
    }

    /// Retained data for level `n` (`2 <= n <= N`).
    pub fn level(&self, n: usize) -> &ReductionLevel<T> {
        assert!(n >= 2 && n <= self.n, "level {n} outside 2..={}", self.n);
        &self.levels[self.n - n]
    }

    /// Levels in elimination order, `N` first.
    pub fn levels(&self) -> &[ReductionLevel<T>] {
        &self.levels
    }

    /// `S(n)` for `2 <= n <= N`.
    pub fn s(&self, n: usize) -> T {
        self.level(n).s
    }

    /// The full `2 x 2` matrix `P^(2)`.
    pub fn level2(&self) -> Option<&SquareMatrix<T>> {
        self.level2.as_ref()
    }

    /// Holding time of the single state left after full reduction.
    pub fn mu1(&self) -> T {
        self.mu1
    }

    /// Unnormalised stationary weights: `r_1 = 1` and
    /// `r_n = (sum_{i<n} r_i p_in^(n)) / S(n)`.
    pub fn r_values(&self) -> Vec<T> {
        let mut r = Vec::with_capacity(self.n);
        if self.n == 0 {
            return r;
        }
        r.push(T::one());
        for n in 2..=self.n {
            let lvl = self.level(n);
            let acc = r
                .iter()
                .zip(&lvl.col)
                .fold(T::zero(), |acc, (&ri, &pin)| acc + ri * pin);
            r.push(acc / lvl.s);
        }
        r
    }
}

/// Stationary distribution of an irreducible chain by GTH reduction.
pub fn stationary_gth<T: Scalar>(p: &StochasticMatrix<T>) -> Result<StationaryDistribution<T>> {
    let ones = vec![T::one(); p.n()];
    let trace = reduce_matrix(p.matrix(), &ones)?;
    reduced_stationary(&trace, p.n())
}

/// Stationary distribution of the censored chain on states `1..=n`: the
/// first `n` weights of the full chain, renormalised.
pub fn reduced_stationary<T: Scalar>(trace: &ReductionTrace<T>, n: usize) -> Result<StationaryDistribution<T>> {
    if n == 0 || n > trace.states() {
        return Err(Error::LevelOutOfRange {
            level: n,
            states: trace.states(),
        });
    }
    let r = trace.r_values();
    let total = sum_left_to_right(&r[..n]);
    Ok(StationaryDistribution::new(r[..n].iter().map(|&ri| ri / total).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instrumented::{count_ops, Counted};
    use crate::model::validate_stochastic;

    fn sq(rows: &[&[f64]]) -> SquareMatrix<f64> {
        SquareMatrix::from_fn(rows.len(), |i, j| rows[i][j])
    }

    fn mc(rows: &[&[f64]]) -> StochasticMatrix<f64> {
        let v: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        validate_stochastic(&v, 1e-12).unwrap()
    }

    #[test]
    fn censor_two_cycle() {
        let step = censor_step(&sq(&[&[0.0, 1.0], &[1.0, 0.0]]), &[1.0, 1.0]).unwrap();
        assert_eq!(step.p.to_rows(), vec![vec![1.0]]);
        assert_eq!(step.mu, vec![2.0]);
        assert_eq!(step.boundary.s, 1.0);
    }

    #[test]
    fn censor_three_cycle() {
        let p = sq(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        let step = censor_step(&p, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(step.p.to_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(step.mu, vec![1.0, 2.0]);
    }

    #[test]
    fn censor_tp3_first_step() {
        let p = sq(&[
            &[0.999999, 1.0e-7, 2.0e-7, 3.0e-7, 4.0e-7],
            &[0.4, 0.3, 0.0, 0.0, 0.3],
            &[5.0e-7, 0.0, 0.999999, 0.0, 5.0e-7],
            &[5.0e-7, 0.0, 0.0, 0.999999, 5.0e-7],
            &[2.0e-7, 3.0e-7, 1.0e-7, 4.0e-7, 0.999999],
        ]);
        let step = censor_step(&p, &[1.0; 5]).unwrap();
        let s5 = ((2.0e-7 + 3.0e-7) + 1.0e-7) + 4.0e-7;
        assert_eq!(step.boundary.s, s5);
        assert_eq!(step.p[(0, 0)], 0.999999 + 4.0e-7 * 2.0e-7 / s5);
        // Exact value 0.999999 + 8e-14 / 1e-6 = 0.99999908.
        assert!((step.p[(0, 0)] - 0.99999908).abs() < 1e-15);
    }

    #[test]
    fn absorbing_last_state_is_reported() {
        let p = sq(&[&[0.5, 0.5], &[0.0, 1.0]]);
        assert_eq!(censor_step(&p, &[1.0, 1.0]), Err(Error::AbsorbingLastState { level: 2 }));
        let mrp = MarkovRenewalProcess::markov_chain(mc(&[
            &[0.5, 0.5, 0.0],
            &[0.0, 0.5, 0.5],
            &[0.0, 0.0, 1.0],
        ]));
        assert_eq!(reduce_fully(&mrp), Err(Error::AbsorbingLastState { level: 3 }));
    }

    #[test]
    fn trace_shapes() {
        let two = MarkovRenewalProcess::markov_chain(mc(&[&[0.5, 0.5], &[0.25, 0.75]]));
        let t = reduce_fully(&two).unwrap();
        assert_eq!(t.levels().len(), 1);
        assert_eq!(t.s(2), 0.25);
        assert_eq!(t.level2().unwrap().to_rows(), vec![vec![0.5, 0.5], vec![0.25, 0.75]]);

        let cyc = MarkovRenewalProcess::markov_chain(mc(&[
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0],
        ]));
        let t = reduce_fully(&cyc).unwrap();
        assert_eq!((t.s(3), t.s(2)), (1.0, 1.0));
        assert_eq!(t.mu1(), 3.0);

        let one = MarkovRenewalProcess::markov_chain(mc(&[&[1.0]]));
        let t = reduce_fully(&one).unwrap();
        assert!(t.levels().is_empty() && t.level2().is_none());
        assert_eq!(t.mu1(), 1.0);
    }

    #[test]
    fn two_state_stationary() {
        let pi = stationary_gth(&mc(&[&[0.5, 0.5], &[0.25, 0.75]])).unwrap();
        assert_eq!(pi.as_slice(), &[1.0 / 3.0, 2.0 / 3.0]);
    }

    #[test]
    fn reduced_stationary_edges() {
        let p = mc(&[&[0.2, 0.3, 0.5], &[0.6, 0.1, 0.3], &[0.3, 0.3, 0.4]]);
        let trace = reduce_fully(&MarkovRenewalProcess::markov_chain(p.clone())).unwrap();
        assert_eq!(reduced_stationary(&trace, 3).unwrap(), stationary_gth(&p).unwrap());
        assert_eq!(reduced_stationary(&trace, 1).unwrap().as_slice(), &[1.0]);
        assert!(reduced_stationary(&trace, 0).is_err());
        assert!(reduced_stationary(&trace, 4).is_err());
    }

    #[test]
    fn no_subtractions_in_gth() {
        let p = mc(&[&[0.2, 0.3, 0.5], &[0.6, 0.1, 0.3], &[0.3, 0.3, 0.4]]).cast::<Counted<f64>>();
        let (pi, ops) = count_ops(|| stationary_gth(&p).unwrap());
        assert_eq!(pi.len(), 3);
        assert_eq!(ops.subtractions, 0);
        assert_eq!(ops.negations, 0);
        assert!(ops.divisions > 0);
    }
}
