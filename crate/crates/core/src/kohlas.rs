//! The ladder recursion for passage times into a fixed target state, and the
//! full-matrix assembly built on it.
//!
//! For target `n`, the ladder starts from the leading `(n-1) x (n-1)` block
//! of the level-`n` matrix and holding times, then eliminates states
//! `n-1, n-2, ..., 2` one at a time:
//!
//! ```text
//! q^(t-1)_ik = q^(t)_ik + q^(t)_it q^(t)_tk / R(t)
//! v^(t-1)_i  = v^(t)_i  + q^(t)_it v^(t)_t  / R(t)
//! R(t)       = 1 - q^(t)_tt
//! ```
//!
//! `R(t)` is a genuine subtraction. This path is therefore less accurate
//! than [`crate::egth`] on nearly decomposable chains.

use crate::error::{Error, Result};
use crate::gth::{level_sequence, sum_left_to_right};
use crate::matrix::SquareMatrix;
use crate::model::{MarkovRenewalProcess, MfptMatrix};
use crate::scalar::Scalar;

/// A pivot `R(t)` that is positive but below `epsilon * n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TinyPivot {
    /// Target state (1-based).
    pub target: usize,
    /// Ladder level `t` (1-based).
    pub level: usize,
    pub value: f64,
}

/// Ladder data for one target state `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct QvLadder<T> {
    target: usize,
    /// `q[t - 1]` is the `t x t` matrix `q^(t)`.
    q: Vec<SquareMatrix<T>>,
    /// `v[t - 1]` is the length-`t` vector `v^(t)`.
    v: Vec<Vec<T>>,
    /// `r[t - 1] = R(t)`.
    r: Vec<T>,
    tiny_pivots: Vec<TinyPivot>,
}

impl<T: Scalar> QvLadder<T> {
    /// Target state `n` (1-based).
    pub fn target(&self) -> usize {
        self.target
    }

    /// `q^(t)` for `1 <= t <= n - 1`.
    pub fn q(&self, t: usize) -> &SquareMatrix<T> {
        &self.q[t - 1]
    }

    /// `v^(t)` for `1 <= t <= n - 1`.
    pub fn v(&self, t: usize) -> &[T] {
        &self.v[t - 1]
    }

    /// `R(1), ..., R(n - 1)`.
    pub fn r_values(&self) -> &[T] {
        &self.r
    }

    pub fn tiny_pivots(&self) -> &[TinyPivot] {
        &self.tiny_pivots
    }
}

/// Build the full ladder for the last state of a level matrix.
///
/// Fails with [`Error::SingularPivot`] when some `R(t) <= 0`.
pub fn build_ladder<T: Scalar>(p: &SquareMatrix<T>, mu: &[T]) -> Result<QvLadder<T>> {
    let n = p.dim();
    assert!(n >= 2, "a ladder needs at least two states");
    assert_eq!(mu.len(), n, "holding times must match the level");
    let tiny = T::PRECISION.epsilon() * n as f64;

    let mut q_rev = vec![p.leading_block(n - 1)];
    let mut v_rev = vec![mu[..n - 1].to_vec()];
    let mut r_rev = Vec::with_capacity(n - 1);
    let mut tiny_pivots = Vec::new();

    for t in (1..n).rev() {
        let q = q_rev.last().expect("ladder is never empty");
        let v = v_rev.last().expect("ladder is never empty");
        let last = t - 1;
        let r = T::one() - q[(last, last)];
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(r > T::zero()) {
            return Err(Error::SingularPivot { target: n, level: t });
        }
        if r.as_f64() < tiny {
            tiny_pivots.push(TinyPivot {
                target: n,
                level: t,
                value: r.as_f64(),
            });
        }
        r_rev.push(r);
        if t > 1 {
            let next_q = SquareMatrix::from_fn(last, |i, k| q[(i, k)] + q[(i, last)] * q[(last, k)] / r);
            let next_v = (0..last).map(|i| v[i] + q[(i, last)] * v[last] / r).collect();
            q_rev.push(next_q);
            v_rev.push(next_v);
        }
    }

    q_rev.reverse();
    v_rev.reverse();
    r_rev.reverse();
    Ok(QvLadder {
        target: n,
        q: q_rev,
        v: v_rev,
        r: r_rev,
        tiny_pivots,
    })
}

/// Passage times `(m_1n, ..., m_n-1,n)` into the ladder's target:
///
/// ```text
/// m_1n = v^(1)_1 / R(1)
/// m_in = (v^(i)_i + sum_{k<i} q^(i)_ik m_kn) / R(i)
/// ```
pub fn column_into_n<T: Scalar>(ladder: &QvLadder<T>) -> Vec<T> {
    let len = ladder.r.len();
    let mut m: Vec<T> = Vec::with_capacity(len);
    for i in 0..len {
        let q = &ladder.q[i];
        let acc = (0..i).fold(ladder.v[i][i], |acc, k| acc + q[(i, k)] * m[k]);
        m.push(acc / ladder.r[i]);
    }
    m
}

/// Full passage-time matrix by the three-case recursion: ladders above the
/// diagonal, recurrence times on it, and censored-level sums below it.
pub fn theorem7_mfpt<T: Scalar>(mrp: &MarkovRenewalProcess<T>) -> Result<MfptMatrix<T>> {
    theorem7_with_diagnostics(mrp).map(|(m, _)| m)
}

/// [`theorem7_mfpt`] together with every tiny pivot met along the way.
pub fn theorem7_with_diagnostics<T: Scalar>(
    mrp: &MarkovRenewalProcess<T>,
) -> Result<(MfptMatrix<T>, Vec<TinyPivot>)> {
    let n = mrp.n();
    let levels = level_sequence(mrp)?;
    // levels[n - i] is the level-i process.
    let level = |i: usize| &levels[n - i];
    let s: Vec<T> = (1..=n)
        .map(|i| {
            let (p, _) = level(i);
            sum_left_to_right(&p.row(i - 1)[..i - 1])
        })
        .collect();

    let mut m = SquareMatrix::filled(n, T::zero());
    let mut warnings = Vec::new();
    for j in 0..n {
        if j > 0 {
            let (p, mu) = level(j + 1);
            let ladder = build_ladder(p, mu)?;
            warnings.extend_from_slice(ladder.tiny_pivots());
            for (i, value) in column_into_n(&ladder).into_iter().enumerate() {
                m[(i, j)] = value;
            }
        }

        let (p, mu) = level(j + 1);
        m[(j, j)] = (0..j).fold(mu[j], |acc, k| acc + p[(j, k)] * m[(k, j)]);

        for i in j + 1..n {
            let (p, mu) = level(i + 1);
            let acc = (0..i)
                .filter(|&k| k != j)
                .fold(mu[i], |acc, k| acc + p[(i, k)] * m[(k, j)]);
            m[(i, j)] = acc / s[i];
        }
    }
    Ok((MfptMatrix::new(m), warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_stochastic, StochasticMatrix};

    fn mc(rows: &[&[f64]]) -> StochasticMatrix<f64> {
        let v: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        validate_stochastic(&v, 1e-12).unwrap()
    }

    #[test]
    fn two_state_ladder() {
        let p = mc(&[&[0.25, 0.75], &[0.5, 0.5]]);
        let ladder = build_ladder(p.matrix(), &[1.0, 1.0]).unwrap();
        assert_eq!(ladder.q(1).to_rows(), vec![vec![0.25]]);
        assert_eq!(ladder.v(1), &[1.0]);
        assert_eq!(ladder.r_values(), &[0.75]);
        assert_eq!(column_into_n(&ladder), vec![1.0 / 0.75]);

        let swap = mc(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let ladder = build_ladder(swap.matrix(), &[1.0, 1.0]).unwrap();
        assert_eq!(column_into_n(&ladder), vec![1.0]);
    }

    #[test]
    fn three_cycle_ladder() {
        let p = mc(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        let ladder = build_ladder(p.matrix(), &[1.0; 3]).unwrap();
        assert_eq!(ladder.r_values(), &[1.0, 1.0]);
        assert_eq!(column_into_n(&ladder), vec![2.0, 1.0]);
        assert!(ladder.tiny_pivots().is_empty());
    }

    #[test]
    fn four_state_second_rung() {
        let p = mc(&[
            &[0.1, 0.2, 0.3, 0.4],
            &[0.25, 0.25, 0.25, 0.25],
            &[0.2, 0.5, 0.1, 0.2],
            &[0.7, 0.0, 0.3, 0.0],
        ]);
        let ladder = build_ladder(p.matrix(), &[1.0; 4]).unwrap();
        assert_eq!(ladder.q(3), &p.matrix().leading_block(3));
        let q2 = ladder.q(2);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(q2[(i, j)], p[(i, j)] + p[(i, 2)] * p[(2, j)] / (1.0 - p[(2, 2)]));
            }
        }
    }

    #[test]
    fn singular_pivot_is_reported() {
        // State 1 only feeds itself within the leading block.
        let p = mc(&[&[1.0, 0.0, 0.0], &[0.5, 0.0, 0.5], &[0.0, 1.0, 0.0]]);
        let err = build_ladder(p.matrix(), &[1.0; 3]).unwrap_err();
        assert_eq!(err, Error::SingularPivot { target: 3, level: 1 });
    }

    #[test]
    fn theorem7_small_matrices() {
        let p = mc(&[&[0.5, 0.5], &[0.25, 0.75]]);
        let m = theorem7_mfpt(&MarkovRenewalProcess::markov_chain(p)).unwrap();
        assert_eq!(m.to_rows(), vec![vec![3.0, 2.0], vec![4.0, 1.5]]);

        let cyc = mc(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        let m = theorem7_mfpt(&MarkovRenewalProcess::markov_chain(cyc)).unwrap();
        assert_eq!(
            m.to_rows(),
            vec![vec![3.0, 1.0, 2.0], vec![2.0, 3.0, 1.0], vec![1.0, 2.0, 3.0]]
        );

        let one = MarkovRenewalProcess::new(mc(&[&[1.0]]), vec![7.0]).unwrap();
        assert_eq!(theorem7_mfpt(&one).unwrap().to_rows(), vec![vec![7.0]]);
    }
}
