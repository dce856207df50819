//! Extended GTH: the full mean first passage time matrix from `N` cyclic
//! rotations of the state labels.
//!
//! One GTH reduction of a process yields the column of passage times into
//! state 1. Rotating the labels so that state `k` comes first and repeating
//! yields column `k`. Like the stationary reduction, no subtraction is
//! performed anywhere.

use rayon::prelude::*;

use crate::error::Result;
use crate::gth::{reduce_matrix, ReductionTrace};
use crate::matrix::SquareMatrix;
use crate::model::{MarkovRenewalProcess, MfptMatrix, StationaryDistribution, StochasticMatrix};
use crate::scalar::Scalar;

/// Relabelling used for the `k`-th rotation (`k = 1..=N`): state `k` of the
/// original process becomes state 1, `k + 1` becomes 2, and so on cyclically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RotationScheme {
    n: usize,
    shift: usize,
}

impl RotationScheme {
    /// Rotation number `k` (1-based) of an `n`-state process.
    pub fn new(n: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= n.max(1), "rotation {k} outside 1..={n}");
        RotationScheme { n, shift: k - 1 }
    }

    pub fn k(&self) -> usize {
        self.shift + 1
    }

    /// Zero-based position in the rotated process of original state `i`.
    pub fn to_rotated(&self, i: usize) -> usize {
        (i + self.n - self.shift) % self.n
    }

    /// Zero-based original state sitting at rotated position `a`.
    pub fn to_original(&self, a: usize) -> usize {
        (a + self.shift) % self.n
    }

    pub fn rotate_matrix<T: Scalar>(&self, p: &SquareMatrix<T>) -> SquareMatrix<T> {
        SquareMatrix::from_fn(self.n, |a, b| p[(self.to_original(a), self.to_original(b))])
    }

    pub fn rotate_vector<T: Copy>(&self, v: &[T]) -> Vec<T> {
        (0..self.n).map(|a| v[self.to_original(a)]).collect()
    }
}

/// One cyclic shift: row and column 1 move to position `N`, and the holding
/// times move with them.
pub fn rotate<T: Scalar>(p: &StochasticMatrix<T>, mu: &[T]) -> (StochasticMatrix<T>, Vec<T>) {
    let scheme = RotationScheme::new(p.n(), 2.min(p.n()));
    (
        StochasticMatrix::from_matrix_unchecked(scheme.rotate_matrix(p.matrix())),
        scheme.rotate_vector(mu),
    )
}

/// Mean passage times into state 1 of the reduced process:
/// `(m_11, m_21, ..., m_N1)`.
///
/// Uses the level-2 closed form for `m_11`, `m_21 = mu_2 / S(2)`, and for
/// `n >= 3`
///
/// ```text
/// m_n1 = (p_n2 m_21 + ... + p_n,n-1 m_n-1,1 + mu_n) / S(n)
/// ```
///
/// with every `p`, `mu` and `S` taken at level `n`.
pub fn first_column_mfpt<T: Scalar>(trace: &ReductionTrace<T>) -> Vec<T> {
    let n = trace.states();
    let mut m = Vec::with_capacity(n);
    if n == 0 {
        return m;
    }
    let Some(p2) = trace.level2() else {
        m.push(trace.mu1());
        return m;
    };
    let mu2 = &trace.level(2).mu;
    let (p12, p21) = (p2[(0, 1)], p2[(1, 0)]);
    m.push((p21 * mu2[0] + p12 * mu2[1]) / p21);
    m.push(mu2[1] / trace.s(2));
    for level in 3..=n {
        let lvl = trace.level(level);
        let mm = (1..level - 1).fold(T::zero(), |acc, k| acc + lvl.row[k] * m[k]);
        m.push((mm + lvl.mu[level - 1]) / lvl.s);
    }
    m
}

/// Column `k` (1-based) of the passage-time matrix, in original labels.
fn column_by_rotation<T: Scalar>(mrp: &MarkovRenewalProcess<T>, k: usize) -> Result<Vec<T>> {
    let scheme = RotationScheme::new(mrp.n(), k);
    let p = scheme.rotate_matrix(mrp.p().matrix());
    let trace = if mrp.is_markov_chain() {
        reduce_matrix(&p, mrp.mu())
    } else {
        reduce_matrix(&p, &scheme.rotate_vector(mrp.mu()))
    }?;
    let rotated = first_column_mfpt(&trace);
    Ok((0..mrp.n()).map(|i| rotated[scheme.to_rotated(i)]).collect())
}

fn assemble<T: Scalar>(n: usize, columns: Vec<Vec<T>>) -> MfptMatrix<T> {
    MfptMatrix::new(SquareMatrix::from_fn(n, |i, j| columns[j][i]))
}

/// Full mean first passage time matrix of an irreducible process.
pub fn mfpt_egth<T: Scalar>(mrp: &MarkovRenewalProcess<T>) -> Result<MfptMatrix<T>> {
    let columns = (1..=mrp.n())
        .map(|k| column_by_rotation(mrp, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(mrp.n(), columns))
}

/// [`mfpt_egth`] with the rotations spread over the rayon pool. The result
/// is bitwise identical to the sequential version.
pub fn mfpt_egth_parallel<T: Scalar>(mrp: &MarkovRenewalProcess<T>) -> Result<MfptMatrix<T>> {
    let columns = (1..=mrp.n())
        .into_par_iter()
        .map(|k| column_by_rotation(mrp, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(mrp.n(), columns))
}

/// Stationary distribution from mean recurrence times.
///
/// For a Markov chain `pi_i = 1 / m_ii`. For a general process the
/// reciprocals are proportional to `pi` and are normalised to sum to one.
pub fn stationary_from_mfpt<T: Scalar>(
    m: &MfptMatrix<T>,
    mrp: &MarkovRenewalProcess<T>,
) -> StationaryDistribution<T> {
    let recip: Vec<T> = m.diagonal().into_iter().map(|d| T::one() / d).collect();
    if mrp.is_markov_chain() {
        return StationaryDistribution::new(recip);
    }
    let total = recip.iter().fold(T::zero(), |acc, &x| acc + x);
    StationaryDistribution::new(recip.into_iter().map(|x| x / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gth::reduce_fully;
    use crate::instrumented::{count_ops, Counted};
    use crate::model::validate_stochastic;

    fn mc(rows: &[&[f64]]) -> StochasticMatrix<f64> {
        let v: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        validate_stochastic(&v, 1e-12).unwrap()
    }

    #[test]
    fn rotate_moves_first_state_last() {
        let p = mc(&[&[0.1, 0.2, 0.7], &[0.3, 0.3, 0.4], &[0.5, 0.25, 0.25]]);
        let (r, mu) = rotate(&p, &[1.0, 2.0, 3.0]);
        assert_eq!(r[(2, 2)], 0.1);
        assert_eq!(r[(0, 0)], 0.3);
        assert_eq!(r[(2, 0)], 0.2);
        assert_eq!(mu, vec![2.0, 3.0, 1.0]);

        let mut q = p.clone();
        let mut m = vec![1.0, 2.0, 3.0];
        for _ in 0..3 {
            (q, m) = rotate(&q, &m);
        }
        assert_eq!(q, p);
        assert_eq!(m, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn rotation_scheme_matches_index_law() {
        // P_k(mod(row + N - 2, N) + 1, ...) = P_{k-1}(row, ...), 1-based.
        let n = 5;
        let p = SquareMatrix::from_fn(n, |i, j| (i * n + j) as f64);
        for k in 2..=n {
            let prev = RotationScheme::new(n, k - 1).rotate_matrix(&p);
            let next = RotationScheme::new(n, k).rotate_matrix(&p);
            for row in 1..=n {
                for col in 1..=n {
                    let (r2, c2) = ((row + n - 2) % n + 1, (col + n - 2) % n + 1);
                    assert_eq!(next[(r2 - 1, c2 - 1)], prev[(row - 1, col - 1)]);
                }
            }
        }
        let s = RotationScheme::new(n, 3);
        for i in 0..n {
            assert_eq!(s.to_original(s.to_rotated(i)), i);
        }
    }

    #[test]
    fn first_column_small_cases() {
        let cyc2 = MarkovRenewalProcess::markov_chain(mc(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert_eq!(first_column_mfpt(&reduce_fully(&cyc2).unwrap()), vec![2.0, 1.0]);

        let mrp = MarkovRenewalProcess::new(mc(&[&[0.0, 1.0], &[1.0, 0.0]]), vec![2.0, 3.0]).unwrap();
        assert_eq!(first_column_mfpt(&reduce_fully(&mrp).unwrap()), vec![5.0, 3.0]);

        let one = MarkovRenewalProcess::new(mc(&[&[1.0]]), vec![7.0]).unwrap();
        assert_eq!(first_column_mfpt(&reduce_fully(&one).unwrap()), vec![7.0]);
    }

    #[test]
    fn three_cycle_matrix() {
        let p = mc(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        let m = mfpt_egth(&MarkovRenewalProcess::markov_chain(p)).unwrap();
        assert_eq!(
            m.to_rows(),
            vec![vec![3.0, 1.0, 2.0], vec![2.0, 3.0, 1.0], vec![1.0, 2.0, 3.0]]
        );
    }

    #[test]
    fn stationary_from_recurrence_times() {
        let p = mc(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let chain = MarkovRenewalProcess::markov_chain(p.clone());
        let m = MfptMatrix::new(SquareMatrix::from_fn(2, |_, _| 2.0));
        assert_eq!(stationary_from_mfpt(&m, &chain).as_slice(), &[0.5, 0.5]);

        let mrp = MarkovRenewalProcess::new(p, vec![1.0, 3.0]).unwrap();
        let m = mfpt_egth(&mrp).unwrap();
        let pi = stationary_from_mfpt(&m, &mrp);
        assert!((pi[0] - 0.5).abs() < 1e-15 && (pi[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parallel_is_bitwise_sequential() {
        let p = mc(&[
            &[0.1, 0.2, 0.3, 0.4],
            &[0.25, 0.25, 0.25, 0.25],
            &[0.0, 0.5, 0.0, 0.5],
            &[0.7, 0.0, 0.3, 0.0],
        ]);
        let mrp = MarkovRenewalProcess::new(p, vec![0.5, 1.5, 2.0, 0.25]).unwrap();
        assert_eq!(mfpt_egth(&mrp).unwrap(), mfpt_egth_parallel(&mrp).unwrap());
    }

    #[test]
    fn egth_performs_no_subtraction() {
        let p = mc(&[
            &[0.1, 0.2, 0.3, 0.4],
            &[0.25, 0.25, 0.25, 0.25],
            &[0.0, 0.5, 0.0, 0.5],
            &[0.7, 0.0, 0.3, 0.0],
        ]);
        let mrp = MarkovRenewalProcess::new(p, vec![0.5, 1.5, 2.0, 0.25])
            .unwrap()
            .cast::<Counted<f64>>();
        let (m, ops) = count_ops(|| {
            let m = mfpt_egth(&mrp).unwrap();
            stationary_from_mfpt(&m, &mrp)
        });
        assert_eq!(m.len(), 4);
        assert_eq!(ops.subtractions + ops.negations, 0);
    }
}
