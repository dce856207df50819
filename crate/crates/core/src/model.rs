//! Domain types for finite Markov chains and Markov renewal processes.
//!
//! A Markov renewal process (MRP) is an embedded transition matrix paired
//! with a vector of mean holding times; a discrete-time Markov chain is the
//! special case where every holding time is one.

use std::ops::Index;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::scalar::Scalar;

/// A validated row-stochastic transition matrix.
///
/// Entries are stored exactly as supplied; rows are never renormalised.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix<T> {
    p: SquareMatrix<T>,
}

/// Validate a square array of transition probabilities.
///
/// Every entry must be finite and non-negative, and every row must sum to
/// one within `tol` (the sum is formed in binary64). The stored matrix is
/// bit-identical to `entries`.
pub fn validate_stochastic<T: Scalar>(entries: &[Vec<T>], tol: f64) -> Result<StochasticMatrix<T>> {
    let n = entries.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    for (i, row) in entries.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotSquare {
                row: i + 1,
                len: row.len(),
                expected: n,
            });
        }
    }
    let p = SquareMatrix::from_fn(n, |i, j| entries[i][j]);
    StochasticMatrix::from_matrix(p, tol)
}

impl<T: Scalar> StochasticMatrix<T> {
    /// Validate an already-assembled square matrix (see [`validate_stochastic`]).
    pub fn from_matrix(p: SquareMatrix<T>, tol: f64) -> Result<Self> {
        let n = p.dim();
        if n == 0 {
            return Err(Error::Empty);
        }
        for i in 0..n {
            let mut sum = 0.0f64;
            for j in 0..n {
                let v = p[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFiniteEntry { row: i + 1, col: j + 1 });
                }
                if v < T::zero() {
                    return Err(Error::NegativeEntry {
                        row: i + 1,
                        col: j + 1,
                        value: v.as_f64(),
                    });
                }
                sum += v.as_f64();
            }
            if (sum - 1.0).abs() > tol {
                return Err(Error::RowSumOutOfTolerance { state: i + 1, sum });
            }
        }
        Ok(StochasticMatrix { p })
    }

    /// Validate with the default tolerance of `T`'s precision regime.
    pub fn new(entries: &[Vec<T>]) -> Result<Self> {
        validate_stochastic(entries, T::PRECISION.stochastic_tolerance())
    }

    pub fn n(&self) -> usize {
        self.p.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix<T> {
        &self.p
    }

    pub fn row(&self, i: usize) -> &[T] {
        self.p.row(i)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.p.to_rows()
    }

    /// Round every entry to another scalar type. The result is not
    /// re-validated: rounding moves row sums by at most a few units in the
    /// last place of `U`.
    pub fn cast<U: Scalar>(&self) -> StochasticMatrix<U> {
        StochasticMatrix { p: self.p.cast() }
    }

    /// Reorder states: entry `(a, b)` of the result is entry
    /// `(order[a], order[b])` of `self`. `order` must be a permutation.
    pub fn permuted(&self, order: &[usize]) -> StochasticMatrix<T> {
        assert_eq!(order.len(), self.n());
        StochasticMatrix {
            p: SquareMatrix::from_fn(self.n(), |a, b| self.p[(order[a], order[b])]),
        }
    }

    pub(crate) fn from_matrix_unchecked(p: SquareMatrix<T>) -> Self {
        StochasticMatrix { p }
    }

    /// Positivity pattern: `adjacency[i]` lists the `j` with `p_ij > 0`.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.n())
            .map(|i| (0..self.n()).filter(|&j| self.p[(i, j)] > T::zero()).collect())
            .collect()
    }
}

impl<T> Index<(usize, usize)> for StochasticMatrix<T> {
    type Output = T;

    fn index(&self, idx: (usize, usize)) -> &T {
        &self.p[idx]
    }
}

/// Strongly connected components of a directed graph, each sorted
/// ascending, listed in order of their smallest vertex.
fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    // Kosaraju: finishing order on the graph, then sweeps on the reverse graph.
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = adj[v].get(*next) {
                *next += 1;
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }

    let mut reverse = vec![Vec::new(); n];
    for (v, out) in adj.iter().enumerate() {
        for &w in out {
            reverse[w].push(v);
        }
    }

    let mut component = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for &root in order.iter().rev() {
        if component[root] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![root];
        component[root] = id;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &reverse[v] {
                if component[w] == usize::MAX {
                    component[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components.sort_by_key(|c| c[0]);
    components
}

/// True iff every state reaches every other through positive transitions.
pub fn check_irreducible<T: Scalar>(p: &StochasticMatrix<T>) -> bool {
    strongly_connected_components(&p.adjacency()).len() == 1
}

/// The closed communicating classes of `p`, each sorted ascending.
pub fn closed_classes<T: Scalar>(p: &StochasticMatrix<T>) -> Vec<Vec<usize>> {
    let adj = p.adjacency();
    let comps = strongly_connected_components(&adj);
    let mut member_of = vec![0; p.n()];
    for (id, c) in comps.iter().enumerate() {
        for &v in c {
            member_of[v] = id;
        }
    }
    comps
        .into_iter()
        .enumerate()
        .filter(|(id, c)| c.iter().all(|&v| adj[v].iter().all(|&w| member_of[w] == *id)))
        .map(|(_, c)| c)
        .collect()
}

/// Restrict `p` to its unique closed communicating class, discarding the
/// transient states.
///
/// Returns the restricted chain together with the (zero-based) original
/// index of each retained state. Entries are copied unchanged.
pub fn recurrent_class<T: Scalar>(p: &StochasticMatrix<T>) -> Result<(StochasticMatrix<T>, Vec<usize>)> {
    let mut closed = closed_classes(p);
    if closed.len() != 1 {
        return Err(Error::MultipleClosedClasses(closed.len()));
    }
    let states = closed.pop().unwrap_or_default();
    let sub = SquareMatrix::from_fn(states.len(), |a, b| p[(states[a], states[b])]);
    Ok((StochasticMatrix::from_matrix_unchecked(sub), states))
}

/// A transition matrix together with the mean holding time of each state.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovRenewalProcess<T> {
    p: StochasticMatrix<T>,
    mu: Vec<T>,
}

impl<T: Scalar> MarkovRenewalProcess<T> {
    pub fn new(p: StochasticMatrix<T>, mu: Vec<T>) -> Result<Self> {
        if mu.len() != p.n() {
            return Err(Error::HoldingTimeLength {
                expected: p.n(),
                found: mu.len(),
            });
        }
        if let Some((i, &m)) = mu
            .iter()
            .enumerate()
            .find(|(_, &m)| !(m.is_finite() && m > T::zero()))
        {
            return Err(Error::NonPositiveHoldingTime {
                state: i + 1,
                value: m.as_f64(),
            });
        }
        Ok(MarkovRenewalProcess { p, mu })
    }

    /// The discrete-time chain: every holding time equals one.
    pub fn markov_chain(p: StochasticMatrix<T>) -> Self {
        let mu = vec![T::one(); p.n()];
        MarkovRenewalProcess { p, mu }
    }

    pub fn p(&self) -> &StochasticMatrix<T> {
        &self.p
    }

    pub fn mu(&self) -> &[T] {
        &self.mu
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn is_markov_chain(&self) -> bool {
        self.mu.iter().all(|&m| m == T::one())
    }

    pub fn is_irreducible(&self) -> bool {
        check_irreducible(&self.p)
    }

    pub fn cast<U: Scalar>(&self) -> MarkovRenewalProcess<U> {
        MarkovRenewalProcess {
            p: self.p.cast(),
            mu: self.mu.iter().map(|&m| U::from_f64(m.as_f64())).collect(),
        }
    }

    /// Relabel states as in [`StochasticMatrix::permuted`].
    pub fn permuted(&self, order: &[usize]) -> Self {
        MarkovRenewalProcess {
            p: self.p.permuted(order),
            mu: order.iter().map(|&i| self.mu[i]).collect(),
        }
    }
}

/// Stationary probability vector of an irreducible chain.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution<T>(Vec<T>);

impl<T: Scalar> StationaryDistribution<T> {
    pub fn new(pi: Vec<T>) -> Self {
        StationaryDistribution(pi)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_f64(&self) -> StationaryDistribution<f64> {
        StationaryDistribution(self.0.iter().map(|x| x.as_f64()).collect())
    }
}

impl<T> Index<usize> for StationaryDistribution<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

/// Matrix of mean first passage times; the diagonal holds mean recurrence
/// times.
#[derive(Debug, Clone, PartialEq)]
pub struct MfptMatrix<T>(SquareMatrix<T>);

impl<T: Scalar> MfptMatrix<T> {
    pub fn new(m: SquareMatrix<T>) -> Self {
        MfptMatrix(m)
    }

    pub fn n(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> SquareMatrix<T> {
        self.0
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n()).map(|i| self.0[(i, i)]).collect()
    }

    pub fn to_f64(&self) -> MfptMatrix<f64> {
        MfptMatrix(self.0.to_f64())
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.0.to_rows()
    }
}

impl<T> Index<(usize, usize)> for MfptMatrix<T> {
    type Output = T;

    fn index(&self, idx: (usize, usize)) -> &T {
        &self.0[idx]
    }
}

/// The expected holding time under stationarity, `sum_k pi_k mu_k`.
pub fn mean_asymptotic_increment<T: Scalar>(
    pi: &StationaryDistribution<T>,
    mrp: &MarkovRenewalProcess<T>,
) -> Result<T> {
    if pi.len() != mrp.n() {
        return Err(Error::DimensionMismatch {
            expected: mrp.n(),
            found: pi.len(),
        });
    }
    Ok(pi
        .as_slice()
        .iter()
        .zip(mrp.mu())
        .fold(T::zero(), |acc, (&p, &m)| acc + p * m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mc(rows: &[&[f64]]) -> StochasticMatrix<f64> {
        let v: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        validate_stochastic(&v, 1e-12).unwrap()
    }

    #[test]
    fn accepts_exact_rows() {
        let p = mc(&[&[0.5, 0.5], &[0.25, 0.75]]);
        assert_eq!(p.n(), 2);
        assert_eq!(p[(1, 1)], 0.75);
        let one = mc(&[&[1.0]]);
        assert_eq!(one.n(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        let ragged = vec![vec![1.0], vec![0.5, 0.5]];
        assert!(matches!(
            validate_stochastic(&ragged, 1e-12),
            Err(Error::NotSquare { row: 1, .. })
        ));
        let neg = vec![vec![1.5, -0.5], vec![0.5, 0.5]];
        assert_eq!(
            validate_stochastic(&neg, 1e-12),
            Err(Error::NegativeEntry { row: 1, col: 2, value: -0.5 })
        );
        let off = vec![vec![0.5, 0.5], vec![0.3, 0.8]];
        match validate_stochastic(&off, 1e-12) {
            Err(Error::RowSumOutOfTolerance { state: 2, sum }) => assert!((sum - 1.1).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        let empty: Vec<Vec<f64>> = vec![];
        assert_eq!(validate_stochastic(&empty, 1e-12), Err(Error::Empty));
        let nan = vec![vec![f64::NAN]];
        assert!(matches!(validate_stochastic(&nan, 1e-12), Err(Error::NonFiniteEntry { .. })));
    }

    #[test]
    fn tolerance_admits_decimal_rounding() {
        // 0.1 + 0.2 + 0.7 is not exactly one in binary64.
        let p = validate_stochastic(&[vec![0.1, 0.2, 0.7], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]], 1e-12).unwrap();
        assert_eq!(p.row(0), &[0.1, 0.2, 0.7]);
        assert!(validate_stochastic(&[vec![0.5, 0.5000001], vec![0.5, 0.5]], 1e-12).is_err());
        assert!(validate_stochastic(&[vec![0.5f32, 0.5000001], vec![0.5, 0.5]], 1e-5).is_ok());
    }

    #[test]
    fn irreducibility_is_structural() {
        assert!(check_irreducible(&mc(&[&[0.0, 1.0], &[1.0, 0.0]])));
        assert!(!check_irreducible(&mc(&[&[1.0, 0.0], &[0.5, 0.5]])));
        assert!(check_irreducible(&mc(&[&[1.0]])));
    }

    #[test]
    fn recurrent_class_drops_transient_states() {
        let (sub, idx) = recurrent_class(&mc(&[&[1.0, 0.0], &[0.5, 0.5]])).unwrap();
        assert_eq!(idx, vec![0]);
        assert_eq!(sub.to_rows(), vec![vec![1.0]]);

        let p = mc(&[&[0.5, 0.5], &[0.25, 0.75]]);
        let (same, idx) = recurrent_class(&p).unwrap();
        assert_eq!(idx, vec![0, 1]);
        assert_eq!(same, p);

        let two_closed = mc(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.3, 0.3, 0.4]]);
        assert_eq!(recurrent_class(&two_closed), Err(Error::MultipleClosedClasses(2)));
    }

    #[test]
    fn holding_times_validated() {
        let p = mc(&[&[0.5, 0.5], &[0.25, 0.75]]);
        assert!(MarkovRenewalProcess::new(p.clone(), vec![1.0]).is_err());
        assert_eq!(
            MarkovRenewalProcess::new(p.clone(), vec![1.0, 0.0]),
            Err(Error::NonPositiveHoldingTime { state: 2, value: 0.0 })
        );
        let mrp = MarkovRenewalProcess::new(p.clone(), vec![2.0, 3.0]).unwrap();
        assert!(!mrp.is_markov_chain());
        assert!(MarkovRenewalProcess::markov_chain(p).is_markov_chain());
    }

    #[test]
    fn asymptotic_increment() {
        let p = mc(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let mrp = MarkovRenewalProcess::new(p.clone(), vec![2.0, 3.0]).unwrap();
        let pi = StationaryDistribution::new(vec![0.5, 0.5]);
        assert_eq!(mean_asymptotic_increment(&pi, &mrp).unwrap(), 2.5);
        assert_eq!(
            mean_asymptotic_increment(&pi, &MarkovRenewalProcess::markov_chain(p)).unwrap(),
            1.0
        );
        let single = MarkovRenewalProcess::new(mc(&[&[1.0]]), vec![7.0]).unwrap();
        assert_eq!(
            mean_asymptotic_increment(&StationaryDistribution::new(vec![1.0]), &single).unwrap(),
            7.0
        );
        assert!(mean_asymptotic_increment(&StationaryDistribution::new(vec![1.0]), &mrp).is_err());
    }
}
