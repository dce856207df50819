use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

/// Dense row-major square matrix. Indices are zero-based.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Copy> SquareMatrix<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    pub fn filled(n: usize, value: T) -> Self {
        SquareMatrix {
            n,
            data: vec![value; n * n],
        }
    }

    /// Build from row-major storage; `None` when the length is not a square.
    pub fn from_row_major(n: usize, data: Vec<T>) -> Option<Self> {
        (data.len() == n * n).then_some(SquareMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(<[T]>::to_vec).collect()
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().copied().map(f).collect(),
        }
    }

    /// Leading `k x k` block.
    pub fn leading_block(&self, k: usize) -> SquareMatrix<T> {
        assert!(k <= self.n);
        SquareMatrix::from_fn(k, |i, j| self[(i, j)])
    }

    pub fn transpose(&self) -> SquareMatrix<T> {
        SquareMatrix::from_fn(self.n, |i, j| self[(j, i)])
    }
}

impl<T: Scalar> SquareMatrix<T> {
    /// Convert every entry to another scalar type (rounding to nearest).
    pub fn cast<U: Scalar>(&self) -> SquareMatrix<U> {
        self.map(|x| U::from_f64(x.as_f64()))
    }

    pub fn to_f64(&self) -> SquareMatrix<f64> {
        self.map(Scalar::as_f64)
    }

    pub fn identity(n: usize) -> Self {
        SquareMatrix::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.n && j < self.n);
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.n && j < self.n);
        &mut self.data[i * self.n + j]
    }
}
