//! Dense square matrices over any [`Scalar`].

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use crate::scalar::Scalar;

/// Row-major `n x n` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// All-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| T::one())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    /// Builds from rows; panics if the rows do not form a square.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix rows must form a square");
            data.extend(row);
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .map(move |(idx, v)| (idx / n, idx % n, v))
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        }
    }

    /// `sum_ij a_ij b_ij`, i.e. `tr(A B^T)` for real entries.
    pub fn frobenius_dot(&self, other: &Self) -> T {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch in matmul");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    /// Successive powers `A^0 ..= A^max`.
    pub fn powers(&self, max: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(max + 1);
        out.push(Self::identity(self.n));
        for k in 1..=max {
            let next = out[k - 1].matmul(self);
            out.push(next);
        }
        out
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n);
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n);
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.matmul(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn int(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn cycle_cubed_is_identity() {
        let a = int(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let p = a.powers(3);
        assert_eq!(p[3], Matrix::identity(3));
        assert_eq!(p[2], a.transpose());
        assert_eq!(a.trace(), BigInt::from(0));
    }

    #[test]
    fn frobenius_is_trace_of_product_with_transpose() {
        let a = int(&[&[1, 2], &[3, 4]]);
        let b = int(&[&[0, -1], &[5, 2]]);
        assert_eq!(a.frobenius_dot(&b), (&a * &b.transpose()).trace());
    }

    #[test]
    fn float_matrices_work_too() {
        let a: Matrix<f64> = Matrix::from_fn(2, |i, j| (i + 2 * j) as f64);
        let s = &a + &Matrix::identity(2);
        assert_eq!(*s.get(1, 1), 4.0);
        assert_eq!((&s - &a), Matrix::identity(2));
    }
}
