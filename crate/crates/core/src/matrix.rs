//! Dense complex matrices and the elementary kernels built on them.
//!
//! Storage is row-major and contiguous. Everything here is a pure function of
//! its inputs; the only internal parallelism is the row split in [`ComplexDense::matmul`],
//! which computes every output entry with the same instruction sequence regardless
//! of the thread count.

use std::fmt;
use std::ops::{Index, IndexMut};

pub use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Alias used throughout the crate for one complex double.
pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Products with more multiply-adds than this are split across threads.
const PAR_MATMUL_WORK: usize = 1 << 21;

/// Dense `rows x cols` complex matrix; entry `(i, j)` lives at `data[i * cols + j]`.
#[derive(Clone, PartialEq)]
pub struct ComplexDense {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexDense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Wraps a row-major buffer.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "buffer of length {} cannot hold a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Panics on ragged input; meant for literals.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    /// Real-valued literal, convenient in tests.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// `n x 1` column holding `values`.
    pub fn column(values: &[C64]) -> Self {
        Self {
            rows: values.len(),
            cols: 1,
            data: values.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Side length of a square matrix, or a `NotSquare` error naming `op`.
    pub fn square_dim(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (j, z) in self.row(i).iter().enumerate() {
                out.data[j * self.rows + i] = z.conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (j, &z) in self.row(i).iter().enumerate() {
                out.data[j * self.rows + i] = z;
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        if rhs.cols == 0 {
            return Ok(out);
        }
        let inner = self.cols;
        let row_kernel = |(i, out_row): (usize, &mut [C64])| {
            let lhs_row = &self.data[i * inner..(i + 1) * inner];
            for (k, &a) in lhs_row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                axpy(a, rhs.row(k), out_row);
            }
        };
        let work = self.rows * inner * rhs.cols;
        if work >= PAR_MATMUL_WORK {
            out.data
                .par_chunks_mut(rhs.cols)
                .enumerate()
                .for_each(row_kernel);
        } else {
            out.data
                .chunks_mut(rhs.cols)
                .enumerate()
                .for_each(row_kernel);
        }
        Ok(out)
    }

    /// `self^* * rhs` without materializing the adjoint separately.
    pub fn adjoint_matmul(&self, rhs: &Self) -> Result<Self> {
        self.adjoint().matmul(rhs)
    }

    /// Kronecker product: `(p*q) x (r*s)` with entry `((i*q+k), (j*s+l)) = A[i][j] * B[k][l]`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (p, r) = (self.rows, self.cols);
        let (q, s) = (rhs.rows, rhs.cols);
        let mut out = Self::zeros(p * q, r * s);
        let out_cols = r * s;
        for i in 0..p {
            for j in 0..r {
                let a = self.data[i * r + j];
                for k in 0..q {
                    let dst = (i * q + k) * out_cols + j * s;
                    for (o, &b) in out.data[dst..dst + s].iter_mut().zip(rhs.row(k)) {
                        *o = a * b;
                    }
                }
            }
        }
        out
    }

    /// Hermitian and skew-Hermitian parts `H = (A + A^*)/2`, `S = (A - A^*)/2`.
    pub fn hermitian_split(&self) -> Result<(Self, Self)> {
        let n = self.square_dim("hermitian_split")?;
        let mut h = Self::zeros(n, n);
        let mut s = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                let at = self.data[j * n + i].conj();
                h.data[i * n + j] = (a + at) * 0.5;
                s.data[i * n + j] = (a - at) * 0.5;
            }
        }
        Ok((h, s))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Copy with the diagonal set to zero.
    pub fn offdiag(&self) -> Result<Self> {
        let n = self.square_dim("offdiag")?;
        let mut out = self.clone();
        for i in 0..n {
            out.data[i * n + i] = ZERO;
        }
        Ok(out)
    }

    /// Frobenius norm of the off-diagonal part, without copying.
    pub fn offdiag_norm(&self) -> Result<f64> {
        let n = self.square_dim("offdiag")?;
        let mut acc = 0.0;
        for i in 0..n {
            for (j, z) in self.row(i).iter().enumerate() {
                if i != j {
                    acc += z.norm_sqr();
                }
            }
        }
        Ok(acc.sqrt())
    }

    /// Main diagonal (length `min(rows, cols)`).
    pub fn diag(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .collect()
    }

    pub fn trace(&self) -> C64 {
        self.diag().into_iter().sum()
    }

    /// `||A A^* - A^* A||_F`.
    pub fn normality_residual(&self) -> Result<f64> {
        self.square_dim("normality_residual")?;
        let adj = self.adjoint();
        let left = self.matmul(&adj)?;
        let right = adj.matmul(self)?;
        Ok(left.sub(&right)?.frobenius_norm())
    }

    /// `||U^* U - I||_F`.
    pub fn unitarity_residual(&self) -> Result<f64> {
        let n = self.square_dim("unitarity_residual")?;
        let mut gram = self.adjoint().matmul(self)?;
        for i in 0..n {
            gram.data[i * n + i] -= ONE;
        }
        Ok(gram.frobenius_norm())
    }

    /// `||A - A^*||_F`.
    pub fn hermitian_defect(&self) -> Result<f64> {
        let n = self.square_dim("hermitian_defect")?;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[i * n + j] - self.data[j * n + i].conj()).norm_sqr();
            }
        }
        Ok(acc.sqrt())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    pub fn scale(&self, factor: C64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    fn zip_with(&self, rhs: &Self, op: &'static str, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                op,
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Multiplies column `j` by `factor` in place.
    pub fn scale_col(&mut self, j: usize, factor: C64) {
        for i in 0..self.rows {
            self.data[i * self.cols + j] *= factor;
        }
    }

    /// Largest entrywise distance to `rhs`. Panics on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexDense {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexDense {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexDense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexDense {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>10.3e}{:+.3e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `y += a * x`.
#[inline]
pub(crate) fn axpy(a: C64, x: &[C64], y: &mut [C64]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `sum conj(x_i) * y_i`.
#[inline]
pub(crate) fn dotc(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).fold(ZERO, |acc, (a, b)| acc + a.conj() * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Small xorshift so these unit tests do not depend on the rng module.
    fn pseudo_random(rows: usize, cols: usize, seed: u64) -> ComplexDense {
        let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        ComplexDense::from_fn(rows, cols, |_, _| c(next(), next()))
    }

    fn naive_matmul(a: &ComplexDense, b: &ComplexDense) -> ComplexDense {
        ComplexDense::from_fn(a.rows(), b.cols(), |i, j| {
            let mut acc = ZERO;
            for k in 0..a.cols() {
                acc += a[(i, k)] * b[(k, j)];
            }
            acc
        })
    }

    #[test]
    fn adjoint_examples() {
        let a = ComplexDense::from_rows(&[[c(0.0, 1.0)]]);
        assert_eq!(a.adjoint(), ComplexDense::from_rows(&[[c(0.0, -1.0)]]));
        assert_eq!(
            ComplexDense::identity(4).adjoint(),
            ComplexDense::identity(4)
        );
        let a = ComplexDense::from_rows(&[[c(1.0, 1.0), c(2.0, 0.0)], [c(0.0, 0.0), c(3.0, -1.0)]]);
        let expected =
            ComplexDense::from_rows(&[[c(1.0, -1.0), c(0.0, 0.0)], [c(2.0, 0.0), c(3.0, 1.0)]]);
        assert_eq!(a.adjoint(), expected);
        let r = pseudo_random(3, 5, 9);
        assert_eq!(r.adjoint().adjoint(), r);
    }

    #[test]
    fn matmul_examples() {
        let a = pseudo_random(3, 3, 1);
        assert_eq!(a.matmul(&ComplexDense::identity(3)).unwrap(), a);
        let swap = ComplexDense::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(swap.matmul(&swap).unwrap(), ComplexDense::identity(2));
        assert!(matches!(
            a.matmul(&pseudo_random(2, 3, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn matmul_matches_triple_loop() {
        for (n, m, p) in [(5, 5, 5), (7, 3, 4), (1, 9, 2)] {
            let a = pseudo_random(n, m, 3 + n as u64);
            let b = pseudo_random(m, p, 17 + p as u64);
            let tol = 1e-14 * a.frobenius_norm() * b.frobenius_norm();
            assert!(a.matmul(&b).unwrap().max_abs_diff(&naive_matmul(&a, &b)) <= tol);
        }
    }

    #[test]
    fn parallel_matmul_matches_triple_loop() {
        // Large enough to take the threaded path.
        let a = pseudo_random(140, 130, 5);
        let b = pseudo_random(130, 120, 6);
        let fast = a.matmul(&b).unwrap();
        let tol = 1e-13 * a.frobenius_norm() * b.frobenius_norm();
        assert!(fast.max_abs_diff(&naive_matmul(&a, &b)) <= tol);
        assert_eq!(fast, a.matmul(&b).unwrap());
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexDense::identity(2);
        assert_eq!(i2.kron(&i2), ComplexDense::identity(4));
        let swap = ComplexDense::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let expected = ComplexDense::from_real_rows(&[
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ]);
        assert_eq!(swap.kron(&i2), expected);
    }

    #[test]
    fn kron_index_formula() {
        let a = pseudo_random(2, 2, 11);
        let b = pseudo_random(3, 3, 12);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..3 {
                    for q in 0..3 {
                        assert_eq!(k[(i * 3 + p, j * 3 + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn hermitian_split_examples() {
        let herm =
            ComplexDense::from_rows(&[[c(2.0, 0.0), c(1.0, 1.0)], [c(1.0, -1.0), c(-3.0, 0.0)]]);
        let (h, s) = herm.hermitian_split().unwrap();
        assert_eq!(h, herm);
        assert_eq!(s, ComplexDense::zeros(2, 2));

        let skew = ComplexDense::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
        let (h, s) = skew.hermitian_split().unwrap();
        assert_eq!(h, ComplexDense::zeros(2, 2));
        assert_eq!(s, skew);

        let (h, s) = ComplexDense::from_rows(&[[c(1.0, 1.0)]])
            .hermitian_split()
            .unwrap();
        assert_eq!(h[(0, 0)], c(1.0, 0.0));
        assert_eq!(s[(0, 0)], c(0.0, 1.0));

        assert!(matches!(
            pseudo_random(2, 3, 1).hermitian_split(),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn norms_and_offdiag() {
        assert_eq!(ComplexDense::zeros(3, 3).frobenius_norm(), 0.0);
        assert!((ComplexDense::identity(5).frobenius_norm() - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            ComplexDense::from_real_rows(&[[3.0, 4.0]]).frobenius_norm(),
            5.0
        );

        let d = ComplexDense::from_diag(&[c(1.0, 2.0), c(-3.0, 0.5)]);
        assert_eq!(d.offdiag().unwrap(), ComplexDense::zeros(2, 2));
        let a = ComplexDense::from_real_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        assert_eq!(
            a.offdiag().unwrap(),
            ComplexDense::from_real_rows(&[[0.0, 2.0], [3.0, 0.0]])
        );
        assert!(pseudo_random(2, 3, 1).offdiag().is_err());
    }

    #[test]
    fn residual_examples() {
        let jordan = ComplexDense::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert_eq!(jordan.normality_residual().unwrap(), 2f64.sqrt());
        let a = pseudo_random(6, 6, 4);
        let herm = a.add(&a.adjoint()).unwrap();
        let f = herm.frobenius_norm();
        assert!(herm.normality_residual().unwrap() <= 1e-14 * f * f);

        assert_eq!(ComplexDense::identity(7).unitarity_residual().unwrap(), 0.0);
        let two = ComplexDense::identity(4).scale(c(2.0, 0.0));
        assert!((two.unitarity_residual().unwrap() - 3.0 * 2.0).abs() < 1e-15);
        assert!(pseudo_random(2, 3, 1).unitarity_residual().is_err());
        assert!(pseudo_random(2, 3, 1).normality_residual().is_err());
    }

    #[test]
    fn adjoint_reverses_products() {
        let a = pseudo_random(4, 3, 21);
        let b = pseudo_random(3, 5, 22);
        let lhs = a.matmul(&b).unwrap().adjoint();
        let rhs = b.adjoint().matmul(&a.adjoint()).unwrap();
        assert!(lhs.sub(&rhs).unwrap().frobenius_norm() <= 1e-14 * lhs.frobenius_norm());
    }
}
