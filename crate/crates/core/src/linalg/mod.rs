//! Dense non-negative matrices, Perron roots and Collatz–Wielandt bounds.

pub(crate) mod perron;
pub mod vector;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use perron::{
    collatz_wielandt_lower, collatz_wielandt_upper, spectral_radius, spectral_radius_default,
    PerronData,
};

/// A dense, row-major, entrywise non-negative `rows x cols` matrix.
///
/// Every constructor rejects negative and non-finite entries, so any
/// `Matrix` value in the program is non-negative.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<Vec<f64>>,
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = Error;

    fn try_from(raw: MatrixJson) -> Result<Self> {
        if raw.data.len() != raw.rows {
            return Err(Error::EntryCount {
                rows: raw.rows,
                cols: raw.cols,
                expected: raw.rows,
                actual: raw.data.len(),
            });
        }
        let m = Matrix::from_rows(raw.data)?;
        if m.cols != raw.cols {
            return Err(Error::RaggedRows {
                row: 0,
                expected: raw.cols,
                actual: m.cols,
            });
        }
        Ok(m)
    }
}

impl From<Matrix> for MatrixJson {
    fn from(m: Matrix) -> Self {
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            data: m.data.chunks(m.cols).map(<[f64]>::to_vec).collect(),
        }
    }
}

impl Matrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                actual: data.len(),
            });
        }
        for (k, &value) in data.iter().enumerate() {
            let (row, col) = (k / cols, k % cols);
            if !value.is_finite() {
                return Err(Error::NonFiniteEntry { row, col, value });
            }
            if value < 0.0 {
                return Err(Error::NegativeEntry { row, col, value });
            }
        }
        // -0.0 would otherwise survive as a distinct bit pattern
        let data = data.into_iter().map(|x| x + 0.0).collect();
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix and additionally requires every entry to be `> 0`.
    pub fn new_positive(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        let m = Matrix::new(rows, cols, data)?;
        m.ensure_positive()?;
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * m);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != m {
                return Err(Error::RaggedRows {
                    row: i,
                    expected: m,
                    actual: row.len(),
                });
            }
            data.extend(row);
        }
        Matrix::new(n, m, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::diag(&vec![1.0; n]).expect("identity is non-negative")
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut data = vec![0.0; n * n];
        for (i, &v) in values.iter().enumerate() {
            data[i * n + i] = v;
        }
        Matrix::new(n, n, data)
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
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.cols)
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.row_iter().map(<[f64]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }

    /// All entries strictly positive.
    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|&x| x > 0.0)
    }

    pub fn ensure_positive(&self) -> Result<()> {
        match self.data.iter().position(|&x| x <= 0.0) {
            None => Ok(()),
            Some(k) => Err(Error::NonPositiveEntry {
                row: k / self.cols,
                col: k % self.cols,
                value: self.data[k],
            }),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Matrix-vector product `self · x`.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::mismatch("mul_vec", self.shape(), (x.len(), 1)));
        }
        Ok(self.mul_vec_unchecked(x))
    }

    #[inline]
    pub(crate) fn mul_vec_unchecked(&self, x: &[f64]) -> Vec<f64> {
        self.row_iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::mismatch("add", self.shape(), other.shape()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// `t · self`; `t` must be non-negative and finite.
    pub fn scale(&self, t: f64) -> Result<Matrix> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidScale(t));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * t + 0.0).collect(),
        })
    }

    /// Entrywise max norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        if self.shape() != other.shape() {
            return Err(Error::mismatch("max_abs_diff", self.shape(), other.shape()));
        }
        Ok(self.max_abs_diff_unchecked(other))
    }

    #[inline]
    pub(crate) fn max_abs_diff_unchecked(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| f64::max(acc, (a - b).abs()))
    }

    /// Copy of `self` with row `i` replaced.
    pub fn with_row(&self, i: usize, row: &[f64]) -> Result<Matrix> {
        if i >= self.rows || row.len() != self.cols {
            return Err(Error::mismatch("with_row", self.shape(), (i + 1, row.len())));
        }
        let mut data = self.data.clone();
        data[i * self.cols..(i + 1) * self.cols].copy_from_slice(row);
        Matrix::new(self.rows, self.cols, data)
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Matrix {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.row_iter()).finish()
    }
}

/// Standard product `a · b`.
pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::mismatch("mat_mul", a.shape(), b.shape()));
    }
    Ok(mat_mul_unchecked(a, b))
}

pub(crate) fn mat_mul_unchecked(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, k, m) = (a.rows, a.cols, b.cols);
    let mut data = vec![0.0; n * m];
    for i in 0..n {
        let out = &mut data[i * m..(i + 1) * m];
        for p in 0..k {
            let aip = a.data[i * k + p];
            if aip == 0.0 {
                continue;
            }
            for (o, &bpj) in out.iter_mut().zip(b.row(p)) {
                *o += aip * bpj;
            }
        }
    }
    Matrix::from_raw(n, m, data)
}
