//! Dense vector and matrix algebra for semantic spaces: kronecker products,
//! component-wise products, Frobenius inner products and cosines.
//!
//! Everything here is pure and deterministic. Accumulations (dot products,
//! Frobenius sums) run left to right in index order, so identical inputs
//! produce bit-identical outputs on every run.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("matrix shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("entry buffer holds {len} values, expected {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, len: usize },

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("kronecker product requires non-empty vectors")]
    EmptyOperand,
}

/// A cosine together with a zero-norm marker.
///
/// The cosine of a zero-norm operand is undefined; it is reported as 0 with
/// `degenerate` set so callers can count the condition instead of failing.
/// Out-of-vocabulary words routinely produce all-zero vectors, and the
/// evaluation pipeline has to keep going when they do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity<T = f64> {
    pub value: T,
    pub degenerate: bool,
}

fn normalized<T: Scalar>(inner: T, left_norm: T, right_norm: T) -> Similarity<T> {
    if left_norm == T::zero() || right_norm == T::zero() {
        Similarity {
            value: T::zero(),
            degenerate: true,
        }
    } else {
        Similarity {
            value: inner / (left_norm * right_norm),
            degenerate: false,
        }
    }
}

fn check_finite<T: Scalar>(entries: &[T]) -> Result<(), TensorError> {
    match entries.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(TensorError::NonFinite { index }),
        None => Ok(()),
    }
}

/// An r-dimensional row vector of co-occurrence weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<T = f64> {
    entries: Vec<T>,
}

impl<T: Scalar> Vector<T> {
    /// Builds a vector, rejecting NaN and infinite entries.
    pub fn new(entries: Vec<T>) -> Result<Self, TensorError> {
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            entries: vec![T::zero(); len],
        }
    }

    /// Skips the finiteness scan; callers guarantee it holds.
    pub(crate) fn from_raw(entries: Vec<T>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    fn check_len(&self, other: &Self) -> Result<(), TensorError> {
        if self.len() != other.len() {
            return Err(TensorError::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    /// Kronecker product: `result[i][j] = self[i] * other[j]`.
    ///
    /// Both operands must have the same (non-zero) length r; the result is
    /// the r x r matrix lifting the pair into the product space.
    pub fn kron(&self, other: &Self) -> Result<Matrix<T>, TensorError> {
        self.check_len(other)?;
        if self.is_empty() {
            return Err(TensorError::EmptyOperand);
        }
        let r = self.len();
        let mut entries = Vec::with_capacity(r * r);
        for &a in &self.entries {
            for &b in &other.entries {
                entries.push(a * b);
            }
        }
        Matrix::new(r, r, entries)
    }

    /// Component-wise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self, TensorError> {
        self.check_len(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a * b)
            .collect();
        Vector::new(entries)
    }

    /// Component-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        self.check_len(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a + b)
            .collect();
        Vector::new(entries)
    }

    pub fn dot(&self, other: &Self) -> Result<T, TensorError> {
        self.check_len(other)?;
        let mut acc = T::zero();
        for (&a, &b) in self.entries.iter().zip(&other.entries) {
            acc = acc + a * b;
        }
        Ok(acc)
    }

    pub fn norm(&self) -> T {
        let mut acc = T::zero();
        for &a in &self.entries {
            acc = acc + a * a;
        }
        acc.sqrt()
    }

    /// Cosine similarity; zero-norm operands yield 0 flagged degenerate.
    pub fn cosine(&self, other: &Self) -> Result<Similarity<T>, TensorError> {
        let inner = self.dot(other)?;
        Ok(normalized(inner, self.norm(), other.norm()))
    }

    pub fn scale(&self, factor: T) -> Self {
        Self::from_raw(self.entries.iter().map(|&a| a * factor).collect())
    }
}

impl<T> std::ops::Index<usize> for Vector<T> {
    type Output = T;

    fn index(&self, index: usize) -> &T {
        &self.entries[index]
    }
}

/// A dense row-major r x r matrix; verb meanings and composed sentence
/// meanings both live here.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T = f64> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self, TensorError> {
        if entries.len() != rows * cols {
            return Err(TensorError::EntryCount {
                rows,
                cols,
                len: entries.len(),
            });
        }
        check_finite(&entries)?;
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![T::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.entries[row * self.cols + col]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    fn check_shape(&self, other: &Self) -> Result<(), TensorError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(TensorError::ShapeMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        Ok(())
    }

    /// Component-wise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self, TensorError> {
        self.check_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a * b)
            .collect();
        Matrix::new(self.rows, self.cols, entries)
    }

    /// Frobenius inner product: the sum over all positions of the
    /// component-wise product.
    pub fn frobenius_inner(&self, other: &Self) -> Result<T, TensorError> {
        self.check_shape(other)?;
        let mut acc = T::zero();
        for (&a, &b) in self.entries.iter().zip(&other.entries) {
            acc = acc + a * b;
        }
        Ok(acc)
    }

    pub fn frobenius_norm(&self) -> T {
        let mut acc = T::zero();
        for &a in &self.entries {
            acc = acc + a * a;
        }
        acc.sqrt()
    }

    /// Frobenius cosine: inner product normalized by the product of the
    /// Frobenius norms. Zero-norm operands yield 0 flagged degenerate.
    pub fn cosine(&self, other: &Self) -> Result<Similarity<T>, TensorError> {
        let inner = self.frobenius_inner(other)?;
        Ok(normalized(inner, self.frobenius_norm(), other.frobenius_norm()))
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&a| a * factor).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[f64]) -> Vector<f64> {
        Vector::new(entries.to_vec()).unwrap()
    }

    fn m(rows: usize, cols: usize, entries: &[f64]) -> Matrix<f64> {
        Matrix::new(rows, cols, entries.to_vec()).unwrap()
    }

    #[test]
    fn kron_expands_pairwise_products() {
        let k = v(&[1.0, 2.0]).kron(&v(&[3.0, 4.0])).unwrap();
        assert_eq!(k.as_slice(), &[3.0, 4.0, 6.0, 8.0]);
        assert_eq!((k.rows(), k.cols()), (2, 2));
    }

    #[test]
    fn kron_zero_left_operand() {
        let k = v(&[0.0, 0.0]).kron(&v(&[3.0, 4.0])).unwrap();
        assert_eq!(k.as_slice(), &[0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn kron_indicator_placement() {
        let k = v(&[1.0, 0.0]).kron(&v(&[0.0, 1.0])).unwrap();
        assert_eq!(k.as_slice(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn kron_length_mismatch_names_both_lengths() {
        let err = v(&[1.0, 2.0]).kron(&v(&[1.0, 2.0, 3.0])).unwrap_err();
        assert_eq!(err, TensorError::LengthMismatch { left: 2, right: 3 });
        assert_eq!(err.to_string(), "vector length mismatch: 2 vs 3");
    }

    #[test]
    fn kron_rejects_empty() {
        let err = v(&[]).kron(&v(&[])).unwrap_err();
        assert_eq!(err, TensorError::EmptyOperand);
    }

    #[test]
    fn hadamard_vec_multiplies_componentwise() {
        let h = v(&[1.0, 2.0]).hadamard(&v(&[3.0, 4.0])).unwrap();
        assert_eq!(h.as_slice(), &[3.0, 8.0]);
    }

    #[test]
    fn hadamard_vec_ones_is_identity() {
        let a = v(&[0.5, 2.5, 7.0]);
        let ones = v(&[1.0, 1.0, 1.0]);
        assert_eq!(a.hadamard(&ones).unwrap(), a);
    }

    #[test]
    fn hadamard_vec_zero_annihilates() {
        let h = v(&[1.0, 2.0]).hadamard(&v(&[0.0, 0.0])).unwrap();
        assert_eq!(h.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn hadamard_mat_multiplies_componentwise() {
        let a = m(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = m(2, 2, &[5.0, 6.0, 7.0, 8.0]);
        assert_eq!(a.hadamard(&b).unwrap().as_slice(), &[5.0, 12.0, 21.0, 32.0]);
    }

    #[test]
    fn hadamard_mat_identity_and_zero() {
        let a = m(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let ones = m(2, 2, &[1.0; 4]);
        let zeros = Matrix::zeros(2, 2);
        assert_eq!(a.hadamard(&ones).unwrap(), a);
        assert_eq!(a.hadamard(&zeros).unwrap(), zeros);
    }

    #[test]
    fn hadamard_mat_shape_mismatch() {
        let a = m(2, 2, &[1.0; 4]);
        let b = m(1, 4, &[1.0; 4]);
        let err = a.hadamard(&b).unwrap_err();
        assert_eq!(err.to_string(), "matrix shape mismatch: 2x2 vs 1x4");
    }

    #[test]
    fn add_vec_sums_componentwise() {
        assert_eq!(v(&[1.0, 2.0]).add(&v(&[3.0, 4.0])).unwrap().as_slice(), &[4.0, 6.0]);
    }

    #[test]
    fn add_vec_zero_is_identity() {
        let a = v(&[1.5, -2.0]);
        assert_eq!(a.add(&Vector::zeros(2)).unwrap(), a);
    }

    #[test]
    fn add_vec_inverse_cancels() {
        let s = v(&[1.0, -1.0]).add(&v(&[-1.0, 1.0])).unwrap();
        assert_eq!(s.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn frobenius_inner_sums_products() {
        let a = m(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(a.frobenius_inner(&a).unwrap(), 30.0);
    }

    #[test]
    fn frobenius_inner_zero_and_disjoint() {
        let a = m(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(a.frobenius_inner(&Matrix::zeros(2, 2)).unwrap(), 0.0);
        let e1 = m(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let e2 = m(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(e1.frobenius_inner(&e2).unwrap(), 0.0);
    }

    #[test]
    fn frobenius_norm_examples() {
        assert_eq!(m(2, 2, &[3.0, 0.0, 0.0, 4.0]).frobenius_norm(), 5.0);
        assert_eq!(Matrix::<f64>::zeros(3, 3).frobenius_norm(), 0.0);
        assert_eq!(m(2, 2, &[1.0, 0.0, 0.0, 0.0]).frobenius_norm(), 1.0);
    }

    #[test]
    fn cosine_mat_self_is_one() {
        let a = m(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let sim = a.cosine(&a).unwrap();
        assert!((sim.value - 1.0).abs() < 1e-12);
        assert!(!sim.degenerate);
    }

    #[test]
    fn cosine_mat_orthogonal_is_zero() {
        let e1 = m(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let e2 = m(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(e1.cosine(&e2).unwrap().value, 0.0);
    }

    #[test]
    fn cosine_mat_scale_invariant() {
        let a = m(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = a.scale(2.0);
        let sim = a.cosine(&b).unwrap();
        assert!((sim.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_mat_zero_norm_is_degenerate_not_error() {
        let a = m(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let sim = a.cosine(&Matrix::zeros(2, 2)).unwrap();
        assert_eq!(sim.value, 0.0);
        assert!(sim.degenerate);
    }

    #[test]
    fn cosine_vec_examples() {
        assert_eq!(v(&[1.0, 0.0]).cosine(&v(&[1.0, 0.0])).unwrap().value, 1.0);
        assert_eq!(v(&[1.0, 0.0]).cosine(&v(&[0.0, 1.0])).unwrap().value, 0.0);
        let sim = v(&[1.0, 1.0]).cosine(&v(&[2.0, 2.0])).unwrap();
        assert!((sim.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_vec_zero_norm_is_degenerate() {
        let sim = v(&[0.0, 0.0]).cosine(&v(&[1.0, 2.0])).unwrap();
        assert_eq!(sim.value, 0.0);
        assert!(sim.degenerate);
    }

    #[test]
    fn constructors_reject_non_finite_entries() {
        assert_eq!(
            Vector::new(vec![1.0, f64::NAN]).unwrap_err(),
            TensorError::NonFinite { index: 1 }
        );
        assert_eq!(
            Matrix::new(1, 2, vec![f64::INFINITY, 0.0]).unwrap_err(),
            TensorError::NonFinite { index: 0 }
        );
    }

    #[test]
    fn matrix_rejects_wrong_entry_count() {
        let err = Matrix::new(2, 2, vec![1.0; 3]).unwrap_err();
        assert_eq!(
            err,
            TensorError::EntryCount {
                rows: 2,
                cols: 2,
                len: 3
            }
        );
    }

    #[test]
    fn operations_are_bit_deterministic() {
        let a = v(&[0.1, 0.2, 0.3, 0.7]);
        let b = v(&[0.9, 0.11, 0.13, 0.17]);
        let first = a.dot(&b).unwrap();
        let second = a.dot(&b).unwrap();
        assert_eq!(first.to_bits(), second.to_bits());

        let k1 = a.kron(&b).unwrap();
        let k2 = a.kron(&b).unwrap();
        for (x, y) in k1.as_slice().iter().zip(k2.as_slice()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn works_for_f32_scalars() {
        let a = Vector::<f32>::new(vec![1.0, 2.0]).unwrap();
        let b = Vector::<f32>::new(vec![3.0, 4.0]).unwrap();
        assert_eq!(a.kron(&b).unwrap().as_slice(), &[3.0f32, 4.0, 6.0, 8.0]);
    }
}
