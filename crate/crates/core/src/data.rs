use crate::error::{LookoutError, Result};
use crate::scalar::Scalar;

/// `n` observations in `m` dimensions, stored row-major.
///
/// Every entry is finite; constructors reject anything else.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix<T> {
    values: Vec<T>,
    n: usize,
    m: usize,
}

impl<T: Scalar> DataMatrix<T> {
    pub fn from_row_major(values: Vec<T>, n: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(LookoutError::InvalidParameter("dimension must be at least 1".into()));
        }
        if values.len() != n * m {
            return Err(LookoutError::DimensionMismatch { expected: n * m, got: values.len() });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(LookoutError::NonFinite { row: pos / m, col: pos % m });
        }
        Ok(Self { values, n, m })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let m = rows.first().map(Vec::len).unwrap_or(0);
        let mut values = Vec::with_capacity(rows.len() * m);
        for row in rows {
            if row.len() != m {
                return Err(LookoutError::DimensionMismatch { expected: m, got: row.len() });
            }
            values.extend_from_slice(row);
        }
        Self::from_row_major(values, rows.len(), m)
    }

    /// Single-column matrix.
    pub fn from_column(column: &[T]) -> Result<Self> {
        Self::from_row_major(column.to_vec(), column.len(), 1)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.values.chunks_exact(self.m)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.m + j]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    /// Applies `f` to every entry; the result must stay finite.
    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        Self::from_row_major(self.values.iter().map(|&v| f(v)).collect(), self.n, self.m)
    }

    /// Rows reordered so that row `k` of the output is row `order[k]` of `self`.
    pub fn select_rows(&self, order: &[usize]) -> Self {
        let mut values = Vec::with_capacity(order.len() * self.m);
        for &i in order {
            values.extend_from_slice(self.row(i));
        }
        Self { values, n: order.len(), m: self.m }
    }
}

#[inline]
pub(crate) fn squared_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| {
        let d = x - y;
        acc + d * d
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_with_position() {
        let err = DataMatrix::from_row_major(vec![1.0, 2.0, f64::NAN, 4.0], 2, 2).unwrap_err();
        assert_eq!(err, LookoutError::NonFinite { row: 1, col: 0 });
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(DataMatrix::from_rows(&[vec![1.0f64, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn column_access() {
        let d = DataMatrix::from_rows(&[vec![1.0f32, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(d.column(1), vec![2.0, 4.0]);
        assert_eq!(d.row(1), &[3.0, 4.0]);
    }
}
