use crate::error::{EifError, Result};
use crate::scalar::Scalar;

/// Row-major collection of finite points sharing one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<T> {
    dim: usize,
    values: Vec<T>,
}

pub(crate) fn check_finite<T: Scalar>(x: &[T]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(EifError::NonFinite { index }),
        None => Ok(()),
    }
}

pub(crate) fn check_point<T: Scalar>(x: &[T], dim: usize) -> Result<()> {
    if x.len() != dim {
        return Err(EifError::DimensionMismatch {
            expected: dim,
            found: x.len(),
        });
    }
    check_finite(x)
}

impl<T: Scalar> Dataset<T> {
    pub fn new(dim: usize, values: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(EifError::invalid("dataset dimension must be at least 1"));
        }
        if !values.len().is_multiple_of(dim) {
            return Err(EifError::invalid(format!(
                "{} values do not form rows of dimension {dim}",
                values.len()
            )));
        }
        check_finite(&values)?;
        Ok(Self { dim, values })
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    pub fn from_rows<R: AsRef<[T]>>(dim: usize, rows: impl IntoIterator<Item = R>) -> Result<Self> {
        let mut values = Vec::new();
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(EifError::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(dim, values)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        self.values.chunks_exact(self.dim)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// New dataset holding the given rows, in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut values = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Self {
            dim: self.dim,
            values,
        }
    }

    pub fn push(&mut self, row: &[T]) -> Result<()> {
        check_point(row, self.dim)?;
        self.values.extend_from_slice(row);
        Ok(())
    }

    /// Appends all rows of `other`.
    pub fn extend(&mut self, other: &Dataset<T>) -> Result<()> {
        if other.dim != self.dim {
            return Err(EifError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        self.values.extend_from_slice(&other.values);
        Ok(())
    }

    /// Per-coordinate minimum and maximum. `None` for an empty dataset.
    pub fn bounds(&self) -> Option<(Vec<T>, Vec<T>)> {
        let mut rows = self.rows();
        let first = rows.next()?;
        let mut lo = first.to_vec();
        let mut hi = first.to_vec();
        for row in rows {
            for d in 0..self.dim {
                lo[d] = lo[d].min(row[d]);
                hi[d] = hi[d].max(row[d]);
            }
        }
        Some((lo, hi))
    }

    pub fn cast<U: Scalar>(&self) -> Dataset<U> {
        Dataset {
            dim: self.dim,
            values: self.values.iter().map(|v| U::lit(v.to_f64_lossless())).collect(),
        }
    }
}
