use crate::error::{Error, Result};

/// Symmetric matrix in compressed sparse row form.
///
/// Both triangles are stored, so a row slice holds every nonzero of that row
/// and the product `A x` needs no transpose pass. Column indices are sorted
/// within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymMatrix {
    /// Builds a matrix from triplets covering both triangles.
    ///
    /// Fails if an index is out of range, a `(row, col)` pair repeats, the
    /// entries are not exactly symmetric, or a diagonal entry is missing or
    /// nonpositive.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut counts = vec![0usize; n + 1];
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({i}, {j}) outside a {n}x{n} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidMatrix(format!("non-finite value at ({i}, {j})")));
            }
            counts[i + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let row_offsets = counts;
        let mut fill = row_offsets.clone();
        let mut entries = vec![(0usize, 0.0f64); triplets.len()];
        for &(i, j, v) in triplets {
            entries[fill[i]] = (j, v);
            fill[i] += 1;
        }
        for i in 0..n {
            let row = &mut entries[row_offsets[i]..row_offsets[i + 1]];
            row.sort_by_key(|e| e.0);
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidMatrix(format!(
                    "duplicate entry ({i}, {})",
                    w[0].0
                )));
            }
        }
        let (col_indices, values) = entries.into_iter().unzip();
        let matrix = Self {
            n,
            row_offsets,
            col_indices,
            values,
        };
        matrix.validate()?;
        Ok(matrix)
    }

    /// Builds a matrix from one triangle, mirroring every off-diagonal entry.
    pub fn from_triangle(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut full = Vec::with_capacity(2 * entries.len());
        for &(i, j, v) in entries {
            full.push((i, j, v));
            if i != j {
                full.push((j, i, v));
            }
        }
        Self::from_triplets(n, &full)
    }

    /// Builds a matrix from a dense row-major array, dropping exact zeros.
    pub fn from_dense(n: usize, dense: &[f64]) -> Result<Self> {
        if dense.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: dense.len(),
            });
        }
        let triplets: Vec<_> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let v = dense[i * n + j];
                (v != 0.0).then_some((i, j, v))
            })
            .collect();
        Self::from_triplets(n, &triplets)
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            match cols.binary_search(&i) {
                Ok(pos) if vals[pos] > 0.0 => {}
                Ok(pos) => {
                    return Err(Error::InvalidMatrix(format!(
                        "nonpositive diagonal entry {} at row {i}",
                        vals[pos]
                    )))
                }
                Err(_) => {
                    return Err(Error::InvalidMatrix(format!("missing diagonal entry at row {i}")))
                }
            }
            for (&j, &v) in cols.iter().zip(vals) {
                if self.get(j, i) != Some(v) {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i}, {j}) has no matching symmetric entry"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored entries (both triangles).
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        (&self.col_indices[range.clone()], &self.values[range])
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).ok().map(|pos| vals[pos])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.get(i, i).expect("validated diagonal"))
            .collect()
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                dense[i * self.n + j] = v;
            }
        }
        dense
    }

    /// Returns `c * A`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidArgument(format!("scale factor must be positive, got {c}")));
        }
        Ok(Self {
            values: self.values.iter().map(|v| c * v).collect(),
            ..self.clone()
        })
    }

    /// Entries of the lower triangle (including the diagonal), row by row.
    pub fn lower_triangle(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter()
                .zip(vals)
                .take_while(move |(&j, _)| j <= i)
                .map(move |(&j, &v)| (i, j, v))
        })
    }

    fn check_dims(&self, x: &[f64], y: &[f64]) -> Result<()> {
        for len in [x.len(), y.len()] {
            if len != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: len,
                });
            }
        }
        Ok(())
    }

    #[inline]
    fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        let (cols, vals) = self.row(i);
        let mut acc = 0.0;
        for (&j, &v) in cols.iter().zip(vals) {
            acc += v * x[j];
        }
        acc
    }

    /// `y = A x`, row by row with each row summed left to right.
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        self.check_dims(x, y)?;
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row_dot(i, x);
        }
        Ok(())
    }

    /// `A x` in a freshly allocated vector.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y)?;
        Ok(y)
    }

    /// Row-parallel `y = A x`.
    ///
    /// Rows are distributed over threads but every row is still summed left
    /// to right, so the result is bitwise identical to [`Self::matvec_into`].
    /// Without the `parallel` feature this is the sequential product.
    pub fn par_matvec_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            self.check_dims(x, y)?;
            y.par_iter_mut()
                .with_min_len(1024)
                .enumerate()
                .for_each(|(i, yi)| *yi = self.row_dot(i, x));
            Ok(())
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.matvec_into(x, y)
        }
    }
}
