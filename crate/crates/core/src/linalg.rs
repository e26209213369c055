//! Small dense linear algebra: orthonormal bases, singular values, rank.
//!
//! Matrices here are tiny (at most a few dozen rows), so everything is a
//! straightforward O(n^3) routine on a column-major buffer. Singular values
//! come from one-sided (Hestenes) Jacobi, which keeps small singular values
//! accurate in the absolute sense; the skew margin relies on that near zero.

use crate::error::{Error, Result};

/// Default relative tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 64;

/// Dense real matrix, stored column-major.
///
/// `cols == 0` is allowed: it is the basis of the zero subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from a list of rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyInput)?;
        let cols = first.len();
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            data.extend_from_slice(c);
        }
        let m = Matrix {
            rows,
            cols: columns.len(),
            data,
        };
        m.check_finite()?;
        Ok(m)
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.push(self[(i, j)]);
            }
        }
        out
    }

    fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.cols).map(move |j| self.column(j))
    }

    pub fn as_col_major(&self) -> &[f64] {
        &self.data
    }

    /// `selfᵀ · other`.
    pub fn transpose_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.cols, other.cols);
        for i in 0..self.cols {
            for j in 0..other.cols {
                out[(i, j)] = dot(self.column(i), other.column(j));
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = vec![0.0; self.rows];
        for (j, &vj) in v.iter().enumerate() {
            axpy(vj, self.column(j), &mut out);
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[j * self.rows + i]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[j * self.rows + i]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Orthonormal basis of the span of `vectors`, as matrix columns.
///
/// Modified Gram-Schmidt with one re-orthogonalization pass. A vector is
/// dropped when its residual falls below `tol` times the largest input norm,
/// so the column count is the numerical rank at `tol`. An all-zero input
/// yields a matrix with zero columns.
pub fn orthonormal_basis(vectors: &[Vec<f64>], tol: f64) -> Result<Matrix> {
    let dim = vectors.first().ok_or(Error::EmptyInput)?.len();
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    if scale == 0.0 {
        return Matrix::from_columns(dim, &basis);
    }
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &r);
                axpy(-c, q, &mut r);
            }
        }
        let n = norm(&r);
        if n > tol * scale {
            r.iter_mut().for_each(|x| *x /= n);
            basis.push(r);
        }
        if basis.len() == dim {
            break;
        }
    }
    Matrix::from_columns(dim, &basis)
}

/// One-sided Jacobi on a column-major `rows × cols` buffer (rows ≥ cols).
/// On return the columns are mutually orthogonal; their norms are the
/// singular values.
fn jacobi_orthogonalize(a: &mut [f64], rows: usize, cols: usize) {
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (head, tail) = a.split_at_mut(q * rows);
                let cp = &mut head[p * rows..(p + 1) * rows];
                let cq = &mut tail[..rows];
                let alpha = dot(cp, cp);
                let beta = dot(cq, cq);
                let gamma = dot(cp, cq);
                if gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let xp = *x;
                    let yq = *y;
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

/// Singular values in descending order (min(rows, cols) of them).
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    let (mut buf, rows, cols) = if m.rows >= m.cols {
        (m.data.clone(), m.rows, m.cols)
    } else {
        let t = m.transpose();
        (t.data, t.rows, t.cols)
    };
    jacobi_orthogonalize(&mut buf, rows, cols);
    let mut sv: Vec<f64> = buf.chunks(rows.max(1)).take(cols).map(norm).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Smallest singular value of a tall (or square) matrix.
pub fn smallest_singular_value(m: &Matrix) -> Result<f64> {
    if m.rows < m.cols {
        return Err(Error::Shape(format!(
            "smallest_singular_value needs rows >= cols, got {}x{}",
            m.rows, m.cols
        )));
    }
    if m.cols == 0 {
        return Err(Error::Shape("matrix has no columns".into()));
    }
    Ok(sigma_min_in_place(&mut m.data.clone(), m.rows, m.cols))
}

/// σ_min of a column-major buffer, destroying it. Used by hot loops that
/// assemble the buffer themselves.
pub(crate) fn sigma_min_in_place(buf: &mut [f64], rows: usize, cols: usize) -> f64 {
    debug_assert!(rows >= cols && cols > 0);
    jacobi_orthogonalize(buf, rows, cols);
    buf.chunks(rows)
        .take(cols)
        .map(norm)
        .fold(f64::INFINITY, f64::min)
}

/// Number of singular values above `tol · σ_max`.
pub fn rank(m: &Matrix, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let sv = singular_values(m);
    let Some(&smax) = sv.first() else {
        return Ok(0);
    };
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * smax).count())
}
