//! Affine subspaces of R^N, their lift to linear subspaces of R^{N+1}, and
//! the skewness test with a quantitative margin.
//!
//! An affine subspace `p + span(D)` lifts to the linear span of `(d, 0)` for
//! the directions `d` together with `(p, 1)`. Two affine subspaces are skew
//! exactly when their lifts meet only in the origin, and the margin is the
//! smallest singular value of the two orthonormal lifted bases placed side by
//! side. It lies in `[0, 1]` and vanishes precisely at nontrivial intersection.

use crate::embeddings::Embedding;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, Matrix};

/// Default threshold separating a skew verdict from roundoff.
pub const DEFAULT_SKEW_TOL: f64 = 1e-8;

const ORTHO_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct AffineSubspace {
    base_point: Vec<f64>,
    directions: Matrix,
}

impl AffineSubspace {
    /// `base_point + span(directions)`. The directions are orthonormalized;
    /// dependent ones are dropped.
    pub fn new(base_point: Vec<f64>, directions: &[Vec<f64>]) -> Result<Self> {
        let dim = base_point.len();
        if dim == 0 {
            return Err(Error::EmptyInput);
        }
        if base_point.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let directions = if directions.is_empty() {
            Matrix::zeros(dim, 0)
        } else {
            if let Some(bad) = directions.iter().find(|d| d.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: bad.len(),
                });
            }
            linalg::orthonormal_basis(directions, linalg::DEFAULT_RANK_TOL)?
        };
        Ok(AffineSubspace {
            base_point,
            directions,
        })
    }

    /// Uses `directions` as given; the columns must already be orthonormal.
    pub fn from_orthonormal(base_point: Vec<f64>, directions: Matrix) -> Result<Self> {
        if directions.rows() != base_point.len() {
            return Err(Error::DimensionMismatch {
                expected: base_point.len(),
                found: directions.rows(),
            });
        }
        let gram = directions.transpose_mul(&directions)?;
        for i in 0..gram.rows() {
            for j in 0..gram.cols() {
                let want = if i == j { 1.0 } else { 0.0 };
                if (gram[(i, j)] - want).abs() > ORTHO_TOL {
                    return Err(Error::InvalidArgument(
                        "direction columns are not orthonormal".into(),
                    ));
                }
            }
        }
        Ok(AffineSubspace {
            base_point,
            directions,
        })
    }

    /// A single point, viewed as a 0-dimensional affine subspace.
    pub fn point(p: Vec<f64>) -> Result<Self> {
        AffineSubspace::new(p, &[])
    }

    pub fn ambient_dim(&self) -> usize {
        self.base_point.len()
    }

    pub fn dim(&self) -> usize {
        self.directions.cols()
    }

    pub fn base_point(&self) -> &[f64] {
        &self.base_point
    }

    pub fn directions(&self) -> &Matrix {
        &self.directions
    }

    /// Image under `x ↦ A x + b`. Directions are re-orthonormalized.
    pub fn map_affine(&self, a: &Matrix, b: &[f64]) -> Result<Self> {
        let mut p = a.mul_vec(&self.base_point)?;
        for (pi, bi) in p.iter_mut().zip(b) {
            *pi += bi;
        }
        let dirs = self
            .directions
            .columns()
            .map(|d| a.mul_vec(d))
            .collect::<Result<Vec<_>>>()?;
        AffineSubspace::new(p, &dirs)
    }

    pub fn lift(&self) -> LiftedSubspace {
        lift(self)
    }
}

/// Linear subspace of R^{N+1} with an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedSubspace {
    basis: Matrix,
}

impl LiftedSubspace {
    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }
}

/// Lifts `p + span(D)` to `span{(d, 0)} ⊕ span{(p, 1)}` in R^{N+1}.
pub fn lift(v: &AffineSubspace) -> LiftedSubspace {
    let n = v.ambient_dim();
    let k = v.dim();
    let mut basis = Matrix::zeros(n + 1, k + 1);
    for j in 0..k {
        basis.column_mut(j)[..n].copy_from_slice(v.directions.column(j));
    }
    // (p, 1) minus its projection onto the directions; the last coordinate
    // keeps it nonzero.
    let mut r = v.base_point.clone();
    r.push(1.0);
    for _ in 0..2 {
        for j in 0..k {
            let c = dot(basis.column(j), &r);
            linalg::axpy(-c, basis.column(j), &mut r);
        }
    }
    let nr = linalg::norm(&r);
    for (dst, x) in basis.column_mut(k).iter_mut().zip(&r) {
        *dst = x / nr;
    }
    LiftedSubspace { basis }
}

/// Result of a skewness test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkewTest {
    pub skew: bool,
    pub margin: f64,
}

/// Margin between two lifted subspaces: σ_min of `[A | B]`, or 0 when the
/// combined dimension exceeds the ambient one.
pub fn lifted_margin(a: &LiftedSubspace, b: &LiftedSubspace) -> Result<f64> {
    let mut buf = Vec::new();
    lifted_margin_with(a, b, &mut buf)
}

pub(crate) fn lifted_margin_with(
    a: &LiftedSubspace,
    b: &LiftedSubspace,
    buf: &mut Vec<f64>,
) -> Result<f64> {
    let rows = a.ambient_dim();
    if b.ambient_dim() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: b.ambient_dim(),
        });
    }
    let cols = a.dim() + b.dim();
    if cols > rows {
        return Ok(0.0);
    }
    buf.clear();
    buf.extend_from_slice(a.basis.as_col_major());
    buf.extend_from_slice(b.basis.as_col_major());
    Ok(linalg::sigma_min_in_place(buf, rows, cols).min(1.0))
}

/// Skewness of two affine subspaces of the same R^N.
///
/// Fails the dimension condition `dim v + dim w + 1 ≤ N` with margin 0.
pub fn are_skew(v: &AffineSubspace, w: &AffineSubspace, tol: f64) -> Result<SkewTest> {
    if v.ambient_dim() != w.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: v.ambient_dim(),
            found: w.ambient_dim(),
        });
    }
    let margin = lifted_margin(&lift(v), &lift(w))?;
    let fits = v.dim() + w.dim() + 2 <= v.ambient_dim() + 1;
    Ok(SkewTest {
        skew: fits && margin > tol,
        margin,
    })
}

/// Margin between the tangent space of `e1` at `s` and that of `e2` at `t`.
pub fn skew_margin_pair(
    e1: &Embedding,
    s: &[f64],
    e2: &Embedding,
    t: &[f64],
) -> Result<f64> {
    if e1.ambient_dim() != e2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: e1.ambient_dim(),
            found: e2.ambient_dim(),
        });
    }
    let a = e1.tangent_space(s)?;
    let b = e2.tangent_space(t)?;
    Ok(are_skew(&a, &b, DEFAULT_SKEW_TOL)?.margin)
}
