//! Bilinear maps `R^a × R^b → R^c` stored as dense coefficient tensors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::norm;

/// Default sampled-margin threshold above which a symmetric map is treated
/// as numerically nonsingular.
pub const NONSINGULAR_THRESHOLD: f64 = 1e-3;

/// Entry `(k, i, j)` is the coefficient of `x_i y_j` in output coordinate `k`;
/// `coeffs` is row-major in `(k, i, j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBilinearMap")]
pub struct BilinearMap {
    a: usize,
    b: usize,
    c: usize,
    coeffs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawBilinearMap {
    a: usize,
    b: usize,
    c: usize,
    coeffs: Vec<f64>,
}

impl TryFrom<RawBilinearMap> for BilinearMap {
    type Error = Error;
    fn try_from(r: RawBilinearMap) -> Result<Self> {
        BilinearMap::new(r.a, r.b, r.c, r.coeffs)
    }
}

/// Outcome of a symmetry check.
#[derive(Clone, Debug, PartialEq)]
pub enum Symmetry {
    Symmetric,
    /// `B(x, y) != B(y, x)` for this pair of basis vectors.
    Asymmetric { x: Vec<f64>, y: Vec<f64> },
}

impl Symmetry {
    pub fn is_symmetric(&self) -> bool {
        matches!(self, Symmetry::Symmetric)
    }
}

/// Which exactly-nonsingular convolution family a tensor belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvolutionFamily {
    /// Real polynomial multiplication, degree `n` factors.
    Real { n: usize },
    /// Complex polynomial multiplication with `l` complex coefficients per factor.
    Complex { l: usize },
}

impl BilinearMap {
    pub fn new(a: usize, b: usize, c: usize, coeffs: Vec<f64>) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::Shape(format!("dimensions must be positive: {a}x{b}->{c}")));
        }
        if coeffs.len() != a * b * c {
            return Err(Error::DimensionMismatch {
                expected: a * b * c,
                found: coeffs.len(),
            });
        }
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(BilinearMap { a, b, c, coeffs })
    }

    pub fn zero(a: usize, b: usize, c: usize) -> Result<Self> {
        BilinearMap::new(a, b, c, vec![0.0; a * b * c])
    }

    pub fn dim_left(&self) -> usize {
        self.a
    }

    pub fn dim_right(&self) -> usize {
        self.b
    }

    pub fn dim_out(&self) -> usize {
        self.c
    }

    pub fn is_square(&self) -> bool {
        self.a == self.b
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn idx(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.a + i) * self.b + j
    }

    pub fn coeff(&self, k: usize, i: usize, j: usize) -> f64 {
        self.coeffs[self.idx(k, i, j)]
    }

    pub fn set_coeff(&mut self, k: usize, i: usize, j: usize, v: f64) {
        let idx = self.idx(k, i, j);
        self.coeffs[idx] = v;
    }

    /// `B(x, y)`.
    pub fn evaluate(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.a {
            return Err(Error::DimensionMismatch {
                expected: self.a,
                found: x.len(),
            });
        }
        if y.len() != self.b {
            return Err(Error::DimensionMismatch {
                expected: self.b,
                found: y.len(),
            });
        }
        Ok(self.eval_unchecked(x, y))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let ab = self.a * self.b;
        self.coeffs
            .chunks(ab)
            .map(|slab| {
                slab.chunks(self.b)
                    .zip(x)
                    .filter(|(_, &xi)| xi != 0.0)
                    .map(|(row, &xi)| xi * row.iter().zip(y).map(|(c, yj)| c * yj).sum::<f64>())
                    .sum()
            })
            .collect()
    }

    /// Checks `coeffs(k,i,j) = coeffs(k,j,i)` within `tol`. On failure the
    /// witness is the first basis pair `(e_i, e_j)`, `i < j`, that differs.
    pub fn is_symmetric(&self, tol: f64) -> Result<Symmetry> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "symmetry needs a square map, got {}x{}",
                self.a, self.b
            )));
        }
        for i in 0..self.a {
            for j in i + 1..self.b {
                for k in 0..self.c {
                    if (self.coeff(k, i, j) - self.coeff(k, j, i)).abs() > tol {
                        let mut x = vec![0.0; self.a];
                        let mut y = vec![0.0; self.a];
                        x[i] = 1.0;
                        y[j] = 1.0;
                        return Ok(Symmetry::Asymmetric { x, y });
                    }
                }
            }
        }
        Ok(Symmetry::Symmetric)
    }

    /// Identifies the map as an exact member of one of the convolution
    /// families, comparing every coefficient exactly.
    pub fn convolution_family(&self) -> Option<ConvolutionFamily> {
        if self.a == self.b && self.c == 2 * self.a - 1 && *self == convolution_map(self.a - 1) {
            return Some(ConvolutionFamily::Real { n: self.a - 1 });
        }
        if self.a == self.b && self.a % 2 == 0 && self.c + 2 == 2 * self.a {
            let l = self.a / 2;
            if *self == complex_convolution_map(l).ok()? {
                return Some(ConvolutionFamily::Complex { l });
            }
        }
        None
    }
}

/// Coefficient product of two real polynomials of degree `n`:
/// `B(x, y)_k = Σ_{i+j=k} x_i y_j`, `R^{n+1} × R^{n+1} → R^{2n+1}`.
pub fn convolution_map(n: usize) -> BilinearMap {
    let a = n + 1;
    let mut m = BilinearMap::zero(a, a, 2 * n + 1).expect("positive dims");
    for i in 0..a {
        for j in 0..a {
            m.set_coeff(i + j, i, j, 1.0);
        }
    }
    m
}

/// Real form of complex polynomial multiplication `C^l × C^l → C^{2l-1}`,
/// i.e. `R^{2l} × R^{2l} → R^{4l-2}`. Coordinates interleave
/// `(Re z_0, Im z_0, Re z_1, Im z_1, ...)`.
pub fn complex_convolution_map(l: usize) -> Result<BilinearMap> {
    if l == 0 {
        return Err(Error::InvalidArgument("complex convolution needs l >= 1".into()));
    }
    let a = 2 * l;
    let mut m = BilinearMap::zero(a, a, 4 * l - 2)?;
    for p in 0..l {
        for q in 0..l {
            let (re, im) = (2 * (p + q), 2 * (p + q) + 1);
            let (xr, xi, yr, yi) = (2 * p, 2 * p + 1, 2 * q, 2 * q + 1);
            m.set_coeff(re, xr, yr, 1.0);
            m.set_coeff(re, xi, yi, -1.0);
            m.set_coeff(im, xr, yi, 1.0);
            m.set_coeff(im, xi, yr, 1.0);
        }
    }
    Ok(m)
}

/// Hamilton product on `(1, i, j, k)` coordinates, `R^4 × R^4 → R^4`.
pub fn quaternion_map() -> BilinearMap {
    // (output, left, right, sign)
    const TABLE: [(usize, usize, usize, f64); 16] = [
        (0, 0, 0, 1.0),
        (0, 1, 1, -1.0),
        (0, 2, 2, -1.0),
        (0, 3, 3, -1.0),
        (1, 0, 1, 1.0),
        (1, 1, 0, 1.0),
        (1, 2, 3, 1.0),
        (1, 3, 2, -1.0),
        (2, 0, 2, 1.0),
        (2, 1, 3, -1.0),
        (2, 2, 0, 1.0),
        (2, 3, 1, 1.0),
        (3, 0, 3, 1.0),
        (3, 1, 2, 1.0),
        (3, 2, 1, -1.0),
        (3, 3, 0, 1.0),
    ];
    let mut m = BilinearMap::zero(4, 4, 4).expect("positive dims");
    for (k, i, j, s) in TABLE {
        m.set_coeff(k, i, j, s);
    }
    m
}

/// Exact nonsingularity certificate for the convolution families.
///
/// The map is compared coefficient-for-coefficient with the real or complex
/// convolution tensor of the same size. A match means `B(x, y)` lists the
/// coefficients of a product of two polynomials over R or C, and such a
/// product of nonzero polynomials is never zero.
pub fn certify_convolution_nonsingular(b: &BilinearMap) -> Result<bool> {
    match b.convolution_family() {
        Some(_) => Ok(true),
        None => Err(Error::NotConvolution(format!(
            "{}x{}->{} tensor matches neither the real nor the complex convolution",
            b.a, b.b, b.c
        ))),
    }
}

/// Shifted Kronecker (R_d) sequence in `[0,1)^d`, one point per call.
pub(crate) struct Kronecker {
    alpha: Vec<f64>,
    state: Vec<f64>,
}

impl Kronecker {
    pub(crate) fn new(dim: usize, shift: Vec<f64>) -> Self {
        // phi_d is the unique positive root of x^{d+1} = x + 1.
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
        }
        let alpha = (1..=dim).map(|j| (1.0 / phi.powi(j as i32)).fract()).collect();
        Kronecker { alpha, state: shift }
    }

    pub(crate) fn next_point(&mut self) -> &[f64] {
        for (s, a) in self.state.iter_mut().zip(&self.alpha) {
            *s = (*s + a).fract();
        }
        &self.state
    }
}

/// Maps uniforms to a unit vector through Box-Muller normals.
fn unit_from_uniforms(u: &[f64], dim: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(dim + 1);
    for pair in u.chunks(2) {
        let u1 = 1.0 - pair[0];
        let u2 = pair[1];
        let r = (-2.0 * u1.ln()).sqrt();
        let th = std::f64::consts::TAU * u2;
        v.push(r * th.cos());
        v.push(r * th.sin());
    }
    v.truncate(dim);
    let n = norm(&v);
    if n == 0.0 {
        let mut e = vec![0.0; dim];
        e[0] = 1.0;
        return e;
    }
    v.iter_mut().for_each(|x| *x /= n);
    v
}

/// Minimum of `|B(x, y)|` over `samples` quasi-random pairs of unit vectors.
///
/// Numeric evidence only: a positive value does not prove nonsingularity and
/// a tiny one does not prove singularity. Deterministic for a fixed seed.
pub fn nonsingularity_margin(b: &BilinearMap, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let ua = b.a + b.a % 2;
    let ub = b.b + b.b % 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..ua + ub).map(|_| rng.random::<f64>()).collect();
    let mut seq = Kronecker::new(ua + ub, shift);
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let u = seq.next_point();
        let x = unit_from_uniforms(&u[..ua], b.a);
        let y = unit_from_uniforms(&u[ua..], b.b);
        best = best.min(norm(&b.eval_unchecked(&x, &y)));
    }
    Ok(best)
}
