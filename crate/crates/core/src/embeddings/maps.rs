use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::domain::{orthonormal_complement, Domain};
use super::{Embedding, Parametrization};
use crate::bilinear::BilinearMap;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Coefficient basis of a parametric curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `Σ_j c_j x^j` on `[-1, 1]`.
    Polynomial,
    /// `a_0 + Σ_h a_h cos hθ + b_h sin hθ` on the circle.
    Fourier,
}

impl std::str::FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polynomial" => Ok(Basis::Polynomial),
            "fourier" => Ok(Basis::Fourier),
            _ => Err(Error::InvalidArgument(format!("unknown basis {s:?}"))),
        }
    }
}

/// Polynomial curve; coefficients are stored per ambient coordinate,
/// `degree + 1` each, lowest power first.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialCurve {
    ambient: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

impl PolynomialCurve {
    pub fn new(ambient: usize, coeffs: Vec<f64>) -> Result<Self> {
        if ambient == 0 || coeffs.is_empty() || coeffs.len() % ambient != 0 {
            return Err(Error::Shape(format!(
                "{} polynomial coefficients do not split over {ambient} coordinates",
                coeffs.len()
            )));
        }
        Ok(PolynomialCurve {
            ambient,
            degree: coeffs.len() / ambient - 1,
            coeffs,
        })
    }

    fn derivative(&self, x: f64, order: usize) -> Vec<f64> {
        self.coeffs
            .chunks(self.degree + 1)
            .map(|c| {
                // Horner on the order-th derivative's coefficients.
                let mut acc = 0.0;
                for j in (order..=self.degree).rev() {
                    let falling: f64 = (j + 1 - order..=j).map(|v| v as f64).product();
                    acc = acc * x + c[j] * falling;
                }
                acc
            })
            .collect()
    }
}

impl Parametrization for PolynomialCurve {
    fn value(&self, p: &[f64]) -> Vec<f64> {
        self.derivative(p[0], 0)
    }

    fn frame(&self, p: &[f64]) -> Matrix {
        Matrix::from_columns(self.ambient, &[self.derivative(p[0], 1)]).expect("finite")
    }

    fn higher_derivative(&self, p: &[f64], order: usize) -> Option<Vec<f64>> {
        Some(self.derivative(p[0], order))
    }
}

/// Trigonometric curve; per coordinate `[a_0, a_1, b_1, ..., a_H, b_H]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCurve {
    ambient: usize,
    harmonics: usize,
    coeffs: Vec<f64>,
}

impl FourierCurve {
    pub fn new(ambient: usize, coeffs: Vec<f64>) -> Result<Self> {
        let per = if ambient == 0 { 0 } else { coeffs.len() / ambient };
        if ambient == 0 || coeffs.len() % ambient != 0 || per % 2 == 0 {
            return Err(Error::Shape(format!(
                "{} Fourier coefficients are not {ambient} x (2H+1)",
                coeffs.len()
            )));
        }
        Ok(FourierCurve {
            ambient,
            harmonics: (per - 1) / 2,
            coeffs,
        })
    }

    fn derivative(&self, th: f64, order: usize) -> Vec<f64> {
        let shift = order as f64 * FRAC_PI_2;
        self.coeffs
            .chunks(2 * self.harmonics + 1)
            .map(|c| {
                let mut acc = if order == 0 { c[0] } else { 0.0 };
                for h in 1..=self.harmonics {
                    let hf = h as f64;
                    let (s, co) = (hf * th + shift).sin_cos();
                    acc += hf.powi(order as i32) * (c[2 * h - 1] * co + c[2 * h] * s);
                }
                acc
            })
            .collect()
    }
}

impl Parametrization for FourierCurve {
    fn value(&self, p: &[f64]) -> Vec<f64> {
        self.derivative(p[0], 0)
    }

    fn frame(&self, p: &[f64]) -> Matrix {
        Matrix::from_columns(self.ambient, &[self.derivative(p[0], 1)]).expect("finite")
    }

    fn higher_derivative(&self, p: &[f64], order: usize) -> Option<Vec<f64>> {
        Some(self.derivative(p[0], order))
    }
}

/// `x ↦ (x, B(x, x))` on the unit sphere of R^{n+1}.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearSphere {
    map: BilinearMap,
}

impl BilinearSphere {
    pub fn map(&self) -> &BilinearMap {
        &self.map
    }
}

impl Parametrization for BilinearSphere {
    fn value(&self, p: &[f64]) -> Vec<f64> {
        let mut v = p.to_vec();
        v.extend(self.map.eval_unchecked(p, p));
        v
    }

    /// Columns `(v, B(x,v) + B(v,x))` over an orthonormal basis of `x^⊥`;
    /// for symmetric `B` this is `(v, 2B(x,v))`.
    fn frame(&self, p: &[f64]) -> Matrix {
        let cols: Vec<Vec<f64>> = orthonormal_complement(p)
            .into_iter()
            .map(|v| {
                let left = self.map.eval_unchecked(p, &v);
                let right = self.map.eval_unchecked(&v, p);
                let mut c = v;
                c.extend(left.iter().zip(&right).map(|(a, b)| a + b));
                c
            })
            .collect();
        Matrix::from_columns(p.len() + self.map.dim_out(), &cols).expect("finite")
    }
}

/// Real form of `z ↦ (z, z², z³)` on a disk in C = R².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexCubic;

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

impl Parametrization for ComplexCubic {
    fn value(&self, p: &[f64]) -> Vec<f64> {
        let z = (p[0], p[1]);
        let z2 = cmul(z, z);
        let z3 = cmul(z2, z);
        vec![z.0, z.1, z2.0, z2.1, z3.0, z3.1]
    }

    /// `∂/∂x` is the real form of `(1, 2z, 3z²)`, `∂/∂y` that of `i(1, 2z, 3z²)`.
    fn frame(&self, p: &[f64]) -> Matrix {
        let z = (p[0], p[1]);
        let z2 = cmul(z, z);
        let d = [(1.0, 0.0), (2.0 * z.0, 2.0 * z.1), (3.0 * z2.0, 3.0 * z2.1)];
        let dx: Vec<f64> = d.iter().flat_map(|c| [c.0, c.1]).collect();
        let dy: Vec<f64> = d.iter().flat_map(|c| [-c.1, c.0]).collect();
        Matrix::from_columns(6, &[dx, dy]).expect("finite")
    }
}

/// Unit sphere S^n placed in coordinates `offset..offset+n+1` of R^N.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereFactor {
    n: usize,
    offset: usize,
    ambient: usize,
}

impl Parametrization for SphereFactor {
    fn value(&self, p: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.ambient];
        v[self.offset..self.offset + self.n + 1].copy_from_slice(p);
        v
    }

    fn frame(&self, p: &[f64]) -> Matrix {
        let cols: Vec<Vec<f64>> = orthonormal_complement(p)
            .into_iter()
            .map(|u| {
                let mut c = vec![0.0; self.ambient];
                c[self.offset..self.offset + self.n + 1].copy_from_slice(&u);
                c
            })
            .collect();
        Matrix::from_columns(self.ambient, &cols).expect("finite")
    }
}

/// Another parametrization followed by a translation.
#[derive(Debug)]
pub struct Translated {
    pub(crate) inner: Arc<dyn Parametrization>,
    pub(crate) shift: Vec<f64>,
}

impl Parametrization for Translated {
    fn value(&self, p: &[f64]) -> Vec<f64> {
        let mut v = self.inner.value(p);
        v.iter_mut().zip(&self.shift).for_each(|(a, b)| *a += b);
        v
    }

    fn frame(&self, p: &[f64]) -> Matrix {
        self.inner.frame(p)
    }

    fn higher_derivative(&self, p: &[f64], order: usize) -> Option<Vec<f64>> {
        self.inner.higher_derivative(p, order)
    }
}

fn standard_interval() -> Domain {
    Domain::Interval { lo: -1.0, hi: 1.0 }
}

/// `x ↦ (x, x², x³)` on `[-1, 1]`.
pub fn cubic_curve() -> Embedding {
    let coeffs = vec![
        0.0, 1.0, 0.0, 0.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0,
    ];
    let map = PolynomialCurve::new(3, coeffs).expect("valid shape");
    Embedding::new("cubic", standard_interval(), 3, Arc::new(map))
}

/// `θ ↦ (cos θ, sin θ, cos 2θ, sin 2θ)`, i.e. `z ↦ (z, z²)` on the unit circle.
pub fn circle_quadratic() -> Embedding {
    let coeffs = vec![
        0.0, 1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 1.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 0.0, 1.0,
    ];
    let map = FourierCurve::new(4, coeffs).expect("valid shape");
    Embedding::new("circle-quadratic", Domain::Circle, 4, Arc::new(map))
}

/// `θ ↦ (cos θ, sin θ, 0)`.
pub fn planar_circle_in_r3() -> Embedding {
    let coeffs = vec![
        0.0, 1.0, 0.0, //
        0.0, 0.0, 1.0, //
        0.0, 0.0, 0.0,
    ];
    let map = FourierCurve::new(3, coeffs).expect("valid shape");
    Embedding::new("planar-circle", Domain::Circle, 3, Arc::new(map))
}

/// `x ↦ (x, B(x, x))` on S^n for a square map `B: R^{n+1} × R^{n+1} → R^c`.
///
/// Whether this is totally skew depends on `B` being symmetric and
/// nonsingular; that is for the caller (or `verify`) to establish.
pub fn bilinear_sphere(b: BilinearMap) -> Result<Embedding> {
    if !b.is_square() {
        return Err(Error::Shape(format!(
            "bilinear sphere needs a square map, got {}x{}",
            b.dim_left(),
            b.dim_right()
        )));
    }
    let n = b.dim_left() - 1;
    let domain = Domain::sphere(n)?;
    let ambient = n + 1 + b.dim_out();
    Ok(Embedding::new(
        "bilinear-sphere",
        domain,
        ambient,
        Arc::new(BilinearSphere { map: b }),
    ))
}

/// Real form of `z ↦ (z, z², z³)` on the closed unit disk, in R^6.
pub fn complex_cubic_disk() -> Embedding {
    Embedding::new(
        "complex-cubic-disk",
        Domain::Disk { n: 2, radius: 1.0 },
        6,
        Arc::new(ComplexCubic),
    )
}

/// `S^{n1} × {0}` and `{0} × S^{n2}` in `R^{n1+1} × R^{n2+1}`.
pub fn sphere_pair(n1: usize, n2: usize) -> Result<(Embedding, Embedding)> {
    let d1 = Domain::sphere(n1)?;
    let d2 = Domain::sphere(n2)?;
    let ambient = n1 + n2 + 2;
    let first = SphereFactor {
        n: n1,
        offset: 0,
        ambient,
    };
    let second = SphereFactor {
        n: n2,
        offset: n1 + 1,
        ambient,
    };
    Ok((
        Embedding::new(format!("sphere-pair:{n1},{n2}/first"), d1, ambient, Arc::new(first)),
        Embedding::new(format!("sphere-pair:{n1},{n2}/second"), d2, ambient, Arc::new(second)),
    ))
}

/// Curve from basis coefficients laid out per ambient coordinate:
/// `degree + 1` polynomial coefficients or `2H + 1` Fourier coefficients each.
pub fn parametric_curve(coeffs: Vec<f64>, basis: Basis, ambient_dim: usize) -> Result<Embedding> {
    match basis {
        Basis::Polynomial => {
            let map = PolynomialCurve::new(ambient_dim, coeffs)?;
            let name = format!("parametric:polynomial:{ambient_dim}:{}", map.degree);
            Ok(Embedding::new(name, standard_interval(), ambient_dim, Arc::new(map)))
        }
        Basis::Fourier => {
            let map = FourierCurve::new(ambient_dim, coeffs)?;
            let name = format!("parametric:fourier:{ambient_dim}:{}", map.harmonics);
            Ok(Embedding::new(name, Domain::Circle, ambient_dim, Arc::new(map)))
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::bilinear::{convolution_map, quaternion_map};
    use crate::linalg::{norm, rank};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn cubic_values_and_jets() {
        let c = cubic_curve();
        let j0 = c.jet(&[0.0], 3).unwrap();
        assert_eq!(j0.value, vec![0.0, 0.0, 0.0]);
        assert_eq!(j0.frame.column(0), &[1.0, 0.0, 0.0]);
        assert_eq!(j0.higher[1], vec![0.0, 0.0, 6.0]);
        let j1 = c.jet(&[1.0], 1).unwrap();
        assert_eq!(j1.value, vec![1.0, 1.0, 1.0]);
        assert_eq!(j1.frame.column(0), &[1.0, 2.0, 3.0]);
        for x in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            let j = c.jet(&[x], 3).unwrap();
            let m = Matrix::from_columns(
                3,
                &[j.frame.column(0).to_vec(), j.higher[0].clone(), j.higher[1].clone()],
            )
            .unwrap();
            assert_eq!(rank(&m, 1e-10).unwrap(), 3);
        }
    }

    #[test]
    fn circle_quadratic_values() {
        let c = circle_quadratic();
        assert!(close(&c.value(&[0.0]).unwrap(), &[1.0, 0.0, 1.0, 0.0], 1e-15));
        assert!(close(&c.value(&[PI]).unwrap(), &[-1.0, 0.0, 1.0, 0.0], 1e-15));
        let j = c.jet(&[0.0], 2).unwrap();
        assert!(close(j.frame.column(0), &[0.0, 1.0, 0.0, 2.0], 1e-15));
        assert!(close(&j.higher[0], &[-1.0, 0.0, -4.0, 0.0], 1e-15));
    }

    #[test]
    fn planar_circle_tangents_antiparallel() {
        let c = planar_circle_in_r3();
        assert!(close(&c.value(&[0.0]).unwrap(), &[1.0, 0.0, 0.0], 1e-15));
        for th in [0.0, 0.4, 2.0] {
            let a = c.jet(&[th], 1).unwrap().frame;
            let b = c.jet(&[th + PI], 1).unwrap().frame;
            assert!(close(a.column(0), &b.column(0).iter().map(|v| -v).collect::<Vec<_>>(), 1e-15));
        }
    }

    #[test]
    fn bilinear_sphere_convolution_examples() {
        let e = bilinear_sphere(convolution_map(1)).unwrap();
        assert_eq!(e.ambient_dim(), 5);
        assert_eq!(e.value(&[1.0, 0.0]).unwrap(), vec![1.0, 0.0, 1.0, 0.0, 0.0]);
        let f = e.jet(&[1.0, 0.0], 1).unwrap().frame;
        // Householder basis of (1,0)^⊥ is ±(0,1).
        let col = f.column(0);
        let s = col[1].signum();
        assert!(close(&col.iter().map(|v| v * s).collect::<Vec<_>>(), &[0.0, 1.0, 0.0, 2.0, 0.0], 1e-15));

        let e2 = bilinear_sphere(convolution_map(2)).unwrap();
        assert_eq!(
            e2.value(&[1.0, 0.0, 0.0]).unwrap(),
            vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn bilinear_sphere_antipodes_share_second_block() {
        for b in [convolution_map(2), quaternion_map()] {
            let e = bilinear_sphere(b).unwrap();
            let m = e.domain().coord_len();
            let x: Vec<f64> = (0..m).map(|i| (i as f64 + 1.0).sin()).collect();
            let n = norm(&x);
            let x: Vec<f64> = x.iter().map(|v| v / n).collect();
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            let a = e.value(&x).unwrap();
            let b = e.value(&neg).unwrap();
            assert!(close(&a[m..], &b[m..], 1e-15));
            assert!(close(&a[..m], &x, 0.0));
            assert!(close(&b[..m], &neg, 0.0));
        }
    }

    #[test]
    fn bilinear_sphere_rejects_non_square() {
        let b = BilinearMap::zero(2, 3, 1).unwrap();
        assert!(bilinear_sphere(b).is_err());
    }

    #[test]
    fn complex_cubic_examples() {
        let d = complex_cubic_disk();
        let j = d.jet(&[0.0, 0.0], 1).unwrap();
        assert_eq!(j.value, vec![0.0; 6]);
        assert_eq!(j.frame.column(0), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(j.frame.column(1), &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let j1 = d.jet(&[1.0, 0.0], 1).unwrap();
        assert_eq!(j1.value, vec![1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(j1.frame.column(0), &[1.0, 0.0, 2.0, 0.0, 3.0, 0.0]);
        assert_eq!(j1.frame.column(1), &[0.0, 1.0, 0.0, 2.0, 0.0, 3.0]);
        assert!(d.jet(&[0.0, 0.0], 2).is_err());
    }

    #[test]
    fn sphere_pair_factors() {
        let (a, b) = sphere_pair(1, 1).unwrap();
        assert_eq!(a.ambient_dim(), 4);
        assert_eq!(a.value(&[0.0, 1.0]).unwrap(), vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(b.value(&[0.0, 1.0]).unwrap(), vec![0.0, 0.0, 0.0, 1.0]);
        for th in [0.0, 1.0, 2.5] {
            let f = a.jet(&[f64::cos(th), f64::sin(th)], 1).unwrap().frame;
            assert_eq!(&f.column(0)[2..], &[0.0, 0.0]);
        }
        let (_, c) = sphere_pair(1, 2).unwrap();
        assert_eq!(c.ambient_dim(), 5);
        assert!(sphere_pair(0, 1).is_err());
    }

    #[test]
    fn parametric_reproduces_catalog_curves() {
        let poly = parametric_curve(
            vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            Basis::Polynomial,
            3,
        )
        .unwrap();
        let fourier = parametric_curve(
            vec![
                0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0,
                0.0, 0.0, 0.0, 1.0,
            ],
            Basis::Fourier,
            4,
        )
        .unwrap();
        for x in [-1.0, -0.25, 0.5, 1.0] {
            assert_eq!(poly.value(&[x]).unwrap(), cubic_curve().value(&[x]).unwrap());
        }
        for th in [0.0, 1.0, 3.0, 6.0] {
            assert!(close(
                &fourier.value(&[th]).unwrap(),
                &circle_quadratic().value(&[th]).unwrap(),
                1e-15
            ));
        }
        assert!(parametric_curve(vec![1.0; 7], Basis::Polynomial, 3).is_err());
        assert!(parametric_curve(vec![1.0; 8], Basis::Fourier, 4).is_err());
    }

    #[test]
    fn translated_shifts_values_only() {
        let c = planar_circle_in_r3();
        let t = c.translated(vec![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(t.value(&[0.0]).unwrap(), vec![1.0, 0.0, 1.0]);
        assert_eq!(t.jet(&[0.3], 3).unwrap().frame, c.jet(&[0.3], 3).unwrap().frame);
        assert!(c.translated(vec![0.0]).is_err());
    }
}
