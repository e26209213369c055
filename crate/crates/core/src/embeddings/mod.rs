//! Parametrized embeddings with analytic jets.
//!
//! An [`Embedding`] pairs a [`Domain`] with a [`Parametrization`] into R^N.
//! Curves expose derivatives up to order three; higher-dimensional domains
//! expose a tangent frame (order one) only.

mod catalog;
mod domain;
mod maps;

use std::fmt;
use std::sync::Arc;

pub use catalog::{bilinear_map_by_name, by_name, pair_by_name, CATALOG_NAMES};
pub use domain::{orthonormal_complement, Domain, DomainPoint};
pub use maps::{
    bilinear_sphere, circle_quadratic, complex_cubic_disk, cubic_curve, parametric_curve,
    planar_circle_in_r3, sphere_pair, Basis, BilinearSphere, ComplexCubic, FourierCurve,
    PolynomialCurve, SphereFactor, Translated,
};

use crate::affine::{lift, AffineSubspace, LiftedSubspace};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Map from a domain into R^N with analytic derivatives.
///
/// Implementations may assume points already passed [`Domain::check`].
pub trait Parametrization: Send + Sync + fmt::Debug {
    fn value(&self, p: &[f64]) -> Vec<f64>;

    /// Tangent frame: N rows, one column per domain dimension.
    fn frame(&self, p: &[f64]) -> Matrix;

    /// Derivative of order 2 or 3 for curve domains; `None` when not available.
    fn higher_derivative(&self, _p: &[f64], _order: usize) -> Option<Vec<f64>> {
        None
    }
}

/// Derivative data at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub value: Vec<f64>,
    /// First derivative(s): N × dim.
    pub frame: Matrix,
    /// For curves: derivatives of order 2..=order.
    pub higher: Vec<Vec<f64>>,
}

#[derive(Clone)]
pub struct Embedding {
    name: String,
    domain: Domain,
    ambient_dim: usize,
    map: Arc<dyn Parametrization>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Embedding")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("ambient_dim", &self.ambient_dim)
            .finish()
    }
}

impl Embedding {
    pub fn new(
        name: impl Into<String>,
        domain: Domain,
        ambient_dim: usize,
        map: Arc<dyn Parametrization>,
    ) -> Self {
        Embedding {
            name: name.into(),
            domain,
            ambient_dim,
            map,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_curve(&self) -> bool {
        self.domain.is_curve()
    }

    pub fn value(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.domain.check(p)?;
        Ok(self.map.value(p))
    }

    /// Value and derivatives up to `order` (1..=3; orders above 1 for curves only).
    pub fn jet(&self, p: &[f64], order: usize) -> Result<Jet> {
        self.domain.check(p)?;
        if !(1..=3).contains(&order) {
            return Err(Error::Unsupported(format!("jet order {order}")));
        }
        let mut higher = Vec::new();
        for k in 2..=order {
            if !self.is_curve() {
                return Err(Error::Unsupported(format!(
                    "order-{order} jets on a {}-dimensional domain",
                    self.domain.dim()
                )));
            }
            let d = self
                .map
                .higher_derivative(p, k)
                .ok_or_else(|| Error::Unsupported(format!("order-{k} derivative of {}", self.name)))?;
            higher.push(d);
        }
        Ok(Jet {
            value: self.map.value(p),
            frame: self.map.frame(p),
            higher,
        })
    }

    /// σ_min of the tangent frame with unit-normalized columns; zero when a
    /// column vanishes. Positive exactly where the map is an immersion.
    pub fn frame_sigma_min(&self, p: &[f64]) -> Result<f64> {
        self.domain.check(p)?;
        Ok(normalized_sigma_min(&self.map.frame(p)))
    }

    /// Affine tangent space `f(p) + span(df_p)`.
    pub fn tangent_space(&self, p: &[f64]) -> Result<AffineSubspace> {
        self.domain.check(p)?;
        let frame = self.map.frame(p);
        let cols: Vec<Vec<f64>> = frame.columns().map(<[f64]>::to_vec).collect();
        AffineSubspace::new(self.map.value(p), &cols)
    }

    pub fn lifted_tangent(&self, p: &[f64]) -> Result<LiftedSubspace> {
        Ok(lift(&self.tangent_space(p)?))
    }

    /// The same embedding followed by the translation `x ↦ x + shift`.
    pub fn translated(&self, shift: Vec<f64>) -> Result<Embedding> {
        if shift.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: shift.len(),
            });
        }
        Ok(Embedding {
            name: format!("{}+shift", self.name),
            domain: self.domain.clone(),
            ambient_dim: self.ambient_dim,
            map: Arc::new(Translated {
                inner: self.map.clone(),
                shift,
            }),
        })
    }
}

pub(crate) fn normalized_sigma_min(frame: &Matrix) -> f64 {
    if frame.cols() == 0 || frame.rows() < frame.cols() {
        return 0.0;
    }
    let mut buf = frame.as_col_major().to_vec();
    for col in buf.chunks_mut(frame.rows()) {
        let n = linalg::norm(col);
        if n == 0.0 {
            return 0.0;
        }
        col.iter_mut().for_each(|x| *x /= n);
    }
    linalg::sigma_min_in_place(&mut buf, frame.rows(), frame.cols())
}

/// Jet of order `order` at `p`, see [`Embedding::jet`].
pub fn jet(e: &Embedding, p: &[f64], order: usize) -> Result<Jet> {
    e.jet(p, order)
}
