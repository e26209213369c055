use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};

/// A point of a parameter domain.
///
/// Interval and circle points are one coordinate (parameter or angle),
/// sphere points are unit vectors in R^{n+1}, disk points are vectors in R^n.
pub type DomainPoint = Vec<f64>;

const UNIT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Domain {
    Interval { lo: f64, hi: f64 },
    Circle,
    Sphere { n: usize },
    Disk { n: usize, radius: f64 },
}

impl Domain {
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Domain::Interval { lo, hi })
    }

    pub fn sphere(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("sphere dimension must be >= 1".into()));
        }
        Ok(Domain::Sphere { n })
    }

    pub fn disk(n: usize, radius: f64) -> Result<Self> {
        if n == 0 || !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad disk n={n} radius={radius}")));
        }
        Ok(Domain::Disk { n, radius })
    }

    /// Manifold dimension.
    pub fn dim(&self) -> usize {
        match *self {
            Domain::Interval { .. } | Domain::Circle => 1,
            Domain::Sphere { n } | Domain::Disk { n, .. } => n,
        }
    }

    /// Length of a [`DomainPoint`] for this domain.
    pub fn coord_len(&self) -> usize {
        match *self {
            Domain::Interval { .. } | Domain::Circle => 1,
            Domain::Sphere { n } => n + 1,
            Domain::Disk { n, .. } => n,
        }
    }

    pub fn is_curve(&self) -> bool {
        self.dim() == 1 && matches!(self, Domain::Interval { .. } | Domain::Circle)
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Domain::Circle | Domain::Sphere { .. })
    }

    pub fn check(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.coord_len() {
            return Err(Error::DimensionMismatch {
                expected: self.coord_len(),
                found: p.len(),
            });
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        match *self {
            Domain::Interval { lo, hi } if p[0] < lo - UNIT_TOL || p[0] > hi + UNIT_TOL => Err(
                Error::InvalidArgument(format!("{} outside [{lo}, {hi}]", p[0])),
            ),
            Domain::Sphere { .. } if (norm(p) - 1.0).abs() > UNIT_TOL => Err(
                Error::InvalidArgument("sphere points must be unit vectors".into()),
            ),
            Domain::Disk { radius, .. } if norm(p) > radius * (1.0 + UNIT_TOL) => Err(
                Error::InvalidArgument(format!("point outside disk of radius {radius}")),
            ),
            _ => Ok(()),
        }
    }

    /// Intrinsic distance: arc angle on circles and spheres, Euclidean
    /// parameter distance on intervals and disks.
    pub fn distance(&self, s: &[f64], t: &[f64]) -> f64 {
        match self {
            Domain::Interval { .. } => (s[0] - t[0]).abs(),
            Domain::Circle => {
                let d = (s[0] - t[0]).rem_euclid(TAU);
                d.min(TAU - d)
            }
            Domain::Sphere { .. } => {
                // atan2 form stays accurate for nearby and antipodal points.
                let diff: Vec<f64> = s.iter().zip(t).map(|(a, b)| a - b).collect();
                let sum: Vec<f64> = s.iter().zip(t).map(|(a, b)| a + b).collect();
                2.0 * norm(&diff).atan2(norm(&sum))
            }
            Domain::Disk { .. } => {
                s.iter().zip(t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match *self {
            Domain::Interval { lo, hi } => hi - lo,
            Domain::Circle | Domain::Sphere { .. } => PI,
            Domain::Disk { radius, .. } => 2.0 * radius,
        }
    }

    /// Deterministic grid with `res` points per domain dimension; exact
    /// duplicates (sphere poles, disk center) are removed.
    pub fn grid(&self, res: usize) -> Result<Vec<DomainPoint>> {
        if res < 2 {
            return Err(Error::InvalidArgument(format!("grid resolution {res} < 2")));
        }
        let mut pts = match *self {
            Domain::Interval { lo, hi } => (0..res)
                .map(|i| vec![lo + (hi - lo) * i as f64 / (res - 1) as f64])
                .collect(),
            Domain::Circle => (0..res).map(|j| vec![TAU * j as f64 / res as f64]).collect(),
            Domain::Sphere { n } => sphere_grid(n, res),
            Domain::Disk { n, radius } => {
                if n == 1 {
                    (0..res)
                        .map(|i| vec![-radius + 2.0 * radius * i as f64 / (res - 1) as f64])
                        .collect()
                } else {
                    // Radii spaced for uniform area: r ∝ (i/(res-1))^{1/n}.
                    let dirs = sphere_grid(n - 1, res);
                    let mut out = Vec::with_capacity(res * dirs.len());
                    for i in 0..res {
                        let r = radius * (i as f64 / (res - 1) as f64).powf(1.0 / n as f64);
                        for d in &dirs {
                            out.push(d.iter().map(|x| r * x).collect());
                        }
                    }
                    out
                }
            }
        };
        dedup_exact(&mut pts);
        Ok(pts)
    }

    /// Uniformly distributed point (by length, arc, surface or volume measure).
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> DomainPoint {
        match *self {
            Domain::Interval { lo, hi } => vec![lo + (hi - lo) * rng.random::<f64>()],
            Domain::Circle => vec![TAU * rng.random::<f64>()],
            Domain::Sphere { n } => random_unit(n + 1, rng),
            Domain::Disk { n, radius } => {
                let d = random_unit(n, rng);
                let r = radius * rng.random::<f64>().powf(1.0 / n as f64);
                d.into_iter().map(|x| r * x).collect()
            }
        }
    }

    /// Moves from `center` by local coordinates `step` (length [`Domain::dim`])
    /// and returns a valid domain point. Used by local descent.
    pub fn chart_step(&self, center: &[f64], step: &[f64]) -> DomainPoint {
        match *self {
            Domain::Interval { lo, hi } => vec![(center[0] + step[0]).clamp(lo, hi)],
            Domain::Circle => vec![(center[0] + step[0]).rem_euclid(TAU)],
            Domain::Sphere { .. } => {
                let basis = orthonormal_complement(center);
                let mut p = center.to_vec();
                for (b, s) in basis.iter().zip(step) {
                    for (pi, bi) in p.iter_mut().zip(b) {
                        *pi += s * bi;
                    }
                }
                let n = norm(&p);
                p.iter_mut().for_each(|x| *x /= n);
                p
            }
            Domain::Disk { radius, .. } => {
                let mut p: Vec<f64> = center.iter().zip(step).map(|(c, s)| c + s).collect();
                let n = norm(&p);
                if n > radius {
                    p.iter_mut().for_each(|x| *x *= radius / n);
                }
                p
            }
        }
    }
}

fn dedup_exact(pts: &mut Vec<DomainPoint>) {
    let mut seen = std::collections::HashSet::new();
    for p in pts.iter_mut() {
        // -0.0 -> 0.0
        p.iter_mut().for_each(|v| *v += 0.0);
    }
    pts.retain(|p| seen.insert(p.iter().map(|v| v.to_bits()).collect::<Vec<_>>()));
}

fn random_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Hyperspherical-coordinate grid on S^n: polar angles over `[0, π]`
/// inclusive, the last angle over `[0, 2π)`.
fn sphere_grid(n: usize, res: usize) -> Vec<DomainPoint> {
    if n == 0 {
        return vec![vec![1.0], vec![-1.0]];
    }
    // Exact endpoints so pole points coincide bit-for-bit.
    let polar: Vec<(f64, f64)> = (0..res)
        .map(|i| match i {
            0 => (1.0, 0.0),
            _ if i == res - 1 => (-1.0, 0.0),
            _ => {
                let a = PI * i as f64 / (res - 1) as f64;
                (a.cos(), a.sin())
            }
        })
        .collect();
    let azimuth: Vec<f64> = (0..res).map(|j| TAU * j as f64 / res as f64).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut p = Vec::with_capacity(n + 1);
        let mut s = 1.0;
        for &i in &idx[..n - 1] {
            p.push(s * polar[i].0);
            s *= polar[i].1;
        }
        let phi = azimuth[idx[n - 1]];
        p.push(s * phi.cos());
        p.push(s * phi.sin());
        out.push(p);
        // odometer, last index fastest
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < res {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Orthonormal basis of `x^⊥` for a unit vector `x`: columns 1..=n of the
/// Householder reflection that maps `e_0` to `∓x`.
pub fn orthonormal_complement(x: &[f64]) -> Vec<Vec<f64>> {
    let m = x.len();
    let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut w = x.to_vec();
    w[0] += sign;
    let ww = dot(&w, &w);
    (1..m)
        .map(|j| {
            let f = 2.0 * w[j] / ww;
            (0..m)
                .map(|i| if i == j { 1.0 } else { 0.0 } - f * w[i])
                .collect()
        })
        .collect()
}
