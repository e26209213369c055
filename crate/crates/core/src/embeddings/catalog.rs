//! Name-addressable catalog.
//!
//! | name                              | embedding                                  |
//! |-----------------------------------|--------------------------------------------|
//! | `cubic`                           | `x ↦ (x, x², x³)` in R³                    |
//! | `circle-quadratic`                | `z ↦ (z, z²)` on S¹ in R⁴                  |
//! | `planar-circle`                   | unit circle in a plane of R³               |
//! | `complex-cubic-disk`              | `z ↦ (z, z², z³)` on D² in R⁶              |
//! | `bilinear-sphere:n=K`             | convolution sphere S^K in R^{3K+2}         |
//! | `bilinear-sphere:complex:l=L`     | complex convolution sphere S^{2L-1}        |
//! | `bilinear-sphere:quaternion`      | quaternion sphere S³ in R⁸                 |
//! | `parametric:BASIS:N:c0,c1,...`    | parametric curve with inline coefficients  |
//! | `sphere-pair:n1,n2` (pairs only)  | `S^{n1}×{0}` and `{0}×S^{n2}`              |

use super::maps::{
    bilinear_sphere, circle_quadratic, complex_cubic_disk, cubic_curve, parametric_curve,
    planar_circle_in_r3, sphere_pair, Basis,
};
use super::Embedding;
use crate::bilinear::{complex_convolution_map, convolution_map, quaternion_map, BilinearMap};
use crate::error::{Error, Result};

pub const CATALOG_NAMES: &[&str] = &[
    "cubic",
    "circle-quadratic",
    "planar-circle",
    "complex-cubic-disk",
    "bilinear-sphere:n=K",
    "bilinear-sphere:complex:l=L",
    "bilinear-sphere:quaternion",
    "parametric:BASIS:N:c0,c1,...",
    "sphere-pair:n1,n2",
];

fn parse_usize(s: &str, name: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::UnknownEmbedding(name.to_string()))
}

/// Resolves a single-embedding catalog name.
pub fn by_name(name: &str) -> Result<Embedding> {
    let unknown = || Error::UnknownEmbedding(name.to_string());
    let e = match name {
        "cubic" => cubic_curve(),
        "circle-quadratic" => circle_quadratic(),
        "planar-circle" => planar_circle_in_r3(),
        "complex-cubic-disk" => complex_cubic_disk(),
        "bilinear-sphere:quaternion" => bilinear_sphere(quaternion_map())?,
        _ => {
            if let Some(k) = name.strip_prefix("bilinear-sphere:n=") {
                let k = parse_usize(k, name)?;
                if k == 0 {
                    return Err(unknown());
                }
                bilinear_sphere(convolution_map(k))?
            } else if let Some(l) = name.strip_prefix("bilinear-sphere:complex:l=") {
                bilinear_sphere(complex_convolution_map(parse_usize(l, name)?)?)?
            } else if let Some(rest) = name.strip_prefix("parametric:") {
                let mut parts = rest.splitn(3, ':');
                let basis: Basis = parts.next().ok_or_else(unknown)?.parse()?;
                let ambient = parse_usize(parts.next().ok_or_else(unknown)?, name)?;
                let coeffs = parts
                    .next()
                    .ok_or_else(unknown)?
                    .split(',')
                    .map(|c| c.trim().parse::<f64>().map_err(|_| unknown()))
                    .collect::<Result<Vec<_>>>()?;
                return parametric_curve(coeffs, basis, ambient);
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(e.with_name(name))
}

/// The bilinear map behind a `bilinear-sphere:*` catalog name.
pub fn bilinear_map_by_name(name: &str) -> Result<BilinearMap> {
    let unknown = || Error::UnknownEmbedding(name.to_string());
    let rest = name.strip_prefix("bilinear-sphere:").ok_or_else(unknown)?;
    if rest == "quaternion" {
        Ok(quaternion_map())
    } else if let Some(k) = rest.strip_prefix("n=") {
        match parse_usize(k, name)? {
            0 => Err(unknown()),
            k => Ok(convolution_map(k)),
        }
    } else if let Some(l) = rest.strip_prefix("complex:l=") {
        complex_convolution_map(parse_usize(l, name)?)
    } else {
        Err(unknown())
    }
}

/// Resolves a pair name (`sphere-pair:n1,n2`).
pub fn pair_by_name(name: &str) -> Result<(Embedding, Embedding)> {
    let rest = name
        .strip_prefix("sphere-pair:")
        .ok_or_else(|| Error::UnknownEmbedding(name.to_string()))?;
    let (a, b) = rest
        .split_once(',')
        .ok_or_else(|| Error::UnknownEmbedding(name.to_string()))?;
    sphere_pair(parse_usize(a, name)?, parse_usize(b, name)?)
}
