//! Certification harness: sampled total-skewness checks with margins, exact
//! certificates for symmetric nonsingular bilinear spheres, pair checks and
//! witness search.
//!
//! Sampled verdicts are evidence only. [`Verdict::CertifiedExact`] is issued
//! solely by [`certify_bilinear_sphere`] when its hypotheses are verified
//! exactly.

mod descent;
pub(crate) mod engine;
mod report;

use std::io::Write;

use rayon::prelude::*;

pub use descent::{best_pair, find_violation, FindOptions, DESCENT_EXCLUSION};
pub use engine::IMMERSION_TOL;
pub use report::{
    CheckStatus, NearDiagonal, PointPair, SamplingPlan, SkewReport, Verdict, Violation,
    DEFAULT_DELTA, DEFAULT_TOL, MAX_STORED_VIOLATIONS, SUSPICIOUS_MARGIN,
};

use crate::bilinear::{
    certify_convolution_nonsingular, nonsingularity_margin, BilinearMap, ConvolutionFamily,
    Symmetry, NONSINGULAR_THRESHOLD,
};
use crate::embeddings::{bilinear_sphere, normalized_sigma_min, Embedding};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::sampling::{family, stream_rng};
use engine::{sample, sample_grid, scan_product, scan_random, scan_self, Tally};

/// Threshold on the normalized σ_min of `[γ′, γ″, γ‴]`.
pub const NEAR_DIAGONAL_TOL: f64 = 1e-8;

/// Evaluation budget per refinement start.
const REFINE_BUDGET: usize = 2000;

const SYMMETRY_TOL: f64 = 1e-12;

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")))
    }
}

fn refine(tally: &mut Tally, e1: &Embedding, e2: &Embedding, exclusion: Option<f64>) {
    let polished: Vec<Violation> = tally
        .lowest
        .par_iter()
        .map(|v| descent::descend(e1, e2, exclusion, v, REFINE_BUDGET))
        .collect();
    for v in polished {
        let dist = match exclusion {
            Some(_) => e1.domain().distance(&v.s, &v.t),
            None => f64::INFINITY,
        };
        tally.push(&v.s, &v.t, v.margin, dist);
    }
}

fn report_from(
    name: String,
    tally: Tally,
    plan: &SamplingPlan,
    tol: f64,
    near_diagonal: NearDiagonal,
    warnings: Vec<String>,
) -> SkewReport {
    let verdict = if tally.violation_count > 0 {
        Verdict::Refuted
    } else {
        Verdict::CertifiedSampled
    };
    SkewReport {
        embedding: name,
        verdict,
        min_margin: Some(tally.min),
        argmin: tally.argmin.map(|(s, t)| PointPair { s, t }),
        near_diagonal,
        plan: Some(plan.clone()),
        tol,
        pairs_evaluated: tally.pairs,
        pairs_excluded: tally.excluded,
        violations: tally.violations,
        violation_count: tally.violation_count,
        suspicious_count: tally.suspicious,
        certificate_rule: None,
        nonsingularity_margin: None,
        warnings,
    }
}

/// Sampled check that tangent spaces at distinct points are skew.
///
/// Evaluates all unordered grid pairs at intrinsic distance at least
/// `plan.delta`, then `plan.random` random pairs, then polishes the
/// `plan.refine` lowest pairs lying at least [`DESCENT_EXCLUSION`] of the
/// diameter apart. Any margin at or below `tol` refutes.
pub fn verify_totally_skew(e: &Embedding, plan: &SamplingPlan, tol: f64) -> Result<SkewReport> {
    check_tol(tol)?;
    plan.check_for(e.domain())?;
    let far = plan.delta.max(DESCENT_EXCLUSION * e.domain().diameter());
    let grid = sample_grid(e, plan.grid)?;
    let mut tally = Tally::new(tol, plan.refine).with_far(far);
    tally = scan_self(e.domain(), &grid, plan.delta, tally);
    tally = scan_random(e, e, plan.random, plan.seed, Some(plan.delta), tally)?;
    if tally.pairs == 0 {
        return Err(Error::EmptyPairSet { delta: plan.delta });
    }
    if plan.refine > 0 {
        refine(&mut tally, e, e, Some(far));
    }

    let mut warnings = Vec::new();
    let near_diagonal = if e.is_curve() && e.ambient_dim() >= 3 {
        match near_diagonal_check(e, plan.grid) {
            Ok(nd) => {
                if nd.status == CheckStatus::Fail {
                    warnings.push(format!(
                        "near-diagonal rank test failed (sigma_min {:e}); pairs closer than {} are unchecked",
                        nd.worst_sigma.unwrap_or(0.0),
                        plan.delta
                    ));
                }
                nd
            }
            Err(Error::Unsupported(msg)) => {
                warnings.push(format!("near-diagonal test skipped: {msg}"));
                NearDiagonal::not_applicable()
            }
            Err(err) => return Err(err),
        }
    } else {
        warnings.push(format!(
            "pairs closer than delta = {} are excluded without a local test",
            plan.delta
        ));
        NearDiagonal::not_applicable()
    };
    Ok(report_from(e.name().to_string(), tally, plan, tol, near_diagonal, warnings))
}

/// Third-order local test along a curve: `[γ′, γ″, γ‴]` has full rank at every
/// grid point.
pub fn near_diagonal_check(e: &Embedding, grid: usize) -> Result<NearDiagonal> {
    if !e.is_curve() {
        return Err(Error::Unsupported(format!(
            "near-diagonal test needs a curve, got a {}-dimensional domain",
            e.domain().dim()
        )));
    }
    if e.ambient_dim() < 3 {
        return Err(Error::InvalidArgument(format!(
            "near-diagonal test needs ambient dimension >= 3, got {}",
            e.ambient_dim()
        )));
    }
    let mut worst: Option<(f64, Vec<f64>)> = None;
    for p in e.domain().grid(grid)? {
        let jet = e.jet(&p, 3)?;
        let mut cols = vec![jet.frame.column(0).to_vec()];
        cols.extend(jet.higher);
        let sigma = normalized_sigma_min(&Matrix::from_columns(e.ambient_dim(), &cols)?);
        if worst.as_ref().is_none_or(|(w, _)| sigma < *w) {
            worst = Some((sigma, p));
        }
    }
    let (sigma, point) = worst.ok_or(Error::EmptyInput)?;
    Ok(NearDiagonal {
        status: if sigma > NEAR_DIAGONAL_TOL {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        worst_point: Some(point),
        worst_sigma: Some(sigma),
    })
}

/// Certificate for `x ↦ (x, B(x, x))` on the unit sphere from the hypotheses
/// "B symmetric and nonsingular".
///
/// Symmetry is checked exactly on the coefficients. Nonsingularity is exact
/// for the real and complex convolution families and sampled otherwise, which
/// only supports [`Verdict::CertifiedSampled`].
pub fn certify_bilinear_sphere(b: &BilinearMap, samples: usize, seed: u64) -> Result<SkewReport> {
    if !b.is_square() {
        return Err(Error::InvalidArgument(format!(
            "bilinear sphere needs a square map, got {}x{}",
            b.dim_left(),
            b.dim_right()
        )));
    }
    if let Symmetry::Asymmetric { x, y } = b.is_symmetric(SYMMETRY_TOL)? {
        return Err(Error::Asymmetric { x, y });
    }
    let name = bilinear_sphere(b.clone())?.name().to_string();
    let sampled = if samples > 0 {
        Some(nonsingularity_margin(b, samples, seed)?)
    } else {
        None
    };
    let (verdict, rule) = match b.convolution_family() {
        Some(fam) if certify_convolution_nonsingular(b)? => {
            let which = match fam {
                ConvolutionFamily::Real { n } => format!("real convolution, n = {n}"),
                ConvolutionFamily::Complex { l } => format!("complex convolution, l = {l}"),
            };
            (
                Verdict::CertifiedExact,
                format!("symmetric nonsingular bilinear map ({which}; symmetry and nonsingularity exact)"),
            )
        }
        _ => {
            let margin = sampled.ok_or_else(|| {
                Error::InvalidArgument("sampled nonsingularity needs samples >= 1".into())
            })?;
            if margin <= NONSINGULAR_THRESHOLD {
                return Err(Error::NotCertified {
                    margin,
                    threshold: NONSINGULAR_THRESHOLD,
                });
            }
            (
                Verdict::CertifiedSampled,
                "symmetric nonsingular bilinear map (symmetry exact; nonsingularity sampled)".to_string(),
            )
        }
    };
    Ok(SkewReport {
        embedding: name,
        verdict,
        min_margin: None,
        argmin: None,
        near_diagonal: NearDiagonal::not_applicable(),
        plan: None,
        tol: DEFAULT_TOL,
        pairs_evaluated: 0,
        pairs_excluded: 0,
        violations: Vec::new(),
        violation_count: 0,
        suspicious_count: 0,
        certificate_rule: Some(rule),
        nonsingularity_margin: sampled,
        warnings: Vec::new(),
    })
}

/// Sampled check that every tangent space of `e1` is skew to every tangent
/// space of `e2`. No pairs are excluded.
pub fn verify_skew_pair(
    e1: &Embedding,
    e2: &Embedding,
    plan: &SamplingPlan,
    tol: f64,
) -> Result<SkewReport> {
    check_tol(tol)?;
    if e1.ambient_dim() != e2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: e1.ambient_dim(),
            found: e2.ambient_dim(),
        });
    }
    SamplingPlan::new(plan.grid, plan.random, plan.delta, plan.seed)?;
    let g1 = sample_grid(e1, plan.grid)?;
    let g2 = sample_grid(e2, plan.grid)?;
    let mut tally = Tally::new(tol, plan.refine);
    tally = scan_product(&g1, &g2, tally);
    tally = scan_random(e1, e2, plan.random, plan.seed, None, tally)?;
    if plan.refine > 0 {
        refine(&mut tally, e1, e2, None);
    }
    let name = format!("{} | {}", e1.name(), e2.name());
    Ok(report_from(name, tally, plan, tol, NearDiagonal::not_applicable(), Vec::new()))
}

/// Images closer than this are treated as intersecting.
const INTERSECT_TOL: f64 = 1e-9;

/// σ_min of the differential of `(x, y) ↦ (x − y)/|x − y|` restricted to the
/// tangent spaces of `e1` at `s` and `e2` at `t` (orthonormal frames).
pub fn gauss_differential_sigma(e1: &Embedding, s: &[f64], e2: &Embedding, t: &[f64]) -> Result<f64> {
    if e1.ambient_dim() != e2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: e1.ambient_dim(),
            found: e2.ambient_dim(),
        });
    }
    let x = e1.value(s)?;
    let y = e2.value(t)?;
    let u: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
    let r = linalg::norm(&u);
    if r < INTERSECT_TOL {
        return Err(Error::ImagesIntersect {
            s: s.to_vec(),
            t: t.to_vec(),
        });
    }
    let unit: Vec<f64> = u.iter().map(|v| v / r).collect();
    let project = |q: &[f64], sign: f64| -> Vec<f64> {
        let mut p = q.to_vec();
        linalg::axpy(-linalg::dot(q, &unit), &unit, &mut p);
        p.iter_mut().for_each(|v| *v *= sign / r);
        p
    };
    let mut cols = Vec::new();
    for q in e1.tangent_space(s)?.directions().columns() {
        cols.push(project(q, 1.0));
    }
    for q in e2.tangent_space(t)?.directions().columns() {
        cols.push(project(q, -1.0));
    }
    let m = Matrix::from_columns(e1.ambient_dim(), &cols)?;
    if m.cols() > m.rows() {
        return Ok(0.0);
    }
    linalg::smallest_singular_value(&m)
}

/// Minimum of [`gauss_differential_sigma`] over `samples` random pairs.
pub fn gauss_pair_differential_check(
    e1: &Embedding,
    e2: &Embedding,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let sigmas = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, family::GAUSS_PAIRS + k as u64);
            let s = e1.domain().random_point(&mut rng);
            let t = e2.domain().random_point(&mut rng);
            gauss_differential_sigma(e1, &s, e2, &t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(sigmas.into_iter().fold(f64::INFINITY, f64::min))
}

/// Writes every admissible grid pair of `plan` as CSV: coordinates of `s`,
/// coordinates of `t`, intrinsic distance, margin.
pub fn write_margin_field<W: Write>(e: &Embedding, plan: &SamplingPlan, out: W) -> Result<()> {
    plan.check_for(e.domain())?;
    let grid = sample_grid(e, plan.grid)?;
    let k = e.domain().coord_len();
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..k).map(|i| format!("s{i}")).collect();
    header.extend((0..k).map(|i| format!("t{i}")));
    header.push("distance".into());
    header.push("margin".into());
    w.write_record(&header)?;
    let mut buf = Vec::new();
    for (i, a) in grid.iter().enumerate() {
        for b in &grid[i + 1..] {
            let dist = e.domain().distance(&a.point, &b.point);
            if dist < plan.delta {
                continue;
            }
            let m = engine::margin(&a.lift, &b.lift, &mut buf);
            let row: Vec<String> = a
                .point
                .iter()
                .chain(&b.point)
                .chain([dist, m].iter())
                .map(|v| v.to_string())
                .collect();
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Margin of a single pair, through the same code path as the sampler.
pub fn pair_margin(e1: &Embedding, s: &[f64], e2: &Embedding, t: &[f64]) -> Result<f64> {
    let a = sample(e1, s.to_vec())?;
    let b = sample(e2, t.to_vec())?;
    crate::affine::lifted_margin(&a.lift, &b.lift)
}
