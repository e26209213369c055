//! Local minimization of the margin over pairs, and witness search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::engine::{margin, sample, sample_grid, scan_random, scan_self, Tally};
use super::report::{Violation, DEFAULT_TOL};
use crate::embeddings::{DomainPoint, Embedding};
use crate::error::{Error, Result};
use crate::optim::nelder_mead;

/// Pairs closer than this fraction of the domain diameter are never visited
/// by descent.
pub const DESCENT_EXCLUSION: f64 = 0.05;

fn raw_margin(e1: &Embedding, s: &[f64], e2: &Embedding, t: &[f64], buf: &mut Vec<f64>) -> f64 {
    match (e1.lifted_tangent(s), e2.lifted_tangent(t)) {
        (Ok(a), Ok(b)) => margin(&a, &b, buf),
        _ => f64::NAN,
    }
}

/// Polishes `(s0, t0)` by Nelder-Mead in chart coordinates, restarting with a
/// smaller simplex a few times. `exclusion` applies to self-pairs only.
pub(crate) fn descend(
    e1: &Embedding,
    e2: &Embedding,
    exclusion: Option<f64>,
    start: &Violation,
    budget: usize,
) -> Violation {
    let d1 = e1.domain().dim();
    let d2 = e2.domain().dim();
    let mut best = start.clone();
    let mut step = 0.05 * e1.domain().diameter().min(std::f64::consts::PI);
    let rounds = 4;
    let mut buf = Vec::new();
    for _ in 0..rounds {
        if best.margin <= 0.0 {
            break;
        }
        let (s0, t0) = (best.s.clone(), best.t.clone());
        let point = |z: &[f64]| -> (DomainPoint, DomainPoint) {
            (e1.domain().chart_step(&s0, &z[..d1]), e2.domain().chart_step(&t0, &z[d1..]))
        };
        let (z, val, _) = nelder_mead(
            |z| {
                let (s, t) = point(z);
                if let Some(r) = exclusion {
                    if e1.domain().distance(&s, &t) < r {
                        return f64::INFINITY;
                    }
                }
                raw_margin(e1, &s, e2, &t, &mut buf)
            },
            &vec![0.0; d1 + d2],
            step,
            budget / rounds,
            0.0,
        );
        if val < best.margin {
            let (s, t) = point(&z);
            best = Violation { s, t, margin: val };
        }
        step /= 8.0;
    }
    best
}

/// Options for [`best_pair`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FindOptions {
    pub seed: u64,
    /// Objective evaluations per descent start.
    pub max_iters: usize,
    pub tol: f64,
    /// Self-pairs closer than this intrinsic distance are ignored.
    pub exclusion: f64,
    /// Approximate number of coarse grid points.
    pub coarse_points: usize,
    pub random_pairs: usize,
    pub starts: usize,
}

impl FindOptions {
    pub fn for_embedding(e: &Embedding, seed: u64, max_iters: usize) -> Self {
        FindOptions {
            seed,
            max_iters,
            tol: DEFAULT_TOL,
            exclusion: DESCENT_EXCLUSION * e.domain().diameter(),
            coarse_points: 400,
            random_pairs: 4096,
            starts: 8,
        }
    }
}

fn coarse_resolution(dim: usize, points: usize) -> usize {
    ((points as f64).powf(1.0 / dim as f64).floor() as usize).clamp(4, 256)
}

/// Lowest-margin pair found by coarse sampling followed by local descent.
pub fn best_pair(e: &Embedding, opts: &FindOptions) -> Result<Violation> {
    let res = coarse_resolution(e.domain().dim(), opts.coarse_points);
    let grid = sample_grid(e, res)?;
    let mut tally = Tally::new(opts.tol, opts.starts.max(1));
    tally = scan_self(e.domain(), &grid, opts.exclusion, tally);
    tally = scan_random(e, e, opts.random_pairs, opts.seed, Some(opts.exclusion), tally)?;
    let polished: Vec<Violation> = tally
        .lowest
        .par_iter()
        .map(|v| descend(e, e, Some(opts.exclusion), v, opts.max_iters))
        .collect();
    let mut best = polished
        .into_iter()
        .reduce(|a, b| if b.margin < a.margin { b } else { a })
        .ok_or(Error::EmptyPairSet {
            delta: opts.exclusion,
        })?;
    // Recompute from scratch so the reported value is reproducible on its own.
    let a = sample(e, best.s.clone())?;
    let b = sample(e, best.t.clone())?;
    best.margin = margin(&a.lift, &b.lift, &mut Vec::new());
    Ok(best)
}

/// Witness pair with margin at most the default tolerance, if one is found.
pub fn find_violation(e: &Embedding, seed: u64, max_iters: usize) -> Result<Option<Violation>> {
    let opts = FindOptions::for_embedding(e, seed, max_iters);
    let best = best_pair(e, &opts)?;
    Ok((best.margin <= opts.tol).then_some(best))
}
