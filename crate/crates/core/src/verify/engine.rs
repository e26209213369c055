//! Pair enumeration and order-deterministic reduction of margins.

use rayon::prelude::*;

use super::report::{Violation, MAX_STORED_VIOLATIONS, SUSPICIOUS_MARGIN};
use crate::affine::{lifted_margin_with, LiftedSubspace};
use crate::embeddings::{Domain, DomainPoint, Embedding};
use crate::error::{Error, Result};
use crate::sampling::{family, stream_rng};

/// Frames with normalized σ_min at or below this are treated as non-immersed.
pub const IMMERSION_TOL: f64 = 1e-6;

const RANDOM_CHUNK: usize = 2048;

/// A sampled point with its lifted tangent space.
pub(crate) struct Sample {
    pub point: DomainPoint,
    pub lift: LiftedSubspace,
}

pub(crate) fn sample(e: &Embedding, p: DomainPoint) -> Result<Sample> {
    let sigma_min = e.frame_sigma_min(&p)?;
    if sigma_min <= IMMERSION_TOL {
        return Err(Error::NotImmersed { point: p, sigma_min });
    }
    let lift = e.lifted_tangent(&p)?;
    Ok(Sample { point: p, lift })
}

pub(crate) fn sample_grid(e: &Embedding, res: usize) -> Result<Vec<Sample>> {
    e.domain()
        .grid(res)?
        .into_par_iter()
        .map(|p| sample(e, p))
        .collect()
}

pub(crate) fn margin(a: &LiftedSubspace, b: &LiftedSubspace, buf: &mut Vec<f64>) -> f64 {
    // Both lifts come from embeddings already checked to share R^N.
    lifted_margin_with(a, b, buf).unwrap_or(0.0)
}

/// Running summary of evaluated pairs.
#[derive(Clone, Debug)]
pub(crate) struct Tally {
    tol: f64,
    keep: usize,
    /// Only pairs at least this far apart enter `lowest`.
    far: f64,
    pub pairs: u64,
    pub excluded: u64,
    pub min: f64,
    pub argmin: Option<(DomainPoint, DomainPoint)>,
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub suspicious: u64,
    /// The `keep` lowest-margin pairs, ascending.
    pub lowest: Vec<Violation>,
}

impl Tally {
    pub fn new(tol: f64, keep: usize) -> Self {
        Tally {
            tol,
            keep,
            far: 0.0,
            pairs: 0,
            excluded: 0,
            min: f64::INFINITY,
            argmin: None,
            violations: Vec::new(),
            violation_count: 0,
            suspicious: 0,
            lowest: Vec::new(),
        }
    }

    pub fn with_far(mut self, far: f64) -> Self {
        self.far = far;
        self
    }

    pub fn push(&mut self, s: &[f64], t: &[f64], m: f64, dist: f64) {
        self.pairs += 1;
        if m < self.min {
            self.min = m;
            self.argmin = Some((s.to_vec(), t.to_vec()));
        }
        if m <= self.tol {
            self.violation_count += 1;
            if self.violations.len() < MAX_STORED_VIOLATIONS {
                self.violations.push(Violation {
                    s: s.to_vec(),
                    t: t.to_vec(),
                    margin: m,
                });
            }
        } else if m <= SUSPICIOUS_MARGIN {
            self.suspicious += 1;
        }
        if dist >= self.far
            && self.keep > 0
            && (self.lowest.len() < self.keep || m < self.lowest[self.lowest.len() - 1].margin) {
            self.insert_lowest(Violation {
                s: s.to_vec(),
                t: t.to_vec(),
                margin: m,
            });
        }
    }

    fn insert_lowest(&mut self, v: Violation) {
        let at = self.lowest.partition_point(|w| w.margin <= v.margin);
        self.lowest.insert(at, v);
        self.lowest.truncate(self.keep);
    }

    /// Appends `other`, which must cover pairs enumerated after `self`'s.
    pub fn merge(mut self, other: Tally) -> Tally {
        self.pairs += other.pairs;
        self.excluded += other.excluded;
        if other.min < self.min {
            self.min = other.min;
            self.argmin = other.argmin;
        }
        self.violation_count += other.violation_count;
        let room = MAX_STORED_VIOLATIONS - self.violations.len();
        self.violations.extend(other.violations.into_iter().take(room));
        self.suspicious += other.suspicious;
        for v in other.lowest {
            if self.lowest.len() < self.keep || v.margin < self.lowest[self.lowest.len() - 1].margin {
                self.insert_lowest(v);
            }
        }
        self
    }

    fn fresh(&self) -> Tally {
        Tally::new(self.tol, self.keep).with_far(self.far)
    }
}

fn reduce(seed: Tally, parts: Vec<Tally>) -> Tally {
    parts.into_iter().fold(seed, Tally::merge)
}

/// Unordered grid pairs `i < j` at intrinsic distance at least `delta`.
pub(crate) fn scan_self(domain: &Domain, samples: &[Sample], delta: f64, acc: Tally) -> Tally {
    let template = acc.fresh();
    let rows: Vec<Tally> = (0..samples.len())
        .into_par_iter()
        .map(|i| {
            let mut row = template.clone();
            let mut buf = Vec::new();
            let a = &samples[i];
            for b in &samples[i + 1..] {
                let dist = domain.distance(&a.point, &b.point);
                if dist < delta {
                    row.excluded += 1;
                    continue;
                }
                row.push(&a.point, &b.point, margin(&a.lift, &b.lift, &mut buf), dist);
            }
            row
        })
        .collect();
    reduce(acc, rows)
}

/// All pairs of the product grid.
pub(crate) fn scan_product(first: &[Sample], second: &[Sample], acc: Tally) -> Tally {
    let template = acc.fresh();
    let rows: Vec<Tally> = first
        .par_iter()
        .map(|a| {
            let mut row = template.clone();
            let mut buf = Vec::new();
            for b in second {
                row.push(&a.point, &b.point, margin(&a.lift, &b.lift, &mut buf), f64::INFINITY);
            }
            row
        })
        .collect();
    reduce(acc, rows)
}

/// Random pairs; pair `k` draws from its own stream, so the result does not
/// depend on how the work is split. With `delta`, close pairs are skipped.
pub(crate) fn scan_random(
    e1: &Embedding,
    e2: &Embedding,
    count: usize,
    seed: u64,
    delta: Option<f64>,
    acc: Tally,
) -> Result<Tally> {
    let template = acc.fresh();
    let chunks = count.div_ceil(RANDOM_CHUNK);
    let parts: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut part = template.clone();
            let mut buf = Vec::new();
            for k in c * RANDOM_CHUNK..((c + 1) * RANDOM_CHUNK).min(count) {
                let mut rng = stream_rng(seed, family::RANDOM_PAIRS + k as u64);
                let s = e1.domain().random_point(&mut rng);
                let t = e2.domain().random_point(&mut rng);
                let dist = match delta {
                    Some(d) => {
                        let dist = e1.domain().distance(&s, &t);
                        if dist < d {
                            part.excluded += 1;
                            continue;
                        }
                        dist
                    }
                    None => f64::INFINITY,
                };
                let a = sample(e1, s)?;
                let b = sample(e2, t)?;
                part.push(&a.point, &b.point, margin(&a.lift, &b.lift, &mut buf), dist);
            }
            Ok(part)
        })
        .collect::<Result<_>>()?;
    Ok(reduce(acc, parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(m: f64) -> (Vec<f64>, Vec<f64>, f64) {
        (vec![m], vec![-m], m)
    }

    #[test]
    fn tally_tracks_min_violations_and_lowest() {
        let mut t = Tally::new(1e-8, 2);
        for (s, u, m) in [v(0.5), v(1e-9), v(1e-6), v(0.2)] {
            t.push(&s, &u, m, 1.0);
        }
        assert_eq!(t.pairs, 4);
        assert_eq!(t.min, 1e-9);
        assert_eq!(t.violation_count, 1);
        assert_eq!(t.suspicious, 1);
        let lows: Vec<f64> = t.lowest.iter().map(|w| w.margin).collect();
        assert_eq!(lows, vec![1e-9, 1e-6]);
    }

    #[test]
    fn merge_equals_sequential_push() {
        let items: Vec<_> = [0.3, 0.1, 0.1, 0.7, 1e-10, 0.05].into_iter().map(v).collect();
        let mut whole = Tally::new(1e-8, 3);
        for (s, u, m) in &items {
            whole.push(s, u, *m, 1.0);
        }
        let mut left = Tally::new(1e-8, 3);
        let mut right = Tally::new(1e-8, 3);
        for (s, u, m) in &items[..3] {
            left.push(s, u, *m, 1.0);
        }
        for (s, u, m) in &items[3..] {
            right.push(s, u, *m, 1.0);
        }
        let merged = left.merge(right);
        assert_eq!(merged.min, whole.min);
        assert_eq!(merged.argmin, whole.argmin);
        assert_eq!(merged.lowest, whole.lowest);
        assert_eq!(merged.violations, whole.violations);
    }
}
