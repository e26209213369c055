//! Maximin search for totally skew curves in parametric families.
//!
//! The objective is a soft minimum of the skew margin over the admissible
//! grid pairs of a [`SamplingPlan`]. Candidates are improved by a population
//! of Gaussian perturbations around an annealed current point; the smoothing
//! temperature doubles every quarter of the budget.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embeddings::{parametric_curve, Basis, Domain, Embedding};
use crate::error::{Error, Result};
use crate::sampling::{family as streams, stream_rng};
use crate::verify::engine::{margin, sample, Sample};
use crate::verify::{verify_totally_skew, SamplingPlan, Verdict, DEFAULT_TOL};

/// Objective value of candidates that are not immersions.
pub const IMMERSION_PENALTY: f64 = -1.0;
/// Smallest best-objective gain that counts as progress.
pub const STALL_EPS: f64 = 1e-10;
/// Fraction of the budget without progress after which a run stalls.
pub const STALL_FRACTION: f64 = 0.2;

/// Perturbation scale shrinks geometrically to this factor over the budget.
const STEP_DECAY: f64 = 1e-2;
/// Initial temperature for accepting a worse current point.
const ANNEAL_T0: f64 = 1e-4;
const ACCEPT_STREAM: u64 = 1 << 39;

/// A parametric curve family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub basis: Basis,
    /// Polynomial degree, or number of Fourier harmonics.
    pub degree: usize,
    pub ambient: usize,
}

impl Family {
    pub fn new(basis: Basis, degree: usize, ambient: usize) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::InvalidArgument("ambient dimension must be >= 1".into()));
        }
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be >= 1".into()));
        }
        Ok(Family {
            basis,
            degree,
            ambient,
        })
    }

    /// Coefficients per ambient coordinate.
    pub fn per_coordinate(&self) -> usize {
        match self.basis {
            Basis::Polynomial => self.degree + 1,
            Basis::Fourier => 2 * self.degree + 1,
        }
    }

    pub fn coeff_len(&self) -> usize {
        self.ambient * self.per_coordinate()
    }

    pub fn domain(&self) -> Domain {
        match self.basis {
            Basis::Polynomial => Domain::Interval { lo: -1.0, hi: 1.0 },
            Basis::Fourier => Domain::Circle,
        }
    }

    pub fn embedding(&self, coeffs: &[f64]) -> Result<Embedding> {
        if coeffs.len() != self.coeff_len() {
            return Err(Error::DimensionMismatch {
                expected: self.coeff_len(),
                found: coeffs.len(),
            });
        }
        parametric_curve(coeffs.to_vec(), self.basis, self.ambient)
    }

    /// Standard normal coefficients.
    pub fn random_coeffs<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.coeff_len()).map(|_| rng.sample(StandardNormal)).collect()
    }
}

/// Starting point of a search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Init {
    /// Standard normal coefficients times `scale`.
    Random { scale: f64 },
    Coeffs { coeffs: Vec<f64> },
    /// `θ ↦ (cos θ, sin θ, cos 2θ, sin 2θ)` truncated or zero-padded to the
    /// ambient dimension, plus `noise` times standard normal entries.
    PerturbedCircleQuadratic { noise: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub family: Family,
    /// Pairs entering the objective; also used for the final margin.
    pub plan: SamplingPlan,
    /// Initial smoothing temperature.
    pub beta: f64,
    /// Budget in objective evaluations.
    pub iters: usize,
    pub population: usize,
    /// Initial perturbation scale.
    pub step: f64,
    pub seed: u64,
    pub target_margin: f64,
    pub init: Init,
}

impl SearchConfig {
    /// Defaults: 48-point grid, exclusion radius a tenth of the domain
    /// diameter, four refinement starts, β = 200, 20000 evaluations.
    pub fn new(family: Family, seed: u64) -> Self {
        let delta = 0.1 * family.domain().diameter();
        SearchConfig {
            family,
            plan: SamplingPlan {
                grid: 48,
                random: 0,
                delta,
                seed,
                refine: 4,
            },
            beta: 200.0,
            iters: 20_000,
            population: 8,
            step: 0.02,
            seed,
            target_margin: 1e-3,
            init: Init::Random { scale: 1.0 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be positive, got {}", self.beta));
        }
        if self.iters == 0 {
            return bad("budget must be >= 1".into());
        }
        if self.population == 0 {
            return bad("population must be >= 1".into());
        }
        if !(self.target_margin > 0.0) {
            return bad(format!("target margin must be positive, got {}", self.target_margin));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return bad(format!("step must be positive, got {}", self.step));
        }
        self.plan.check_for(&self.family.domain())?;
        if let Init::Coeffs { coeffs } = &self.init {
            if coeffs.len() != self.family.coeff_len() {
                return Err(Error::DimensionMismatch {
                    expected: self.family.coeff_len(),
                    found: coeffs.len(),
                });
            }
        }
        if matches!(self.init, Init::PerturbedCircleQuadratic { .. })
            && (self.family.basis != Basis::Fourier || self.family.degree < 2)
        {
            return bad("circle-quadratic start needs a Fourier family with >= 2 harmonics".into());
        }
        Ok(())
    }

    fn initial_coeffs(&self) -> Vec<f64> {
        let mut rng = stream_rng(self.seed, streams::SEARCH);
        let fam = &self.family;
        match &self.init {
            Init::Random { scale } => fam.random_coeffs(&mut rng).into_iter().map(|c| c * scale).collect(),
            Init::Coeffs { coeffs } => coeffs.clone(),
            Init::PerturbedCircleQuadratic { noise } => {
                let k = fam.per_coordinate();
                let mut c = vec![0.0; fam.coeff_len()];
                // [a0, a1, b1, a2, b2, ...] per coordinate
                for (coord, slot) in [(0, 1), (1, 2), (2, 3), (3, 4)] {
                    if coord < fam.ambient {
                        c[coord * k + slot] = 1.0;
                    }
                }
                for v in c.iter_mut() {
                    *v += noise * rng.sample::<f64, _>(StandardNormal);
                }
                c
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    TargetReached,
    BudgetExhausted,
    Stalled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    /// Objective evaluations spent so far.
    pub iteration: usize,
    /// Best objective so far, at the current temperature.
    pub objective: f64,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    /// Catalog name that reloads the best curve.
    pub embedding: String,
    pub coefficients: Vec<f64>,
    pub best_objective: f64,
    /// Hard minimum over the objective's grid pairs.
    pub grid_min_margin: f64,
    /// `min_margin` of the sampled verification with `config.plan`.
    pub true_min_margin: f64,
    pub verdict: Verdict,
    pub status: SearchStatus,
    pub evaluations: usize,
    pub trace: Vec<TracePoint>,
}

impl SearchResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `-(1/β) log Σ exp(-β v_i)`, shifted for stability. Lies in
/// `[min - log(n)/β, min]`.
pub fn softmin(values: &[f64], beta: f64) -> f64 {
    let m0 = values.iter().copied().fold(f64::INFINITY, f64::min);
    if !m0.is_finite() {
        return m0;
    }
    let sum: f64 = values.iter().map(|v| (-beta * (v - m0)).exp()).sum();
    m0 - sum.ln() / beta
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Score {
    soft: f64,
    hard: f64,
}

fn score(e: &Embedding, plan: &SamplingPlan, beta: f64) -> Result<Score> {
    let grid: Vec<Sample> = match e
        .domain()
        .grid(plan.grid)?
        .into_iter()
        .map(|p| sample(e, p))
        .collect::<Result<_>>()
    {
        Ok(g) => g,
        Err(Error::NotImmersed { .. }) => {
            return Ok(Score {
                soft: IMMERSION_PENALTY,
                hard: IMMERSION_PENALTY,
            })
        }
        Err(err) => return Err(err),
    };
    let mut margins = Vec::with_capacity(grid.len() * grid.len() / 2);
    let mut buf = Vec::new();
    for (i, a) in grid.iter().enumerate() {
        for b in &grid[i + 1..] {
            if e.domain().distance(&a.point, &b.point) >= plan.delta {
                margins.push(margin(&a.lift, &b.lift, &mut buf));
            }
        }
    }
    if margins.is_empty() {
        return Err(Error::EmptyPairSet { delta: plan.delta });
    }
    Ok(Score {
        soft: softmin(&margins, beta),
        hard: margins.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

/// Soft minimum of the margin over the plan's admissible grid pairs, or
/// [`IMMERSION_PENALTY`] when the tangent frame degenerates at a grid point.
pub fn objective(e: &Embedding, plan: &SamplingPlan, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    plan.check_for(e.domain())?;
    Ok(score(e, plan, beta)?.soft)
}

/// [`objective`] for raw family coefficients.
pub fn coefficient_objective(family: &Family, coeffs: &[f64], plan: &SamplingPlan, beta: f64) -> Result<f64> {
    objective(&family.embedding(coeffs)?, plan, beta)
}

fn true_margin(fam: &Family, coeffs: &[f64], plan: &SamplingPlan) -> Result<(f64, Verdict)> {
    let e = fam.embedding(coeffs)?;
    match verify_totally_skew(&e, plan, DEFAULT_TOL) {
        Ok(r) => Ok((r.min_margin.unwrap_or(0.0), r.verdict)),
        Err(Error::NotImmersed { .. }) => Ok((0.0, Verdict::Refuted)),
        Err(err) => Err(err),
    }
}

/// Runs the maximin search. Deterministic for a fixed configuration.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let fam = &cfg.family;
    let eval = |c: &[f64], beta: f64| -> Result<Score> { score(&fam.embedding(c)?, &cfg.plan, beta) };

    let mut beta = cfg.beta;
    let mut current = cfg.initial_coeffs();
    let mut current_score = eval(&current, beta)?;
    let mut best = current.clone();
    let mut best_score = current_score;
    let mut evals = 1usize;
    let mut trace = vec![TracePoint {
        iteration: evals,
        objective: best_score.soft,
        beta,
    }];
    let stall_window = ((cfg.iters as f64 * STALL_FRACTION).ceil() as usize).max(1);
    let mut last_progress = evals;
    let mut status = SearchStatus::BudgetExhausted;
    let mut gen: u64 = 0;

    if best_score.hard >= cfg.target_margin && true_margin(fam, &best, &cfg.plan)?.0 >= cfg.target_margin {
        status = SearchStatus::TargetReached;
    }
    while status == SearchStatus::BudgetExhausted && evals < cfg.iters {
        let stage = (4 * evals / cfg.iters).min(3) as i32;
        let want = cfg.beta * 2f64.powi(stage);
        if want != beta {
            beta = want;
            best_score = eval(&best, beta)?;
            current_score = eval(&current, beta)?;
        }
        let progress = evals as f64 / cfg.iters as f64;
        let step = cfg.step * STEP_DECAY.powf(progress);
        let members = cfg.population.min(cfg.iters - evals);
        let candidates = (0..members)
            .into_par_iter()
            .map(|j| {
                let mut rng = stream_rng(cfg.seed, streams::SEARCH + 1 + gen * cfg.population as u64 + j as u64);
                let x: Vec<f64> = current
                    .iter()
                    .map(|c| c + step * rng.sample::<f64, _>(StandardNormal))
                    .collect();
                let s = eval(&x, beta)?;
                Ok((x, s))
            })
            .collect::<Result<Vec<_>>>()?;
        evals += members;
        let (cand, cand_score) = candidates
            .into_iter()
            .reduce(|a, b| if b.1.soft > a.1.soft { b } else { a })
            .expect("at least one member");

        let improved = cand_score.soft > best_score.soft;
        if cand_score.soft > best_score.soft + STALL_EPS {
            last_progress = evals;
        }
        if improved {
            best = cand.clone();
            best_score = cand_score;
        }
        let accept = cand_score.soft >= current_score.soft || {
            let temp = ANNEAL_T0 * (1.0 - progress);
            let u: f64 = stream_rng(cfg.seed, streams::SEARCH + ACCEPT_STREAM + gen).random();
            temp > 0.0 && u < ((cand_score.soft - current_score.soft) / temp).exp()
        };
        if accept {
            current = cand;
            current_score = cand_score;
        }
        trace.push(TracePoint {
            iteration: evals,
            objective: best_score.soft,
            beta,
        });
        if improved
            && best_score.hard >= cfg.target_margin
            && true_margin(fam, &best, &cfg.plan)?.0 >= cfg.target_margin
        {
            status = SearchStatus::TargetReached;
        } else if evals - last_progress >= stall_window {
            status = SearchStatus::Stalled;
        }
        gen += 1;
    }

    let (true_min_margin, verdict) = true_margin(fam, &best, &cfg.plan)?;
    Ok(SearchResult {
        config: cfg.clone(),
        embedding: coefficient_name(fam, &best),
        coefficients: best,
        best_objective: best_score.soft,
        grid_min_margin: best_score.hard,
        true_min_margin,
        verdict,
        status,
        evaluations: evals,
        trace,
    })
}

/// Catalog name `parametric:BASIS:N:c0,c1,...` for the given coefficients.
pub fn coefficient_name(fam: &Family, coeffs: &[f64]) -> String {
    let basis = match fam.basis {
        Basis::Polynomial => "polynomial",
        Basis::Fourier => "fourier",
    };
    let list: Vec<String> = coeffs.iter().map(|c| format!("{c:?}")).collect();
    format!("parametric:{basis}:{}:{}", fam.ambient, list.join(","))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub family: Family,
    pub plan: SamplingPlan,
    pub trials: usize,
    pub certified: usize,
    pub refuted: usize,
    pub not_immersed: usize,
    pub fraction_certified: f64,
    /// Whether the ambient dimension is at least `4n + 1` for curves.
    pub generic_dimension: bool,
}

/// Fraction of standard normal coefficient draws whose curve is
/// certified-sampled under `plan`. Trial `k` uses its own random stream.
pub fn genericity_experiment(trials: usize, family: &Family, plan: &SamplingPlan, seed: u64) -> Result<GenericityReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    plan.check_for(&family.domain())?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, streams::GENERICITY + k as u64);
            let e = family.embedding(&family.random_coeffs(&mut rng))?;
            match verify_totally_skew(&e, plan, DEFAULT_TOL) {
                Ok(r) => Ok(Some(r.verdict)),
                Err(Error::NotImmersed { .. }) => Ok(None),
                Err(err) => Err(err),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let certified = outcomes.iter().filter(|o| **o == Some(Verdict::CertifiedSampled)).count();
    let not_immersed = outcomes.iter().filter(|o| o.is_none()).count();
    Ok(GenericityReport {
        family: family.clone(),
        plan: plan.clone(),
        trials,
        certified,
        refuted: trials - certified - not_immersed,
        not_immersed,
        fraction_certified: certified as f64 / trials as f64,
        generic_dimension: family.ambient >= 5,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::{cubic_curve, planar_circle_in_r3};

    #[test]
    fn softmin_bounds_and_limit() {
        let v = [0.3, 0.1, 0.7];
        for beta in [1.0, 10.0, 200.0] {
            let s = softmin(&v, beta);
            assert!(s <= 0.1 + 1e-15);
            assert!(s >= 0.1 - 3f64.ln() / beta - 1e-15);
        }
        assert!((softmin(&v, 1e6) - 0.1).abs() < 1e-6);
    }

    #[test]
    fn planar_circle_objective_is_near_zero() {
        let plan = SamplingPlan::new(32, 0, 0.3, 0).unwrap();
        let v = objective(&planar_circle_in_r3(), &plan, 200.0).unwrap();
        assert!(v <= 1e-12);
    }

    #[test]
    fn non_immersed_candidates_are_penalized() {
        let fam = Family::new(Basis::Polynomial, 2, 3).unwrap();
        // (t², t², t²): zero derivative at t = 0, which is a grid point.
        let c = vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
        let plan = SamplingPlan::new(9, 0, 0.2, 0).unwrap();
        assert_eq!(coefficient_objective(&fam, &c, &plan, 200.0).unwrap(), IMMERSION_PENALTY);
    }

    #[test]
    fn objective_bounded_by_hard_minimum() {
        let plan = SamplingPlan::new(32, 0, 0.2, 0).unwrap();
        let e = cubic_curve();
        let hard = score(&e, &plan, 200.0).unwrap().hard;
        let soft = objective(&e, &plan, 200.0).unwrap();
        assert!(soft <= hard);
    }

    #[test]
    fn config_validation() {
        let fam = Family::new(Basis::Fourier, 3, 4).unwrap();
        let mut cfg = SearchConfig::new(fam, 1);
        assert!(cfg.validate().is_ok());
        cfg.beta = 0.0;
        assert!(cfg.validate().is_err());
        cfg.beta = 200.0;
        cfg.iters = 0;
        assert!(cfg.validate().is_err());
        cfg.iters = 10;
        cfg.init = Init::Coeffs { coeffs: vec![1.0] };
        assert!(cfg.validate().is_err());
        let poly = SearchConfig {
            init: Init::PerturbedCircleQuadratic { noise: 0.01 },
            ..SearchConfig::new(Family::new(Basis::Polynomial, 3, 4).unwrap(), 1)
        };
        assert!(poly.validate().is_err());
    }

    #[test]
    fn short_search_is_reproducible_and_monotone() {
        let fam = Family::new(Basis::Polynomial, 3, 5).unwrap();
        let mut cfg = SearchConfig::new(fam, 42);
        cfg.iters = 64;
        cfg.plan.grid = 16;
        cfg.target_margin = 0.9;
        let a = run_search(&cfg).unwrap();
        let b = run_search(&cfg).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert!(a.trace.windows(2).all(|w| w[1].objective >= w[0].objective));
        let reloaded = crate::embeddings::by_name(&a.embedding).unwrap();
        let r = verify_totally_skew(&reloaded, &cfg.plan, DEFAULT_TOL).unwrap();
        assert_eq!(r.min_margin.unwrap(), a.true_min_margin);
    }
}
