use serde::{Deserialize, Serialize};

use crate::embeddings::{Domain, DomainPoint};
use crate::error::{Error, Result};

/// Default refutation threshold for margins.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Margins at or below this (but above the tolerance) are counted as suspicious.
pub const SUSPICIOUS_MARGIN: f64 = 1e-5;
/// Default near-diagonal exclusion radius (intrinsic distance).
pub const DEFAULT_DELTA: f64 = 1e-3;
/// At most this many violations are stored in a report; the total is in
/// `violation_count`.
pub const MAX_STORED_VIOLATIONS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Backed by a theorem whose hypotheses were checked exactly.
    CertifiedExact,
    /// No violation among the sampled pairs. Evidence, not proof.
    CertifiedSampled,
    /// At least one pair with margin at or below the tolerance.
    Refuted,
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        !matches!(self, Verdict::Refuted)
    }
}

/// Which pairs a sampled verification looks at.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    /// Grid points per domain dimension.
    pub grid: usize,
    /// Additional uniformly random pairs.
    pub random: usize,
    /// Pairs closer than this (intrinsic distance) are skipped.
    pub delta: f64,
    pub seed: u64,
    /// Number of lowest-margin pairs to polish by local descent afterwards.
    #[serde(default)]
    pub refine: usize,
}

impl SamplingPlan {
    pub fn new(grid: usize, random: usize, delta: f64, seed: u64) -> Result<Self> {
        if grid < 2 {
            return Err(Error::InvalidArgument(format!("grid resolution {grid} < 2")));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
        }
        Ok(SamplingPlan {
            grid,
            random,
            delta,
            seed,
            refine: 0,
        })
    }

    pub fn with_refine(mut self, refine: usize) -> Self {
        self.refine = refine;
        self
    }

    pub(crate) fn check_for(&self, domain: &Domain) -> Result<()> {
        SamplingPlan::new(self.grid, self.random, self.delta, self.seed)?;
        if self.delta >= domain.diameter() {
            return Err(Error::InvalidArgument(format!(
                "delta {} is not smaller than the domain diameter {}",
                self.delta,
                domain.diameter()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointPair {
    pub s: DomainPoint,
    pub t: DomainPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub s: DomainPoint,
    pub t: DomainPoint,
    pub margin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// Outcome of the third-order test `rank[γ′, γ″, γ‴] = 3` along a curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearDiagonal {
    pub status: CheckStatus,
    pub worst_point: Option<DomainPoint>,
    /// σ_min of the unit-normalized derivative triple at `worst_point`.
    pub worst_sigma: Option<f64>,
}

impl NearDiagonal {
    pub fn not_applicable() -> Self {
        NearDiagonal {
            status: CheckStatus::NotApplicable,
            worst_point: None,
            worst_sigma: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewReport {
    pub embedding: String,
    pub verdict: Verdict,
    /// Smallest sampled margin; absent for theorem-only certificates.
    pub min_margin: Option<f64>,
    pub argmin: Option<PointPair>,
    pub near_diagonal: NearDiagonal,
    pub plan: Option<SamplingPlan>,
    pub tol: f64,
    pub pairs_evaluated: u64,
    pub pairs_excluded: u64,
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    /// Pairs with margin in `(tol, SUSPICIOUS_MARGIN]`.
    pub suspicious_count: u64,
    pub certificate_rule: Option<String>,
    pub nonsingularity_margin: Option<f64>,
    pub warnings: Vec<String>,
}

impl SkewReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
