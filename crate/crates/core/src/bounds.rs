//! Bounds on the smallest dimension admitting a totally skew embedding.
//!
//! `N(n)` is the value for the n-disk, `N(S^n)` for the n-sphere. Every bound
//! in a [`BoundRecord`] carries the name of the rule that produced it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower bounds `N(n) ≥ ...` for n = 1..=17 from solutions of the
/// generalized vector field problem.
pub const PUBLISHED_TABLE: [u64; 17] = [
    3, 6, 7, 12, 13, 14, 15, 24, 25, 27, 28, 31, 36, 37, 38, 48, 49,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// `N(n)`, the n-disk.
    Disk,
    /// `N(S^n)`.
    Sphere,
    /// `N(M^n)` for an arbitrary closed n-manifold.
    Closed,
}

impl Target {
    pub fn as_str(&self) -> &'static str {
        match self {
            Target::Disk => "disk",
            Target::Sphere => "sphere",
            Target::Closed => "closed",
        }
    }
}

/// Named rules. The string forms appear in emitted tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `2n+1 ≤ N ≤ 4n+1`.
    Basic,
    /// `N ≥ 2n+2` for closed manifolds.
    ClosedBasic,
    /// `N(n) ≥ 2n+2` unless n ∈ {1, 3, 7}.
    DavisException,
    /// `N(n) ≥ 2n + q` from binomial parities.
    Binomial,
    /// `N(2l+1) ≥ 2(3l - 2d - α(l-d)) + 3`.
    Immersion,
    PublishedTable,
    /// `N(n) ≤ N(S^n)`, using the sphere upper bound.
    SphereUpper,
    /// `x ↦ (x, B(x,x))` with a convolution map.
    BilinearSphere,
    /// `x ↦ (x, x², x³)` in R³.
    CubicCurve,
    /// `z ↦ (z, z²)` on S¹ in R⁴.
    CircleQuadratic,
    /// `z ↦ (z, z², z³)` in R⁶.
    ComplexCubicDisk,
    /// `N(S^n) ≥ N(n)`.
    DiskLower,
}

impl Rule {
    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::Basic => "basic",
            Rule::ClosedBasic => "closed-basic",
            Rule::DavisException => "davis-exception",
            Rule::Binomial => "binomial",
            Rule::Immersion => "immersion",
            Rule::PublishedTable => "published-table",
            Rule::SphereUpper => "sphere-upper",
            Rule::BilinearSphere => "bilinear-sphere",
            Rule::CubicCurve => "cubic-curve",
            Rule::CircleQuadratic => "circle-quadratic",
            Rule::ComplexCubicDisk => "complex-cubic-disk",
            Rule::DiskLower => "disk-lower",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: u64,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub n: u64,
    pub target: Target,
    pub lower: Bound,
    pub upper: Bound,
    pub exact: Option<u64>,
}

impl BoundRecord {
    fn new(n: u64, target: Target, lower: Bound, upper: Bound) -> Self {
        debug_assert!(lower.value <= upper.value);
        let exact = (lower.value == upper.value).then_some(lower.value);
        BoundRecord {
            n,
            target,
            lower,
            upper,
            exact,
        }
    }
}

fn require_positive(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("dimension n must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// `(lower, upper)` with lower `2n+1` (`2n+2` if closed) and upper `4n+1`.
pub fn basic_bounds(n: u64, closed: bool) -> Result<(u64, u64)> {
    require_positive(n)?;
    let lower = if closed { 2 * n + 2 } else { 2 * n + 1 };
    Ok((lower, 4 * n + 1))
}

pub fn table_lower_bound(n: u64) -> Result<u64> {
    match n {
        1..=17 => Ok(PUBLISHED_TABLE[n as usize - 1]),
        _ => Err(Error::InvalidArgument(format!(
            "published table covers n = 1..=17, got {n}"
        ))),
    }
}

/// `C(a, b) mod 2 == 1`, by Lucas: the bits of `b` must be a subset of those of `a`.
pub fn binomial_is_odd(a: u64, b: u64) -> bool {
    b <= a && b & !a == 0
}

/// Smallest `q ∈ 1..=n` with `C(n+q, i)` even for every `i ∈ q..n`.
/// Gives `N(n) ≥ 2n + q`.
pub fn binomial_q_min(n: u64) -> Result<u64> {
    require_positive(n)?;
    let q = (1..=n)
        .find(|&q| (q..n).all(|i| !binomial_is_odd(n + q, i)))
        .expect("q = n has an empty range");
    Ok(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PowerCheck {
    pub r: u32,
    pub m: u64,
    /// Whether `N(n) = 2n+q` survives the necessary condition `q > m`.
    pub consistent: bool,
}

/// Writes `n + q = 2^r + m` with `0 ≤ m < 2^r` and tests `q > m`.
pub fn power_constraint_check(n: u64, q: u64) -> Result<PowerCheck> {
    if !(1 <= q && q <= n) {
        return Err(Error::InvalidArgument(format!("need 1 <= q <= n, got n={n}, q={q}")));
    }
    let s = n + q;
    let r = 63 - s.leading_zeros();
    let m = s - (1u64 << r);
    Ok(PowerCheck {
        r,
        m,
        consistent: q > m,
    })
}

/// Exponent of the largest power of 2 dividing `k`.
pub fn nu(k: u64) -> u32 {
    k.trailing_zeros()
}

/// Number of 1's in the binary expansion of `m`.
pub fn alpha(m: u64) -> u32 {
    m.count_ones()
}

/// Davis's upper bound `s = k - p + 2ν(k) + ε(ν(k), p)` on the number of
/// independent sections of `kξ_p`, valid when `C(k-1, p)` is odd.
///
/// Only `p ≡ 2 (mod 4)` is supported: `ε(0,2) = ε(3,2) = 0`,
/// `ε(1,2) = ε(2,2) = -2`.
pub fn davis_sections(k: u64, p: u64) -> Result<i64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if p % 4 != 2 {
        return Err(Error::Unsupported(format!(
            "epsilon is only known here for p = 2 mod 4, got p = {p}"
        )));
    }
    if !binomial_is_odd(k - 1, p) {
        return Err(Error::Hypothesis(format!("C({}, {p}) is even", k - 1)));
    }
    let v = nu(k);
    let eps = match v % 4 {
        0 | 3 => 0,
        _ => -2,
    };
    Ok(k as i64 - p as i64 + 2 * v as i64 + eps)
}

/// `2n+1` for n ∈ {1, 3, 7}, otherwise `2n+2`.
pub fn davis_exception_bound(n: u64) -> Result<u64> {
    require_positive(n)?;
    Ok(if matches!(n, 1 | 3 | 7) { 2 * n + 1 } else { 2 * n + 2 })
}

/// `N(2l+1) ≥ 2(3l - 2d - α(l-d)) + 3`, `d` the least `d ≥ 0` with `α(l-d) ≤ d+1`.
pub fn immersion_bound(n: u64) -> Result<u64> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "immersion bound needs odd n >= 3, got {n}"
        )));
    }
    let l = (n - 1) / 2;
    let d = (0..=l)
        .find(|&d| alpha(l - d) as u64 <= d + 1)
        .expect("d = l gives alpha(0) = 0");
    Ok(2 * (3 * l - 2 * d - alpha(l - d) as u64) + 3)
}

/// `3n+1` for odd n, `3n+2` for even n; `N(S¹) = 4`.
pub fn sphere_upper_bound(n: u64) -> Result<u64> {
    require_positive(n)?;
    Ok(match n {
        1 => 4,
        _ if n % 2 == 1 => 3 * n + 1,
        _ => 3 * n + 2,
    })
}

fn max_bound(cands: impl IntoIterator<Item = Bound>) -> Bound {
    cands
        .into_iter()
        .reduce(|best, b| if b.value > best.value { b } else { best })
        .expect("nonempty")
}

fn min_bound(cands: impl IntoIterator<Item = Bound>) -> Bound {
    cands
        .into_iter()
        .reduce(|best, b| if b.value < best.value { b } else { best })
        .expect("nonempty")
}

fn disk_lower(n: u64, use_published_table: bool) -> Result<Bound> {
    let mut c = vec![
        Bound { value: 2 * n + 1, rule: Rule::Basic },
        Bound { value: davis_exception_bound(n)?, rule: Rule::DavisException },
        Bound { value: 2 * n + binomial_q_min(n)?, rule: Rule::Binomial },
    ];
    if n >= 3 && n % 2 == 1 {
        c.push(Bound { value: immersion_bound(n)?, rule: Rule::Immersion });
    }
    if use_published_table && n <= 17 {
        c.push(Bound { value: table_lower_bound(n)?, rule: Rule::PublishedTable });
    }
    Ok(max_bound(c))
}

fn sphere_upper(n: u64) -> Result<Bound> {
    let rule = if n == 1 { Rule::CircleQuadratic } else { Rule::BilinearSphere };
    Ok(min_bound([
        Bound { value: 4 * n + 1, rule: Rule::Basic },
        Bound { value: sphere_upper_bound(n)?, rule },
    ]))
}

/// Best bounds on `N(n)` derivable from the formulas (and, optionally, the
/// published table).
pub fn best_known(n: u64, use_published_table: bool) -> Result<BoundRecord> {
    require_positive(n)?;
    let lower = disk_lower(n, use_published_table)?;
    let mut upper = vec![
        Bound { value: 4 * n + 1, rule: Rule::Basic },
        Bound { value: sphere_upper(n)?.value, rule: Rule::SphereUpper },
    ];
    match n {
        1 => upper.push(Bound { value: 3, rule: Rule::CubicCurve }),
        2 => upper.push(Bound { value: 6, rule: Rule::ComplexCubicDisk }),
        _ => {}
    }
    Ok(BoundRecord::new(n, Target::Disk, lower, min_bound(upper)))
}

/// Best bounds on `N(S^n)`.
pub fn best_known_sphere(n: u64, use_published_table: bool) -> Result<BoundRecord> {
    require_positive(n)?;
    let lower = max_bound([
        Bound { value: 2 * n + 2, rule: Rule::ClosedBasic },
        Bound { value: disk_lower(n, use_published_table)?.value, rule: Rule::DiskLower },
    ]);
    Ok(BoundRecord::new(n, Target::Sphere, lower, sphere_upper(n)?))
}

/// Bounds valid for every closed n-manifold.
pub fn closed_manifold_bounds(n: u64) -> Result<BoundRecord> {
    let (lo, hi) = basic_bounds(n, true)?;
    Ok(BoundRecord::new(
        n,
        Target::Closed,
        Bound { value: lo, rule: Rule::ClosedBasic },
        Bound { value: hi, rule: Rule::Basic },
    ))
}

/// One record per n in `range` for the chosen target.
pub fn bounds_table(
    range: std::ops::RangeInclusive<u64>,
    target: Target,
    use_published_table: bool,
) -> Result<Vec<BoundRecord>> {
    range
        .map(|n| match target {
            Target::Disk => best_known(n, use_published_table),
            Target::Sphere => best_known_sphere(n, use_published_table),
            Target::Closed => closed_manifold_bounds(n),
        })
        .collect()
}

/// CSV with header `n,target,lower,lower_rule,upper,upper_rule,exact`.
pub fn write_csv<W: std::io::Write>(records: &[BoundRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "target", "lower", "lower_rule", "upper", "upper_rule", "exact"])?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.target.as_str().to_string(),
            r.lower.value.to_string(),
            r.lower.rule.as_str().to_string(),
            r.upper.value.to_string(),
            r.upper.rule.as_str().to_string(),
            r.exact.map(|e| e.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
