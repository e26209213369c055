//! Sampled certification of the classical totally skew embeddings.
//!
//! `cargo run --release --example certify_known [grid]`

use skewkit::embeddings::by_name;
use skewkit::verify::{verify_totally_skew, SamplingPlan, DEFAULT_DELTA, DEFAULT_TOL};

fn main() -> skewkit::Result<()> {
    let grid: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(128);
    let cases = [
        ("cubic", grid),
        ("circle-quadratic", grid),
        ("bilinear-sphere:n=1", grid),
        ("complex-cubic-disk", grid.min(32)),
        ("bilinear-sphere:n=2", grid.min(32)),
    ];
    for (name, g) in cases {
        let e = by_name(name)?;
        let plan = SamplingPlan::new(g, 0, DEFAULT_DELTA, 7)?;
        let r = verify_totally_skew(&e, &plan, DEFAULT_TOL)?;
        println!(
            "{name:<22} grid {g:>4}  {:?}  min margin {:.3e}  pairs {}  suspicious {}  near-diagonal {:?}",
            r.verdict,
            r.min_margin.unwrap_or(f64::NAN),
            r.pairs_evaluated,
            r.suspicious_count,
            r.near_diagonal.status
        );
    }
    Ok(())
}
