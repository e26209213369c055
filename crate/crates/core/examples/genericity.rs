//! How often a random curve is totally skew, by ambient dimension.
//!
//! `cargo run --release --example genericity [trials]`

use skewkit::embeddings::Basis;
use skewkit::search::{genericity_experiment, Family};
use skewkit::verify::SamplingPlan;

fn main() -> skewkit::Result<()> {
    let trials: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(50);
    let plan = SamplingPlan::new(96, 0, 1e-3, 42)?.with_refine(4);
    let families = [
        ("open cubic curves in R^5", Family::new(Basis::Polynomial, 3, 5)?),
        ("open cubic curves in R^4", Family::new(Basis::Polynomial, 3, 4)?),
        ("closed curves in R^3", Family::new(Basis::Fourier, 3, 3)?),
    ];
    for (label, fam) in families {
        let g = genericity_experiment(trials, &fam, &plan, 42)?;
        println!(
            "{label:<26} certified {:>3}/{trials}  refuted {:>3}  not immersed {}",
            g.certified, g.refuted, g.not_immersed
        );
    }
    Ok(())
}
