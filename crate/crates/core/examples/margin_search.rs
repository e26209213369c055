//! Maximin search from a perturbed `(z, z²)` circle in R^4 and in R^3.
//!
//! `cargo run --release --example margin_search [iters]`

use skewkit::embeddings::Basis;
use skewkit::search::{run_search, Family, Init, SearchConfig};

fn main() -> skewkit::Result<()> {
    let iters: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4000);
    for ambient in [4, 3] {
        let mut cfg = SearchConfig::new(Family::new(Basis::Fourier, 3, ambient)?, 42);
        cfg.iters = iters;
        cfg.init = Init::PerturbedCircleQuadratic { noise: 0.01 };
        let r = run_search(&cfg)?;
        println!(
            "R^{ambient}: {:?} after {} evaluations, objective {:.3e}, grid min {:.3e}, verified min margin {:.3e} ({:?})",
            r.status, r.evaluations, r.best_objective, r.grid_min_margin, r.true_min_margin, r.verdict
        );
    }
    Ok(())
}
