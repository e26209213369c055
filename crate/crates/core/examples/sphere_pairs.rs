//! Totally skew pairs of spheres and the Gauss-map differential.

use skewkit::embeddings::{planar_circle_in_r3, sphere_pair};
use skewkit::verify::{gauss_differential_sigma, gauss_pair_differential_check, verify_skew_pair, SamplingPlan, DEFAULT_TOL};

fn main() -> skewkit::Result<()> {
    for (n1, n2, grid) in [(1, 1, 64), (1, 2, 24), (2, 2, 12)] {
        let (a, b) = sphere_pair(n1, n2)?;
        let plan = SamplingPlan::new(grid, 10_000, 1e-3, 9)?;
        let r = verify_skew_pair(&a, &b, &plan, DEFAULT_TOL)?;
        let g = gauss_pair_differential_check(&a, &b, 2000, 9)?;
        println!(
            "S^{n1} and S^{n2} in R^{}: {:?}, min margin {:.3}, Gauss differential sigma_min {:.3}",
            a.ambient_dim(),
            r.verdict,
            r.min_margin.unwrap_or(f64::NAN),
            g
        );
    }

    let c = planar_circle_in_r3();
    let lifted = c.translated(vec![0.0, 0.0, 1.0])?;
    let sigma = gauss_differential_sigma(&c, &[0.7], &lifted, &[0.7])?;
    println!("stacked circles with parallel tangents: sigma_min {sigma:.1e}");
    Ok(())
}
