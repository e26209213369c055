//! Bilinear-map spheres: exact certificates for convolution maps, and the
//! quaternion product as a counterexample when symmetry fails.

use skewkit::bilinear::{convolution_map, quaternion_map};
use skewkit::embeddings::bilinear_sphere;
use skewkit::verify::{certify_bilinear_sphere, find_violation, verify_totally_skew, SamplingPlan, DEFAULT_TOL};
use skewkit::Error;

fn main() -> skewkit::Result<()> {
    for n in 1..=6 {
        let r = certify_bilinear_sphere(&convolution_map(n), 10_000, 1)?;
        println!("S^{n} in R^{}: {:?} ({})", 3 * n + 2, r.verdict, r.certificate_rule.unwrap_or_default());
    }

    let q = quaternion_map();
    match certify_bilinear_sphere(&q, 10_000, 1) {
        Err(Error::Asymmetric { x, y }) => println!("quaternion product: not symmetric, witness x={x:?} y={y:?}"),
        other => println!("quaternion product: unexpected {other:?}"),
    }
    let sphere = bilinear_sphere(q)?;
    let plan = SamplingPlan::new(8, 20_000, 1e-3, 3)?.with_refine(4);
    let r = verify_totally_skew(&sphere, &plan, DEFAULT_TOL)?;
    println!("quaternion sphere S^3 in R^8: {:?}, {} violating pairs", r.verdict, r.violation_count);
    if let Some(w) = find_violation(&sphere, 3, 4000)? {
        println!("  witness s={:.4?} t={:.4?} margin {:.1e}", w.s, w.t, w.margin);
    }
    Ok(())
}
