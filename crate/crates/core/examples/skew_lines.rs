//! Skewness of affine subspaces through the lift to linear subspaces.

use skewkit::affine::{are_skew, AffineSubspace, DEFAULT_SKEW_TOL};

fn main() -> skewkit::Result<()> {
    let x_axis = AffineSubspace::new(vec![0.0, 0.0, 0.0], &[vec![1.0, 0.0, 0.0]])?;
    let cubic_tangent = AffineSubspace::new(vec![1.0, 1.0, 1.0], &[vec![1.0, 2.0, 3.0]])?;
    let raised = AffineSubspace::new(vec![0.0, 0.0, 1.0], &[vec![1.0, 0.0, 0.0]])?;
    let crossing = AffineSubspace::new(vec![0.0, 1.0, 0.0], &[vec![1.0, -1.0, 0.0]])?;

    for (label, other) in [("cubic tangent at 1", &cubic_tangent), ("parallel copy", &raised), ("crossing line", &crossing)] {
        let t = are_skew(&x_axis, other, DEFAULT_SKEW_TOL)?;
        println!("x-axis vs {label:<20} skew = {:<5} margin = {:.3e}", t.skew, t.margin);
    }

    let lifted = cubic_tangent.lift();
    println!("lifted basis of the cubic tangent ({}-dim in R^{}):", lifted.dim(), lifted.ambient_dim());
    for col in lifted.basis().columns() {
        println!("  {col:.4?}");
    }
    Ok(())
}
