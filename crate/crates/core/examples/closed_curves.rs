//! Closed curves in R^3 are never totally skew: witness search on a planar
//! circle and on a random closed space curve.

use skewkit::embeddings::planar_circle_in_r3;
use skewkit::sampling::stream_rng;
use skewkit::search::Family;
use skewkit::embeddings::Basis;
use skewkit::verify::{find_violation, near_diagonal_check};

fn main() -> skewkit::Result<()> {
    let circle = planar_circle_in_r3();
    let nd = near_diagonal_check(&circle, 64)?;
    println!("planar circle near-diagonal test: {:?} (sigma {:.1e})", nd.status, nd.worst_sigma.unwrap_or(0.0));
    if let Some(w) = find_violation(&circle, 1, 2000)? {
        println!("planar circle witness: s={:.4} t={:.4} margin {:.1e}", w.s[0], w.t[0], w.margin);
    }

    let fam = Family::new(Basis::Fourier, 3, 3)?;
    let coeffs = fam.random_coeffs(&mut stream_rng(5, 0));
    let curve = fam.embedding(&coeffs)?;
    match find_violation(&curve, 1, 4000)? {
        Some(w) => println!("random closed curve witness: s={:.4} t={:.4} margin {:.1e}", w.s[0], w.t[0], w.margin),
        None => println!("random closed curve: no witness found within budget"),
    }
    Ok(())
}
