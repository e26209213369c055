//! Derivative-free minimization used by witness search.

/// Nelder-Mead on `f: R^d → R` starting from a regular-ish simplex of edge
/// `step` around `x0`. Non-finite values are treated as +∞. Returns the best
/// point, its value, and the number of evaluations spent.
pub(crate) fn nelder_mead<F>(mut f: F, x0: &[f64], step: f64, max_evals: usize, ftol: f64) -> (Vec<f64>, f64, usize)
where
    F: FnMut(&[f64]) -> f64,
{
    let d = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), eval(x0, &mut evals)));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[d].1;
        if best <= 0.0 || (worst - best).abs() <= ftol {
            break;
        }
        let centroid: Vec<f64> = (0..d)
            .map(|k| simplex[..d].iter().map(|(x, _)| x[k]).sum::<f64>() / d as f64)
            .collect();
        let along = |t: f64, w: &[f64]| -> Vec<f64> {
            centroid.iter().zip(w).map(|(c, wk)| c + t * (wk - c)).collect()
        };
        let worst_x = simplex[d].0.clone();
        let xr = along(-1.0, &worst_x);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = along(-2.0, &worst_x);
            let fe = eval(&xe, &mut evals);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst {
                let xc = along(-0.5, &worst_x);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = along(0.5, &worst_x);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < worst.min(fr) {
                simplex[d] = (xc, fc);
            } else {
                // shrink toward the best vertex
                let x_best = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    let xs: Vec<f64> = x_best.iter().zip(&v.0).map(|(b, x)| b + 0.5 * (x - b)).collect();
                    let fs = eval(&xs, &mut evals);
                    *v = (xs, fs);
                }
            }
        }
        let size = simplex
            .iter()
            .skip(1)
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if size < 1e-15 {
            break;
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, v) = simplex.swap_remove(0);
    (x, v, evals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_a_quadratic() {
        let (x, v, _) = nelder_mead(
            |x| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            0.5,
            5000,
            1e-20,
        );
        assert!(v < 1e-12);
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] + 2.0).abs() < 1e-5);
    }

    #[test]
    fn handles_kinks_and_infinities() {
        let (x, v, _) = nelder_mead(
            |x| if x[0] < -1.0 { f64::NAN } else { (x[0] - 0.3).abs() + (x[1]).abs() },
            &[0.0, 0.5],
            0.2,
            5000,
            0.0,
        );
        assert!(v < 1e-8, "{v} at {x:?}");
    }
}
