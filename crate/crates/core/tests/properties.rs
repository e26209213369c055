mod common;

use nalgebra::{DMatrix, Quaternion};
use num_complex::Complex64;
use proptest::prelude::*;
use skewkit::affine::{are_skew, AffineSubspace};
use skewkit::bilinear::{complex_convolution_map, convolution_map, quaternion_map, BilinearMap};
use skewkit::bounds::binomial_is_odd;
use skewkit::embeddings::by_name;
use skewkit::linalg::{dot, orthonormal_basis, rank, singular_values, Matrix, DEFAULT_RANK_TOL};
use skewkit::verify::{verify_totally_skew, SamplingPlan, DEFAULT_TOL};

fn to_f64(v: &[i64]) -> Vec<f64> {
    v.iter().map(|&x| x as f64).collect()
}

fn int_vecs(dim: usize, count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), count)
}

/// Ambient dimension, point, directions, point, directions.
fn subspace_pair() -> impl Strategy<Value = (usize, Vec<i64>, Vec<Vec<i64>>, Vec<i64>, Vec<Vec<i64>>)> {
    (2usize..=6).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(-3i64..=3, n),
            int_vecs(n, 0..=3),
            prop::collection::vec(-3i64..=3, n),
            int_vecs(n, 0..=3),
        )
    })
}

fn random_orthogonal(n: usize, raw: &[f64]) -> Matrix {
    let cols: Vec<Vec<f64>> = raw.chunks(n).map(|c| c.to_vec()).collect();
    orthonormal_basis(&cols, 1e-6).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn orthonormal_basis_is_orthonormal(vs in (1usize..=7).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-5.0f64..5.0, n), 1..=n))) {
        let q = orthonormal_basis(&vs, DEFAULT_RANK_TOL).unwrap();
        for i in 0..q.cols() {
            for j in 0..q.cols() {
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot(q.column(i), q.column(j)) - expect).abs() < 1e-10);
            }
        }
        // Spans the input: every input vector is reproduced by its projection.
        for v in &vs {
            let mut r = v.clone();
            for c in q.columns() {
                let a = dot(c, v);
                r.iter_mut().zip(c).for_each(|(x, y)| *x -= a * y);
            }
            prop_assert!(r.iter().map(|x| x.abs()).fold(0.0, f64::max) < 1e-8);
        }
    }

    #[test]
    fn rank_matches_exact_rank(cols in (1usize..=6).prop_flat_map(|n| int_vecs(n, 1..=6))) {
        let m = Matrix::from_columns(cols[0].len(), &cols.iter().map(|c| to_f64(c)).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(rank(&m, 1e-9).unwrap(), common::exact_rank(&cols));
    }

    #[test]
    fn singular_values_match_nalgebra(rows in 1usize..=7, cols in 1usize..=7, seed in prop::collection::vec(-4.0f64..4.0, 49)) {
        let data: Vec<f64> = seed[..rows * cols].to_vec();
        let ours = singular_values(&Matrix::from_columns(rows, &data.chunks(rows).map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap());
        let mut theirs: Vec<f64> = DMatrix::from_column_slice(rows, cols, &data).singular_values().iter().copied().collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        prop_assert_eq!(ours.len(), theirs.len());
        for (a, b) in ours.iter().zip(&theirs) {
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + b), "{ours:?} vs {theirs:?}");
        }
    }

    #[test]
    fn are_skew_matches_exact_criterion((_n, p, d, q, e) in subspace_pair()) {
        let v = AffineSubspace::new(to_f64(&p), &d.iter().map(|x| to_f64(x)).collect::<Vec<_>>()).unwrap();
        let w = AffineSubspace::new(to_f64(&q), &e.iter().map(|x| to_f64(x)).collect::<Vec<_>>()).unwrap();
        let t = are_skew(&v, &w, DEFAULT_TOL).unwrap();
        prop_assert_eq!(t.skew, common::exact_skew(&p, &d, &q, &e), "margin {}", t.margin);
        prop_assert!((0.0..=1.0).contains(&t.margin));
        let swapped = are_skew(&w, &v, DEFAULT_TOL).unwrap();
        prop_assert_eq!(t.skew, swapped.skew);
        prop_assert!((t.margin - swapped.margin).abs() < 1e-12);
    }

    #[test]
    fn skewness_is_affine_invariant(
        (n, p, d, q, e) in subspace_pair(),
        raw in prop::collection::vec(-1.0f64..1.0, 36),
        scales in prop::collection::vec(0.5f64..2.0, 6),
        shift in prop::collection::vec(-10.0f64..10.0, 6),
    ) {
        let v = AffineSubspace::new(to_f64(&p), &d.iter().map(|x| to_f64(x)).collect::<Vec<_>>()).unwrap();
        let w = AffineSubspace::new(to_f64(&q), &e.iter().map(|x| to_f64(x)).collect::<Vec<_>>()).unwrap();
        let qm = random_orthogonal(n, &raw[..n * n]);
        prop_assume!(qm.cols() == n);
        // A = Q diag(s) Qᵀ
        let mut a = Matrix::zeros(n, n);
        for j in 0..n {
            let col: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|k| qm.column(k)[i] * scales[k] * qm.column(k)[j]).sum())
                .collect();
            a.column_mut(j).copy_from_slice(&col);
        }
        let before = are_skew(&v, &w, DEFAULT_TOL).unwrap();
        let after = are_skew(
            &v.map_affine(&a, &shift[..n]).unwrap(),
            &w.map_affine(&a, &shift[..n]).unwrap(),
            DEFAULT_TOL,
        ).unwrap();
        prop_assert_eq!(before.skew, after.skew, "{} -> {}", before.margin, after.margin);
    }

    #[test]
    fn bilinear_maps_are_bilinear(
        coeffs in prop::collection::vec(-2.0f64..2.0, 3 * 2 * 4),
        x in prop::collection::vec(-2.0f64..2.0, 3),
        x2 in prop::collection::vec(-2.0f64..2.0, 3),
        y in prop::collection::vec(-2.0f64..2.0, 2),
        y2 in prop::collection::vec(-2.0f64..2.0, 2),
        a in -3.0f64..3.0,
    ) {
        let b = BilinearMap::new(3, 2, 4, coeffs).unwrap();
        let comb = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| a * p + q).collect::<Vec<_>>();
        let lhs = b.evaluate(&comb(&x, &x2), &y).unwrap();
        let (bx, bx2) = (b.evaluate(&x, &y).unwrap(), b.evaluate(&x2, &y).unwrap());
        for k in 0..4 {
            prop_assert!((lhs[k] - (a * bx[k] + bx2[k])).abs() < 1e-10);
        }
        let rhs = b.evaluate(&x, &comb(&y, &y2)).unwrap();
        let (by, by2) = (b.evaluate(&x, &y).unwrap(), b.evaluate(&x, &y2).unwrap());
        for k in 0..4 {
            prop_assert!((rhs[k] - (a * by[k] + by2[k])).abs() < 1e-10);
        }
    }

    #[test]
    fn convolution_is_polynomial_product(n in 1usize..=5, xs in prop::collection::vec(-3.0f64..3.0, 12)) {
        let (x, y) = (&xs[..n + 1], &xs[6..6 + n + 1]);
        let mut expect = vec![0.0; 2 * n + 1];
        for i in 0..=n {
            for j in 0..=n {
                expect[i + j] += x[i] * y[j];
            }
        }
        let got = convolution_map(n).evaluate(x, y).unwrap();
        for (g, e) in got.iter().zip(&expect) {
            prop_assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_convolution_is_complex_product(l in 1usize..=3, xs in prop::collection::vec(-3.0f64..3.0, 12)) {
        let (x, y) = (&xs[..2 * l], &xs[6..6 + 2 * l]);
        let cx: Vec<Complex64> = x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let cy: Vec<Complex64> = y.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let mut expect = vec![Complex64::new(0.0, 0.0); 2 * l - 1];
        for p in 0..l {
            for q in 0..l {
                expect[p + q] += cx[p] * cy[q];
            }
        }
        let got = complex_convolution_map(l).unwrap().evaluate(x, y).unwrap();
        for (k, e) in expect.iter().enumerate() {
            prop_assert!((got[2 * k] - e.re).abs() < 1e-12 && (got[2 * k + 1] - e.im).abs() < 1e-12);
        }
    }

    #[test]
    fn quaternion_map_is_hamilton_product(x in prop::collection::vec(-3.0f64..3.0, 4), y in prop::collection::vec(-3.0f64..3.0, 4)) {
        let qx = Quaternion::new(x[0], x[1], x[2], x[3]);
        let qy = Quaternion::new(y[0], y[1], y[2], y[3]);
        let p = qx * qy;
        let expect = [p.w, p.i, p.j, p.k];
        let got = quaternion_map().evaluate(&x, &y).unwrap();
        for k in 0..4 {
            prop_assert!((got[k] - expect[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn catalog_frames_match_finite_differences(which in 0usize..11, raw in prop::collection::vec(-1.0f64..1.0, 8)) {
        let name = common::catalog_singles()[which];
        let e = by_name(name).unwrap();
        // an interior domain point
        let dom = e.domain().clone();
        let p: Vec<f64> = match dom {
            skewkit::embeddings::Domain::Interval { .. } => vec![0.9 * raw[0]],
            skewkit::embeddings::Domain::Circle => vec![std::f64::consts::PI * (raw[0] + 1.0)],
            skewkit::embeddings::Domain::Disk { n, radius } => {
                let v = &raw[..n];
                let r = skewkit::linalg::norm(v).max(1e-3);
                v.iter().map(|x| 0.9 * radius * x / r.max(1.0)).collect()
            }
            skewkit::embeddings::Domain::Sphere { n } => {
                let v: Vec<f64> = raw[..n + 1].iter().map(|x| x + 1e-3).collect();
                let r = skewkit::linalg::norm(&v);
                v.iter().map(|x| x / r).collect()
            }
        };
        prop_assert!(common::frame_fd_error(&e, &p, 1e-5) < 1e-6, "{name}");
        if e.is_curve() && !matches!(dom, skewkit::embeddings::Domain::Interval { .. } if p[0].abs() > 0.99) {
            prop_assert!(common::higher_fd_error(&e, p[0], 1e-5) < 1e-6, "{name}");
        }
    }
}

#[test]
fn lucas_parity_matches_big_binomials() {
    for a in 0..=64u64 {
        for b in 0..=a {
            let odd = common::binomial(a, b).bit(0);
            assert_eq!(binomial_is_odd(a, b), odd, "C({a}, {b})");
        }
    }
}

#[test]
fn verification_is_deterministic_across_thread_counts() {
    let plan = SamplingPlan::new(48, 2000, 0.05, 9).unwrap().with_refine(2);
    let e = by_name("circle-quadratic").unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| verify_totally_skew(&e, &plan, DEFAULT_TOL).unwrap().to_json().unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(1));
}
