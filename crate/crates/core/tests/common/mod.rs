//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use skewkit::embeddings::Embedding;

/// Rank of an integer matrix (given as columns) by exact elimination over Q.
pub fn exact_rank(columns: &[Vec<i64>]) -> usize {
    if columns.is_empty() {
        return 0;
    }
    let rows = columns[0].len();
    // work on rows of the transpose: rank is the same
    let mut m: Vec<Vec<BigRational>> = columns
        .iter()
        .map(|c| c.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();
    let mut rank = 0;
    for col in 0..rows {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let p = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone() / p.clone();
                for c in col..rows {
                    let sub = f.clone() * m[rank][c].clone();
                    m[r][c] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Exact skewness of `p + span(D)` and `q + span(E)` with integer data:
/// the lifted column sets must have independent spans.
pub fn exact_skew(p: &[i64], d: &[Vec<i64>], q: &[i64], e: &[Vec<i64>]) -> bool {
    let lift = |pt: &[i64], dirs: &[Vec<i64>]| -> Vec<Vec<i64>> {
        let mut cols: Vec<Vec<i64>> = dirs
            .iter()
            .map(|v| {
                let mut c = v.clone();
                c.push(0);
                c
            })
            .collect();
        let mut c = pt.to_vec();
        c.push(1);
        cols.push(c);
        cols
    };
    let a = lift(p, d);
    let b = lift(q, e);
    let ra = exact_rank(&a);
    let rb = exact_rank(&b);
    let all: Vec<Vec<i64>> = a.into_iter().chain(b).collect();
    exact_rank(&all) == ra + rb
}

/// `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Largest deviation between the analytic frame at `p` and central
/// differences of the value through the domain chart, relative to the frame.
pub fn frame_fd_error(e: &Embedding, p: &[f64], h: f64) -> f64 {
    let frame = e.jet(p, 1).unwrap().frame;
    let dim = e.domain().dim();
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        let mut step = vec![0.0; dim];
        step[i] = h;
        let plus = e.value(&e.domain().chart_step(p, &step)).unwrap();
        step[i] = -h;
        let minus = e.value(&e.domain().chart_step(p, &step)).unwrap();
        let scale = frame.column(i).iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (k, (a, b)) in plus.iter().zip(&minus).enumerate() {
            let fd = (a - b) / (2.0 * h);
            worst = worst.max((fd - frame.column(i)[k]).abs() / scale);
        }
    }
    worst
}

/// Same for the order-2 and order-3 derivatives of a curve.
pub fn higher_fd_error(e: &Embedding, s: f64, h: f64) -> f64 {
    let at = |x: f64, order: usize| -> Vec<f64> {
        let j = e.jet(&[x], 3).unwrap();
        match order {
            1 => j.frame.column(0).to_vec(),
            k => j.higher[k - 2].clone(),
        }
    };
    let mut worst: f64 = 0.0;
    for order in 2..=3 {
        let exact = at(s, order);
        let plus = at(s + h, order - 1);
        let minus = at(s - h, order - 1);
        let scale = exact.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for k in 0..exact.len() {
            let fd = (plus[k] - minus[k]) / (2.0 * h);
            worst = worst.max((fd - exact[k]).abs() / scale);
        }
    }
    worst
}

pub fn catalog_singles() -> Vec<&'static str> {
    vec![
        "cubic",
        "circle-quadratic",
        "planar-circle",
        "complex-cubic-disk",
        "bilinear-sphere:n=1",
        "bilinear-sphere:n=2",
        "bilinear-sphere:n=3",
        "bilinear-sphere:complex:l=2",
        "bilinear-sphere:quaternion",
        "parametric:polynomial:3:0.5,1,-2,0.3,0,0.1,1,2,-1,0,0,1",
        "parametric:fourier:3:0.1,1,0.2,0,0.3,1,0.5,-0.2,0.1,0.4,0,0.7,0.3,1,-0.5",
    ]
}
