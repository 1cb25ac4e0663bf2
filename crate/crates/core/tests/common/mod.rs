//! Independent curvature oracle for left-invariant metrics, written without
//! Christoffel symbols.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sasaki_lab::MetricLieAlgebra;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn inner(m: &MetricLieAlgebra, x: &[f64], y: &[f64]) -> f64 {
    let g = m.gram();
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += x[i] * g[(i, j)] * y[j];
        }
    }
    s
}

/// Bracket straight from the structure constants.
pub fn bracket(m: &MetricLieAlgebra, x: &[f64], y: &[f64]) -> Vec<f64> {
    let alg = m.algebra();
    let n = alg.dim();
    let mut out = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            let c = x[i] * y[j];
            if c == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += c * alg.structure_constant(i, j, k);
            }
        }
    }
    out
}

/// Solves `A x = b` by Gauss-Jordan elimination with partial pivoting.
pub fn gauss_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, v)| {
        let mut r = r.clone();
        r.push(*v);
        r
    }).collect();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
        m.swap(col, p);
        let d = m[col][col];
        assert!(d.abs() > 1e-14, "singular system in oracle");
        for k in col..=n {
            m[col][k] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                if f != 0.0 {
                    for k in col..=n {
                        m[r][k] -= f * m[col][k];
                    }
                }
            }
        }
    }
    m.into_iter().map(|r| r[n]).collect()
}

/// `U(A,B)` defined by `⟨U(A,B),Z⟩ = ½(⟨[Z,A],B⟩ + ⟨A,[Z,B]⟩)`.
fn u(m: &MetricLieAlgebra, a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let rhs: Vec<f64> = (0..n)
        .map(|z| {
            let mut e = vec![0.0; n];
            e[z] = 1.0;
            0.5 * (inner(m, &bracket(m, &e, a), b) + inner(m, a, &bracket(m, &e, b)))
        })
        .collect();
    let g: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m.gram()[(i, j)]).collect()).collect();
    gauss_solve(&g, &rhs)
}

/// `K(X,Y)·|X∧Y|²` of a left-invariant metric:
/// `-¾|[X,Y]|² - ½⟨[X,[X,Y]],Y⟩ - ½⟨[Y,[Y,X]],X⟩ + |U(X,Y)|² - ⟨U(X,X),U(Y,Y)⟩`.
pub fn sectional_numerator(m: &MetricLieAlgebra, x: &[f64], y: &[f64]) -> f64 {
    let xy = bracket(m, x, y);
    let yx: Vec<f64> = xy.iter().map(|v| -v).collect();
    let uxy = u(m, x, y);
    -0.75 * inner(m, &xy, &xy) - 0.5 * inner(m, &bracket(m, x, &xy), y) - 0.5 * inner(m, &bracket(m, y, &yx), x)
        + inner(m, &uxy, &uxy)
        - inner(m, &u(m, x, x), &u(m, y, y))
}

pub fn area2(m: &MetricLieAlgebra, x: &[f64], y: &[f64]) -> f64 {
    inner(m, x, x) * inner(m, y, y) - inner(m, x, y).powi(2)
}

pub fn sectional(m: &MetricLieAlgebra, x: &[f64], y: &[f64]) -> f64 {
    sectional_numerator(m, x, y) / area2(m, x, y)
}

/// Base sectional curvature of a Riemannian submersion along the unit Killing field `xi`.
pub fn base_sectional(m: &MetricLieAlgebra, xi: &[f64], x: &[f64], y: &[f64]) -> f64 {
    let v = inner(m, &bracket(m, x, y), xi);
    sectional(m, x, y) + 0.75 * v * v / area2(m, x, y)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}
