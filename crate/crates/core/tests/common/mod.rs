//! Brute-force oracles in machine integers, independent of the library's algorithms.
#![allow(dead_code)]

use k3lag::{LVector, Lattice};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub type Gram = Vec<Vec<i64>>;

pub fn lat(g: &Gram) -> Lattice {
    let rows: Vec<&[i64]> = g.iter().map(Vec::as_slice).collect();
    Lattice::from_i64(&rows).unwrap()
}

pub fn v(c: &[i64]) -> LVector {
    LVector::from_i64(c)
}

pub fn to_i64(x: &LVector) -> Vec<i64> {
    x.0.iter().map(|c| c.to_i64().unwrap()).collect()
}

pub fn int(k: i64) -> BigInt {
    BigInt::from(k)
}

pub fn pair(g: &[Vec<i128>], x: &[i64], y: &[i64]) -> i128 {
    let mut s = 0i128;
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += x[i] as i128 * g[i][j] * y[j] as i128;
        }
    }
    s
}

pub fn widen(g: &Gram) -> Vec<Vec<i128>> {
    g.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

/// Laplace expansion; fine for the small ranks used here.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn cofactor_diag(m: &[Vec<i128>], i: usize) -> i128 {
    let minor: Vec<Vec<i128>> = m
        .iter()
        .enumerate()
        .filter(|&(r, _)| r != i)
        .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, &x)| x).collect())
        .collect();
    det(&minor)
}

/// For a positive definite `q`, the largest `k` with `k² ≤ limit·(q⁻¹)ᵢᵢ`, per coordinate.
pub fn box_bounds(q: &[Vec<i128>], limit: i128) -> Vec<i64> {
    let d = det(q);
    assert!(d > 0);
    (0..q.len())
        .map(|i| {
            let c = cofactor_diag(q, i);
            let mut k: i64 = 0;
            while ((k + 1) as i128).pow(2) * d <= limit * c {
                k += 1;
            }
            k
        })
        .collect()
}

pub fn box_points(bounds: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-b..=b).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

fn first_positive(x: &[i64]) -> bool {
    x.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

/// Sign representatives of `0 < -x² ≤ bound` by exhaustive box search.
pub fn brute_short_vectors(g: &Gram, bound: i64) -> Vec<Vec<i64>> {
    let gw = widen(g);
    let q: Vec<Vec<i128>> = gw.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let mut out: Vec<Vec<i64>> = box_points(&box_bounds(&q, bound as i128))
        .into_iter()
        .filter(|x| first_positive(x))
        .filter(|x| {
            let n = -pair(&gw, x, x);
            n > 0 && n <= bound as i128
        })
        .collect();
    out.sort();
    out
}

/// Roots `δ` with `0 < δ·w < bound` in a hyperbolic lattice, by exhaustive box search
/// over the ellipsoid `2(x·w)² − w²x² ≤ 2·bound² + 2w²`.
pub fn brute_root_slice(g: &Gram, w: &[i64], bound: i64) -> Vec<Vec<i64>> {
    let gw = widen(g);
    let n = g.len();
    let fw: Vec<i128> = (0..n).map(|i| (0..n).map(|j| gw[i][j] * w[j] as i128).sum()).collect();
    let w2 = pair(&gw, w, w);
    let p: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| 2 * fw[i] * fw[j] - w2 * gw[i][j]).collect())
        .collect();
    let limit = 2 * (bound as i128).pow(2) + 2 * w2;
    let mut out: Vec<Vec<i64>> = box_points(&box_bounds(&p, limit))
        .into_iter()
        .filter(|x| pair(&gw, x, x) == -2)
        .filter(|x| {
            let s = pair(&gw, x, w);
            s > 0 && s < bound as i128
        })
        .collect();
    out.sort();
    out
}

pub fn u_plus(diag: &[i64]) -> Gram {
    let n = 2 + diag.len();
    let mut g = vec![vec![0; n]; n];
    g[0][1] = 1;
    g[1][0] = 1;
    for (k, &d) in diag.iter().enumerate() {
        g[2 + k][2 + k] = d;
    }
    g
}

pub fn k3_unit(i: usize) -> LVector {
    LVector::unit(22, i)
}
