//! Complete vector enumeration.
//!
//! The workhorse is an exact Fincke–Pohst enumerator over a positive definite
//! rational form, built on an `LDLᵀ` decomposition. All bounds are decided with
//! rational comparisons, so no vector inside the ellipsoid can be missed to
//! rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::lattice::{LVector, Lattice, Sublattice};
use crate::matrix::{self, RatMatrix};

/// `Q(x) = Σ dᵢ (xᵢ + Σ_{j>i} μ[j][i] x_j)²`.
struct Ldl {
    d: Vec<BigRational>,
    mu: RatMatrix,
}

fn ldl(q: &RatMatrix) -> Option<Ldl> {
    let n = q.len();
    let mut d = vec![BigRational::zero(); n];
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut di = q[i][i].clone();
        for k in 0..i {
            di -= &mu[i][k] * &mu[i][k] * &d[k];
        }
        if !di.is_positive() {
            return None;
        }
        for j in i + 1..n {
            let mut s = q[j][i].clone();
            for k in 0..i {
                s -= &mu[j][k] * &mu[i][k] * &d[k];
            }
            mu[j][i] = s / &di;
        }
        d[i] = di;
    }
    Some(Ldl { d, mu })
}

fn ceil_rat(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

fn floor_rat(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

/// Integers `t` with `(t + c)² ≤ r`, as an inclusive range (possibly empty).
fn admissible_range(c: &BigRational, r: &BigRational) -> (BigInt, BigInt) {
    let fits = |t: &BigInt| {
        let s = BigRational::from_integer(t.clone()) + c;
        &(&s * &s) <= r
    };
    let slack = ceil_rat(r).sqrt() + BigInt::one();
    let neg_c = -c.clone();
    let mut lo = floor_rat(&neg_c) - &slack;
    let mut hi = ceil_rat(&neg_c) + &slack;
    while lo <= hi && !fits(&lo) {
        lo += 1;
    }
    while hi >= lo && !fits(&hi) {
        hi -= 1;
    }
    (lo, hi)
}

struct Enumerator<'a> {
    f: &'a Ldl,
    bound: &'a BigRational,
}

impl Enumerator<'_> {
    fn center(&self, level: usize, x: &[BigInt]) -> BigRational {
        let n = x.len();
        let mut c = BigRational::zero();
        for j in level + 1..n {
            if !x[j].is_zero() {
                c += &self.f.mu[j][level] * BigRational::from_integer(x[j].clone());
            }
        }
        c
    }

    fn range(&self, level: usize, x: &[BigInt], used: &BigRational) -> (BigInt, BigInt, BigRational) {
        let c = self.center(level, x);
        let rem = (self.bound - used) / &self.f.d[level];
        let (lo, hi) = admissible_range(&c, &rem);
        (lo, hi, c)
    }

    fn descend(&self, level: usize, x: &mut Vec<BigInt>, used: BigRational, out: &mut Vec<Vec<BigInt>>) {
        let (lo, hi, c) = self.range(level, x, &used);
        let mut t = lo;
        while t <= hi {
            let s = BigRational::from_integer(t.clone()) + &c;
            let contrib = &self.f.d[level] * &s * &s;
            let total = &used + contrib;
            x[level] = t.clone();
            if level == 0 {
                if x.iter().any(|v| !v.is_zero()) {
                    out.push(x.clone());
                }
            } else {
                self.descend(level - 1, x, total, out);
            }
            t += 1;
        }
        x[level] = BigInt::zero();
    }
}

/// All nonzero integer `x` with `xᵀ·q·x ≤ bound` for a positive definite `q`.
/// Both members of each ± pair are returned; order is unspecified.
pub(crate) fn enumerate_ball(q: &RatMatrix, bound: &BigRational, strategy: Strategy) -> Option<Vec<Vec<BigInt>>> {
    let n = q.len();
    let f = ldl(q)?;
    if n == 0 || bound.is_negative() {
        return Some(Vec::new());
    }
    let e = Enumerator { f: &f, bound };
    let top = n - 1;
    let zero = vec![BigInt::zero(); n];
    let (lo, hi, c) = e.range(top, &zero, &BigRational::zero());
    let mut tops = Vec::new();
    let mut t = lo;
    while t <= hi {
        tops.push(t.clone());
        t += 1;
    }
    let chunks = exec::map_ordered(strategy, tops, |t| {
        let mut x = vec![BigInt::zero(); n];
        let s = BigRational::from_integer(t.clone()) + &c;
        let used = &f.d[top] * &s * &s;
        x[top] = t;
        let mut out = Vec::new();
        if top == 0 {
            if !x[0].is_zero() {
                out.push(x);
            }
        } else {
            e.descend(top - 1, &mut x, used, &mut out);
        }
        out
    });
    Some(chunks.into_iter().flatten().collect())
}

/// Nonzero `x` with `0 < -x² ≤ bound` in a negative definite lattice, one per
/// ± pair (first nonzero coordinate positive), sorted lexicographically.
pub fn short_vectors(lattice: &Lattice, bound: &BigInt) -> Result<Vec<LVector>> {
    short_vectors_with(lattice, bound, Strategy::default())
}

pub fn short_vectors_with(lattice: &Lattice, bound: &BigInt, strategy: Strategy) -> Result<Vec<LVector>> {
    let neg: RatMatrix = lattice
        .gram()
        .iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(-x)).collect())
        .collect();
    let all = enumerate_ball(&neg, &BigRational::from_integer(bound.clone()), strategy)
        .ok_or(Error::NotNegativeDefinite)?;
    let mut reps: Vec<LVector> = all
        .into_iter()
        .map(LVector)
        .filter(|v| v.sign_normalized() == *v)
        .collect();
    reps.sort();
    Ok(reps)
}

/// Roots (norm −2 vectors) of a negative definite lattice and whether they span it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    /// One representative per ± pair.
    pub roots: Vec<LVector>,
    /// Number of roots counting both signs.
    pub count: usize,
    pub sign_deduplicated: bool,
    pub generates: bool,
    /// HNF span of the roots, when there are any.
    pub generation_basis: Option<Sublattice>,
}

pub fn roots_generate(lattice: &Lattice) -> Result<RootReport> {
    roots_generate_with(lattice, Strategy::default())
}

pub fn roots_generate_with(lattice: &Lattice, strategy: Strategy) -> Result<RootReport> {
    let minus_two = BigInt::from(-2);
    let roots: Vec<LVector> = short_vectors_with(lattice, &BigInt::from(2), strategy)?
        .into_iter()
        .filter(|v| lattice.norm(v).map(|n| n == minus_two).unwrap_or(false))
        .collect();
    let span = Sublattice::from_generators(lattice.clone(), &roots)?;
    let generates = span.is_full();
    Ok(RootReport {
        count: 2 * roots.len(),
        roots,
        sign_deduplicated: true,
        generates,
        generation_basis: if span.rank() > 0 || lattice.rank() == 0 { Some(span) } else { None },
    })
}

/// Some `v` with `v² > 0`, or `None` exactly when the form has no positive direction.
pub fn find_positive(lattice: &Lattice) -> Option<LVector> {
    let n = lattice.rank();
    if let Some(i) = (0..n).find(|&i| lattice.gram()[i][i].is_positive()) {
        return Some(LVector::unit(n, i));
    }
    let diag = lattice.diagonalize();
    let k = diag.diagonal.iter().position(|d| d.is_positive())?;
    let v = LVector(matrix::primitive_part(&matrix::clear_denominators(&diag.basis[k])));
    debug_assert!(lattice.norm(&v).unwrap().is_positive());
    Some(v)
}

/// Outcome of an isotropic vector search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsotropicSearch {
    Found(LVector),
    /// The form provably has no nonzero isotropic vector.
    NoneExists,
    /// Not found within the coordinate box of the given height.
    Unknown { height: u64 },
}

/// Upper limit on box points visited by the exhaustive stage.
pub const MAX_SEARCH_POINTS: u128 = 5_000_000;

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

pub fn find_isotropic(lattice: &Lattice, height: u64) -> IsotropicSearch {
    let n = lattice.rank();
    let rad = lattice.radical();
    if let Some(b) = rad.basis_vectors().into_iter().next() {
        return IsotropicSearch::Found(b);
    }
    let diag = lattice.diagonalize();
    let (p, q, _) = diag.signature();
    if p == 0 || q == 0 {
        return IsotropicSearch::NoneExists;
    }
    let g = lattice.gram();
    if let Some(i) = (0..n).find(|&i| g[i][i].is_zero()) {
        return IsotropicSearch::Found(LVector::unit(n, i));
    }
    for i in 0..n {
        for j in i + 1..n {
            for sign in [1i64, -1] {
                let s = BigInt::from(sign);
                if (&g[i][i] + &g[j][j] + BigInt::from(2) * &s * &g[i][j]).is_zero() {
                    let mut v = LVector::unit(n, i);
                    v.0[j] = s;
                    return IsotropicSearch::Found(v.sign_normalized());
                }
            }
        }
    }
    // d_i a² + d_j b² = 0 with a/b = sqrt(-d_j/d_i) rational
    let d = &diag.diagonal;
    for i in 0..n {
        for j in i + 1..n {
            if !(d[i].is_positive() && d[j].is_negative() || d[i].is_negative() && d[j].is_positive()) {
                continue;
            }
            if let Some(ratio) = rational_sqrt(&(-(&d[j] / &d[i]))) {
                let a = BigRational::from_integer(ratio.numer().clone());
                let b = BigRational::from_integer(ratio.denom().clone());
                let v: Vec<BigRational> = diag.basis[i]
                    .iter()
                    .zip(&diag.basis[j])
                    .map(|(x, y)| &a * x + &b * y)
                    .collect();
                let v = LVector(matrix::primitive_part(&matrix::clear_denominators(&v)));
                debug_assert!(lattice.norm(&v).unwrap().is_zero());
                return IsotropicSearch::Found(v.sign_normalized());
            }
        }
    }
    if n == 2 {
        // a binary form is isotropic over Q iff -d1/d2 is a square
        return IsotropicSearch::NoneExists;
    }
    box_search(lattice, height).map_or(IsotropicSearch::Unknown { height }, IsotropicSearch::Found)
}

fn box_search(lattice: &Lattice, height: u64) -> Option<LVector> {
    let n = lattice.rank();
    let mut visited: u128 = 0;
    for h in 1..=height as i64 {
        let side = (2 * h + 1) as u128;
        visited = visited.saturating_add(side.saturating_pow(n as u32));
        if visited > MAX_SEARCH_POINTS {
            return None;
        }
        let mut x = vec![-h; n];
        loop {
            if x.iter().any(|c| c.abs() == h) {
                let v = LVector::from_i64(&x);
                if v.sign_normalized() == v && v.is_primitive() && lattice.norm(&v).unwrap().is_zero() {
                    return Some(v);
                }
            }
            // odometer increment, last coordinate fastest
            let mut k = n;
            let mut wrapped = true;
            while k > 0 {
                k -= 1;
                if x[k] < h {
                    x[k] += 1;
                    wrapped = false;
                    break;
                }
                x[k] = -h;
            }
            if wrapped {
                break;
            }
        }
    }
    None
}

/// All roots `δ` with `0 < δ·w < bound`, sorted lexicographically.
///
/// Requires `w² > 0` and `w^⊥` negative definite (hyperbolic signature);
/// otherwise the slice need not be finite.
pub fn root_slice(lattice: &Lattice, w: &LVector, bound: &BigInt) -> Result<Vec<LVector>> {
    root_slice_with(lattice, w, bound, Strategy::default())
}

pub fn root_slice_with(lattice: &Lattice, w: &LVector, bound: &BigInt, strategy: Strategy) -> Result<Vec<LVector>> {
    let w2 = lattice.norm(w)?;
    if !w2.is_positive() {
        return Err(Error::NotPositive(format!("w² = {w2}")));
    }
    let n = lattice.rank();
    if lattice.signature() != (1, n - 1, 0) {
        return Err(Error::SliceNotDefinite);
    }
    if bound <= &BigInt::one() {
        return Ok(Vec::new());
    }
    // P(x) = 2(x·w)² - w²·x², positive definite on a hyperbolic lattice
    let gw = lattice.functional(w)?;
    let two = BigInt::from(2);
    let q: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(&two * &gw[i] * &gw[j] - &w2 * &lattice.gram()[i][j]))
                .collect()
        })
        .collect();
    let k = bound - BigInt::one();
    let limit = BigRational::from_integer(&two * &w2 + &two * &k * &k);
    let all = enumerate_ball(&q, &limit, strategy).ok_or(Error::SliceNotDefinite)?;
    let minus_two = BigInt::from(-2);
    let mut out: Vec<LVector> = all
        .into_iter()
        .filter(|x| {
            let p = matrix::dot(&gw, x);
            p.is_positive() && &p < bound
        })
        .map(LVector)
        .filter(|x| lattice.norm(x).unwrap() == minus_two)
        .collect();
    out.sort();
    Ok(out)
}
