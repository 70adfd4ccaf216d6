//! Integral lattices, their vectors, sublattices and isometries.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix, RatMatrix};

/// Integer coordinate vector in a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LVector(pub Vec<BigInt>);

impl LVector {
    pub fn zero(rank: usize) -> Self {
        LVector(vec![BigInt::zero(); rank])
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LVector(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// `i`-th standard basis vector.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn content(&self) -> BigInt {
        matrix::content(&self.0)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn primitive_part(&self) -> LVector {
        LVector(matrix::primitive_part(&self.0))
    }

    pub fn scale(&self, k: &BigInt) -> LVector {
        LVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Sign representative: first nonzero coordinate positive.
    pub fn sign_normalized(&self) -> LVector {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => -self.clone(),
            _ => self.clone(),
        }
    }

    pub fn to_rational(&self) -> QVector {
        QVector(self.0.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }
}

impl Add for &LVector {
    type Output = LVector;
    fn add(self, rhs: &LVector) -> LVector {
        LVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LVector {
    type Output = LVector;
    fn sub(self, rhs: &LVector) -> LVector {
        LVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for LVector {
    type Output = LVector;
    fn neg(self) -> LVector {
        LVector(self.0.into_iter().map(|x| -x).collect())
    }
}

impl fmt::Display for LVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Rational coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QVector(pub Vec<BigRational>);

impl QVector {
    pub fn zero(rank: usize) -> Self {
        QVector(vec![BigRational::zero(); rank])
    }

    pub fn from_integers(v: &LVector) -> Self {
        v.to_rational()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &BigRational) -> QVector {
        QVector(self.0.iter().map(|x| x * k).collect())
    }

    /// The primitive integral vector on the same ray.
    pub fn primitive_integral(&self) -> LVector {
        LVector(matrix::primitive_part(&matrix::clear_denominators(&self.0)))
    }
}

struct LatticeData {
    gram: IntMatrix,
    even: bool,
}

/// A free abelian group with an integral symmetric bilinear form, possibly degenerate.
///
/// Cloning is cheap; the Gram matrix is shared.
#[derive(Clone)]
pub struct Lattice {
    data: Arc<LatticeData>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice").field("gram", &self.data.gram).finish()
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data.gram == other.data.gram
    }
}

impl Eq for Lattice {}

impl Lattice {
    pub fn from_gram(gram: IntMatrix) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::GramNotSquare);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::GramNotSymmetric);
                }
            }
        }
        let even = (0..n).all(|i| gram[i][i].is_even());
        Ok(Lattice { data: Arc::new(LatticeData { gram, even }) })
    }

    pub fn from_i64(gram: &[&[i64]]) -> Result<Self> {
        Self::from_gram(
            gram.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut g = matrix::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            g[i][i] = BigInt::from(d);
        }
        Self::from_gram(g).expect("diagonal gram is symmetric")
    }

    /// The hyperbolic plane with basis `e, f`, `e² = f² = 0`, `e·f = 1`.
    pub fn hyperbolic_plane() -> Self {
        Self::from_i64(&[&[0, 1], &[1, 0]]).expect("static gram")
    }

    /// Negative definite E8: `-2` on the diagonal, `+1` on edges of the Dynkin diagram.
    ///
    /// Node order follows Bourbaki: the chain is 1-3-4-5-6-7-8 with node 2
    /// attached to node 4.
    pub fn e8() -> Self {
        const EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
        let mut g = matrix::zeros(8, 8);
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = BigInt::from(-2);
        }
        for &(a, b) in &EDGES {
            g[a][b] = BigInt::one();
            g[b][a] = BigInt::one();
        }
        Self::from_gram(g).expect("static gram")
    }

    /// `U³ ⊕ E8²` in coordinate order `(e1,f1,e2,f2,e3,f3, E8, E8)`.
    pub fn k3() -> Self {
        let u = Self::hyperbolic_plane();
        let e8 = Self::e8();
        Self::direct_sum(&[&u, &u, &u, &e8, &e8])
    }

    pub fn direct_sum(parts: &[&Lattice]) -> Self {
        let n: usize = parts.iter().map(|p| p.rank()).sum();
        let mut g = matrix::zeros(n, n);
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    g[off + i][off + j] = p.gram()[i][j].clone();
                }
            }
            off += p.rank();
        }
        Self::from_gram(g).expect("sum of symmetric grams")
    }

    pub fn rank(&self) -> usize {
        self.data.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.data.gram
    }

    pub fn is_even(&self) -> bool {
        self.data.even
    }

    pub fn determinant(&self) -> BigInt {
        matrix::determinant(self.gram())
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: len });
        }
        Ok(())
    }

    /// `G·x` as an integer row (the functional `y ↦ x·y`).
    pub fn functional(&self, x: &LVector) -> Result<Vec<BigInt>> {
        self.check(x.len())?;
        Ok(matrix::mat_vec(self.gram(), &x.0))
    }

    pub fn inner(&self, x: &LVector, y: &LVector) -> Result<BigInt> {
        self.check(y.len())?;
        Ok(matrix::dot(&self.functional(x)?, &y.0))
    }

    pub fn norm(&self, x: &LVector) -> Result<BigInt> {
        self.inner(x, x)
    }

    pub fn inner_q(&self, x: &QVector, y: &QVector) -> Result<BigRational> {
        self.check(x.len())?;
        self.check(y.len())?;
        let mut acc = BigRational::zero();
        for (i, xi) in x.0.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.0.iter().enumerate() {
                let g = &self.gram()[i][j];
                if !g.is_zero() && !yj.is_zero() {
                    acc += xi * yj * g;
                }
            }
        }
        Ok(acc)
    }

    pub fn inner_lq(&self, x: &LVector, y: &QVector) -> Result<BigRational> {
        self.check(y.len())?;
        let fx = self.functional(x)?;
        Ok(fx
            .iter()
            .zip(&y.0)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| b * a)
            .sum())
    }

    /// Congruence diagonalization over the rationals.
    pub fn diagonalize(&self) -> Diagonalization {
        diagonalize(self.gram())
    }

    /// `(positive, negative, zero)` inertia counts.
    pub fn signature(&self) -> (usize, usize, usize) {
        self.diagonalize().signature()
    }

    pub fn is_negative_definite(&self) -> bool {
        let (p, n, z) = self.signature();
        p == 0 && z == 0 && n == self.rank()
    }

    /// `{x : x·y = 0 for all y}`.
    pub fn radical(&self) -> Sublattice {
        let k = matrix::int_kernel(self.gram(), self.rank());
        Sublattice::from_hnf(self.clone(), k)
    }

    /// `(S ⊗ Q) ∩ L`.
    pub fn saturate(&self, s: &Sublattice) -> Result<Sublattice> {
        self.check(s.host().rank())?;
        let n = self.rank();
        if s.rank() == 0 {
            return Ok(s.clone());
        }
        let perp = matrix::int_kernel(s.basis(), n);
        let sat = matrix::int_kernel(&perp, n);
        Ok(Sublattice::from_hnf(self.clone(), sat))
    }

    /// `{x ∈ L : x·s = 0 for all s ∈ S}`.
    pub fn orth_complement(&self, s: &Sublattice) -> Result<Sublattice> {
        self.check(s.host().rank())?;
        let rows = matrix::mat_mul(s.basis(), self.gram());
        Ok(Sublattice::from_hnf(self.clone(), matrix::int_kernel(&rows, self.rank())))
    }

    /// Joint kernel of the functionals `y ↦ g·y` for the given integral vectors.
    pub fn orthogonal_to(&self, vs: &[LVector]) -> Result<Sublattice> {
        let rows = vs
            .iter()
            .map(|v| self.functional(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Sublattice::from_hnf(self.clone(), matrix::int_kernel(&rows, self.rank())))
    }

    /// Joint kernel of functionals `y ↦ q·y` for rational vectors `q`.
    pub fn orthogonal_to_rational(&self, vs: &[QVector]) -> Result<Sublattice> {
        let ints: Vec<LVector> = vs
            .iter()
            .map(|q| LVector(matrix::clear_denominators(&q.0)))
            .collect();
        for q in vs {
            self.check(q.len())?;
        }
        self.orthogonal_to(&ints)
    }
}

/// Result of a rational congruence diagonalization: rows of `basis` are
/// pairwise orthogonal and `basis[i]² = diagonal[i]`.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub diagonal: Vec<BigRational>,
    pub basis: RatMatrix,
}

impl Diagonalization {
    pub fn signature(&self) -> (usize, usize, usize) {
        let p = self.diagonal.iter().filter(|d| d.is_positive()).count();
        let n = self.diagonal.iter().filter(|d| d.is_negative()).count();
        (p, n, self.diagonal.len() - p - n)
    }
}

pub fn diagonalize(gram: &[Vec<BigInt>]) -> Diagonalization {
    let n = gram.len();
    let mut a = matrix::to_rational(gram);
    let mut t = matrix::to_rational(&matrix::identity(n));

    fn add_into(a: &mut RatMatrix, t: &mut RatMatrix, k: usize, j: usize) {
        // row_k += row_j and col_k += col_j
        let rj = a[j].clone();
        for (x, y) in a[k].iter_mut().zip(rj) {
            *x += y;
        }
        for row in a.iter_mut() {
            let y = row[j].clone();
            row[k] += y;
        }
        let tj = t[j].clone();
        for (x, y) in t[k].iter_mut().zip(tj) {
            *x += y;
        }
    }

    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
                t.swap(k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                add_into(&mut a, &mut t, k, j);
            } else {
                continue;
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            let rk = a[k].clone();
            for (x, y) in a[i].iter_mut().zip(rk) {
                *x -= &f * y;
            }
            for row in a.iter_mut() {
                let y = row[k].clone();
                row[i] -= &f * y;
            }
            let tk = t[k].clone();
            for (x, y) in t[i].iter_mut().zip(tk) {
                *x -= &f * y;
            }
        }
    }
    Diagonalization { diagonal: (0..n).map(|i| a[i][i].clone()).collect(), basis: t }
}

/// A sublattice stored by its canonical row-HNF basis in host coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    host: Lattice,
    basis: IntMatrix,
}

impl Sublattice {
    pub fn from_generators(host: Lattice, gens: &[LVector]) -> Result<Self> {
        for g in gens {
            host.check(g.len())?;
        }
        let rows: IntMatrix = gens.iter().map(|g| g.0.clone()).collect();
        let n = host.rank();
        Ok(Self { basis: matrix::hnf(&rows, n), host })
    }

    pub(crate) fn from_hnf(host: Lattice, basis: IntMatrix) -> Self {
        Self { host, basis }
    }

    pub fn zero(host: Lattice) -> Self {
        Self { host, basis: Vec::new() }
    }

    pub fn full(host: Lattice) -> Self {
        let n = host.rank();
        Self { host, basis: matrix::identity(n) }
    }

    pub fn host(&self) -> &Lattice {
        &self.host
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<LVector> {
        self.basis.iter().map(|r| LVector(r.clone())).collect()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.basis == matrix::identity(self.host.rank())
    }

    /// Coordinates of `v` in the sublattice basis, if `v` is a member.
    pub fn coordinates(&self, v: &LVector) -> Option<Vec<BigInt>> {
        if v.len() != self.host.rank() {
            return None;
        }
        matrix::hnf_coordinates(&self.basis, &v.0)
    }

    pub fn contains(&self, v: &LVector) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_sublattice(&self, other: &Sublattice) -> bool {
        other.basis_vectors().iter().all(|b| self.contains(b))
    }

    /// Map sublattice coordinates back to host coordinates.
    pub fn to_host(&self, coords: &[BigInt]) -> LVector {
        let mut out = vec![BigInt::zero(); self.host.rank()];
        for (c, row) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(row) {
                *o += c * b;
            }
        }
        LVector(out)
    }

    /// The intrinsic lattice `B·G·Bᵀ`.
    pub fn gram_lattice(&self) -> Lattice {
        let bg = matrix::mat_mul(&self.basis, self.host.gram());
        let bt = matrix::transpose(&self.basis, self.host.rank());
        Lattice::from_gram(matrix::mat_mul(&bg, &bt)).expect("congruent gram is symmetric")
    }

    pub fn is_saturated(&self) -> bool {
        self.index_in_saturation().is_one()
    }

    /// `[sat(S) : S]` as the product of the invariant factors of the basis.
    pub fn index_in_saturation(&self) -> BigInt {
        matrix::smith_invariants(&self.basis, self.host.rank())
            .iter()
            .product()
    }
}

/// An integral basis change `x ↦ M·x` (acting on column coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    pub matrix: IntMatrix,
}

impl Isometry {
    pub fn identity(rank: usize) -> Self {
        Isometry { matrix: matrix::identity(rank) }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &LVector) -> LVector {
        LVector(matrix::mat_vec(&self.matrix, &x.0))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry { matrix: matrix::mat_mul(&self.matrix, &other.matrix) }
    }

    /// `gᵀ·G·g = G` and `det g = ±1`.
    pub fn preserves(&self, lattice: &Lattice) -> bool {
        let n = lattice.rank();
        if self.rank() != n {
            return false;
        }
        let gt = matrix::transpose(&self.matrix, n);
        let lhs = matrix::mat_mul(&matrix::mat_mul(&gt, lattice.gram()), &self.matrix);
        lhs == *lattice.gram() && matrix::determinant(&self.matrix).abs().is_one()
    }

    /// `g⁻¹ = G⁻¹·gᵀ·G` for a nondegenerate host.
    pub fn inverse(&self, lattice: &Lattice) -> Result<Isometry> {
        let n = lattice.rank();
        let ginv = matrix::rat_inverse(&matrix::to_rational(lattice.gram())).ok_or(Error::Degenerate)?;
        let gt = matrix::transpose(&self.matrix, n);
        let right = matrix::to_rational(&matrix::mat_mul(&gt, lattice.gram()));
        let mut out = matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for k in 0..n {
                    if !ginv[i][k].is_zero() && !right[k][j].is_zero() {
                        acc += &ginv[i][k] * &right[k][j];
                    }
                }
                if !acc.is_integer() {
                    return Err(Error::ImpossibleState("isometry inverse is not integral".into()));
                }
                out[i][j] = acc.to_integer();
            }
        }
        Ok(Isometry { matrix: out })
    }

    /// Reflection `x ↦ x + (x·δ)δ` in a root `δ` (`δ² = -2`).
    pub fn reflection(lattice: &Lattice, root: &LVector) -> Result<Isometry> {
        if lattice.norm(root)? != BigInt::from(-2) {
            return Err(Error::NotPositive("reflection needs a root of norm -2".into()));
        }
        let n = lattice.rank();
        let f = lattice.functional(root)?;
        let mut m = matrix::identity(n);
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x += &root.0[i] * &f[j];
            }
        }
        Ok(Isometry { matrix: m })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> LVector {
        LVector::from_i64(c)
    }

    fn sub(host: &Lattice, gens: &[&[i64]]) -> Sublattice {
        Sublattice::from_generators(host.clone(), &gens.iter().map(|g| v(g)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn inner_products() {
        let u = Lattice::hyperbolic_plane();
        assert_eq!(u.inner(&v(&[1, 1]), &v(&[1, 1])).unwrap(), BigInt::from(2));
        let e8 = Lattice::e8();
        let a1 = LVector::unit(8, 0);
        assert_eq!(e8.norm(&a1).unwrap(), BigInt::from(-2));
        assert_eq!(
            u.inner(&v(&[1]), &v(&[1, 1])),
            Err(Error::RankMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn constructors_have_expected_invariants() {
        let u = Lattice::hyperbolic_plane();
        assert!(u.is_even() && u.is_unimodular());
        assert_eq!(u.signature(), (1, 1, 0));
        let e8 = Lattice::e8();
        assert!(e8.is_even() && e8.is_unimodular());
        assert_eq!(e8.signature(), (0, 8, 0));
        let k3 = Lattice::k3();
        assert_eq!(k3.rank(), 22);
        assert!(k3.is_even() && k3.is_unimodular());
        assert_eq!(k3.signature(), (3, 19, 0));
    }

    #[test]
    fn non_symmetric_gram_rejected() {
        assert_eq!(Lattice::from_i64(&[&[0, 1], &[2, 0]]).unwrap_err(), Error::GramNotSymmetric);
        assert_eq!(Lattice::from_i64(&[&[0, 1]]).unwrap_err(), Error::GramNotSquare);
    }

    #[test]
    fn saturation_examples() {
        let u = Lattice::hyperbolic_plane();
        let s = sub(&u, &[&[2, 0]]);
        assert_eq!(u.saturate(&s).unwrap(), sub(&u, &[&[1, 0]]));
        assert_eq!(s.index_in_saturation(), BigInt::from(2));
        let s = sub(&u, &[&[1, 1], &[1, -1]]);
        assert_eq!(s.index_in_saturation(), BigInt::from(2));
        assert!(u.saturate(&s).unwrap().is_full());
        let s = sub(&u, &[&[1, 0]]);
        assert_eq!(u.saturate(&s).unwrap(), s);
    }

    #[test]
    fn orthogonal_complement_examples() {
        let u = Lattice::hyperbolic_plane();
        assert_eq!(u.orth_complement(&sub(&u, &[&[1, 0]])).unwrap(), sub(&u, &[&[1, 0]]));
        assert_eq!(u.orth_complement(&sub(&u, &[&[1, 1]])).unwrap(), sub(&u, &[&[1, -1]]));
        let uu = Lattice::direct_sum(&[&u, &u]);
        assert_eq!(
            uu.orth_complement(&sub(&uu, &[&[1, 0, 0, 0]])).unwrap(),
            sub(&uu, &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])
        );
    }

    #[test]
    fn radical_examples() {
        let z = Lattice::from_i64(&[&[0]]).unwrap();
        assert!(z.radical().is_full());
        assert_eq!(Lattice::hyperbolic_plane().radical().rank(), 0);
        let d = Lattice::from_i64(&[&[0, 0], &[0, -2]]).unwrap();
        assert_eq!(d.radical(), sub(&d, &[&[1, 0]]));
        assert_eq!(d.signature(), (0, 1, 1));
    }

    #[test]
    fn reflection_is_involutive_isometry() {
        let l = Lattice::direct_sum(&[&Lattice::hyperbolic_plane(), &Lattice::diagonal(&[-2])]);
        let d = v(&[0, 1, 1]);
        let s = Isometry::reflection(&l, &d).unwrap();
        assert!(s.preserves(&l));
        assert_eq!(s.compose(&s), Isometry::identity(3));
        assert_eq!(s.apply(&d), -d.clone());
        assert_eq!(s.inverse(&l).unwrap(), s);
    }
}
