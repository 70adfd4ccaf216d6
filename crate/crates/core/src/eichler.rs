//! Eichler transvections and canonical forms of primitive vectors.
//!
//! The host must split as `U ⊕ U ⊕ R` in its first four coordinates
//! (`e1, f1, e2, f2`) with `R` even unimodular; `Λ_K3` is the main case.
//!
//! Writing the `U ⊕ U` part of `w` as the 2×2 matrix `[[x1, -x2], [y2, y1]]`
//! (determinant `w²/2` restricted to the block), the four transvections
//! `E(e2, t·f1)`, `E(e2, t·e1)`, `E(f2, t·f1)`, `E(f2, t·e1)` act as elementary
//! row and column operations. A Smith reduction of that matrix, one
//! transvection moving the content of the `R` part into `e2`, a second Smith
//! reduction and a final `E(f1, m)` bring `w` to `e1 + (w²/2)·f1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Isometry, LVector, Lattice};
use crate::matrix;

/// The map `x ↦ x + (x·a)u − (x·u)a − ½(a²)(x·u)u` for isotropic `u ⊥ a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transvection {
    pub u: LVector,
    pub a: LVector,
    half_a2: BigInt,
    fu: Vec<BigInt>,
    fa: Vec<BigInt>,
}

impl Transvection {
    pub fn new(lattice: &Lattice, u: &LVector, a: &LVector) -> Result<Self> {
        if !lattice.norm(u)?.is_zero() {
            return Err(Error::NotIsotropic);
        }
        if !lattice.inner(u, a)?.is_zero() {
            return Err(Error::NotOrthogonal);
        }
        let a2 = lattice.norm(a)?;
        if a2.is_odd() {
            return Err(Error::ParityFailure);
        }
        Ok(Transvection {
            u: u.clone(),
            a: a.clone(),
            half_a2: a2 / 2,
            fu: lattice.functional(u)?,
            fa: lattice.functional(a)?,
        })
    }

    pub fn apply(&self, x: &LVector) -> LVector {
        let xa = matrix::dot(&self.fa, &x.0);
        let xu = matrix::dot(&self.fu, &x.0);
        if xa.is_zero() && xu.is_zero() {
            return x.clone();
        }
        let cu = &xa - &self.half_a2 * &xu;
        LVector(
            x.0.iter()
                .zip(self.u.0.iter().zip(&self.a.0))
                .map(|(xi, (ui, ai))| xi + &cu * ui - &xu * ai)
                .collect(),
        )
    }

    /// `E(u, a)⁻¹ = E(u, −a)`.
    pub fn inverse(&self) -> Transvection {
        Transvection {
            u: self.u.clone(),
            a: -self.a.clone(),
            half_a2: self.half_a2.clone(),
            fu: self.fu.clone(),
            fa: self.fa.iter().map(|x| -x).collect(),
        }
    }

    pub fn to_isometry(&self) -> Isometry {
        let n = self.u.len();
        let cols: Vec<LVector> = (0..n).map(|j| self.apply(&LVector::unit(n, j))).collect();
        Isometry { matrix: columns_to_matrix(&cols) }
    }
}

fn columns_to_matrix(cols: &[LVector]) -> Vec<Vec<BigInt>> {
    let n = cols.len();
    (0..n).map(|i| cols.iter().map(|c| c.0[i].clone()).collect()).collect()
}

/// Matrix of the transvection `x ↦ x + (x·a)u − (x·u)a − ½(a²)(x·u)u`.
pub fn transvection(lattice: &Lattice, u: &LVector, a: &LVector) -> Result<Isometry> {
    Ok(Transvection::new(lattice, u, a)?.to_isometry())
}

#[derive(Clone, Debug)]
pub struct CanonicalFormResult {
    pub g: Isometry,
    /// `w² / 2`.
    pub d: BigInt,
    /// `e1 + d·f1`.
    pub target: LVector,
    /// Transvections in application order; `g` is their composition.
    pub steps: Vec<Transvection>,
}

impl CanonicalFormResult {
    /// `g⁻¹(y)`, by undoing the steps in reverse order.
    pub fn apply_inverse(&self, y: &LVector) -> LVector {
        self.steps
            .iter()
            .rev()
            .fold(y.clone(), |acc, t| t.inverse().apply(&acc))
    }
}

fn check_host(host: &Lattice) -> Result<()> {
    let n = host.rank();
    if n < 4 || !host.is_even() {
        return Err(Error::UnsupportedHost);
    }
    let g = host.gram();
    let uu = Lattice::direct_sum(&[&Lattice::hyperbolic_plane(), &Lattice::hyperbolic_plane()]);
    for i in 0..4 {
        for j in 0..n {
            let expected = if j < 4 { uu.gram()[i][j].clone() } else { BigInt::zero() };
            if g[i][j] != expected {
                return Err(Error::UnsupportedHost);
            }
        }
    }
    let rest: Vec<Vec<BigInt>> = g[4..].iter().map(|r| r[4..].to_vec()).collect();
    if !matrix::determinant(&rest).abs().is_one() {
        return Err(Error::UnsupportedHost);
    }
    Ok(())
}

struct Reducer<'a> {
    host: &'a Lattice,
    w: LVector,
    cols: Vec<LVector>,
    steps: Vec<Transvection>,
}

const E1: usize = 0;
const F1: usize = 1;
const E2: usize = 2;
const F2: usize = 3;

impl Reducer<'_> {
    fn apply(&mut self, u: LVector, a: LVector) -> Result<()> {
        if a.is_zero() {
            return Ok(());
        }
        let t = Transvection::new(self.host, &u, &a)?;
        self.w = t.apply(&self.w);
        for c in self.cols.iter_mut() {
            *c = t.apply(c);
        }
        self.steps.push(t);
        Ok(())
    }

    fn basis_multiple(&self, i: usize, t: &BigInt) -> LVector {
        LVector::unit(self.host.rank(), i).scale(t)
    }

    fn unit(&self, i: usize) -> LVector {
        LVector::unit(self.host.rank(), i)
    }

    /// The block matrix `[[x1, -x2], [y2, y1]]`.
    fn block(&self) -> [[BigInt; 2]; 2] {
        let c = &self.w.0;
        [[c[E1].clone(), -c[E2].clone()], [c[F2].clone(), c[F1].clone()]]
    }

    fn row2_add_row1(&mut self, t: &BigInt) -> Result<()> {
        let a = self.basis_multiple(F1, t);
        self.apply(self.unit(F2), a)
    }

    fn row1_add_row2(&mut self, t: &BigInt) -> Result<()> {
        let a = self.basis_multiple(E1, &-t);
        self.apply(self.unit(E2), a)
    }

    fn col2_add_col1(&mut self, t: &BigInt) -> Result<()> {
        let a = self.basis_multiple(F1, &-t);
        self.apply(self.unit(E2), a)
    }

    fn col1_add_col2(&mut self, t: &BigInt) -> Result<()> {
        let a = self.basis_multiple(E1, t);
        self.apply(self.unit(F2), a)
    }

    /// `[r1; r2] → [r2; −r1]`.
    fn rotate_rows(&mut self) -> Result<()> {
        let one = BigInt::one();
        self.row1_add_row2(&one)?;
        self.row2_add_row1(&-&one)?;
        self.row1_add_row2(&one)
    }

    /// `[c1 c2] → [c2 −c1]`.
    fn rotate_cols(&mut self) -> Result<()> {
        let one = BigInt::one();
        self.col1_add_col2(&one)?;
        self.col2_add_col1(&-&one)?;
        self.col1_add_col2(&one)
    }

    /// Bring the block to `diag(g, D)` with `g ≥ 0` and `g | D`.
    fn smith_block(&mut self) -> Result<()> {
        loop {
            let a = self.block();
            if a[1][0].is_zero() && a[0][1].is_zero() {
                if a[0][0].is_zero() && !a[1][1].is_zero() {
                    self.rotate_rows()?;
                    continue;
                }
                if !a[0][0].is_zero() && !(&a[1][1] % &a[0][0]).is_zero() {
                    self.row1_add_row2(&BigInt::one())?;
                    continue;
                }
                break;
            }
            if !a[1][0].is_zero() {
                if a[0][0].is_zero() || a[1][0].abs() < a[0][0].abs() {
                    self.rotate_rows()?;
                    continue;
                }
                let q = a[1][0].div_floor(&a[0][0]);
                self.row2_add_row1(&-q)?;
                continue;
            }
            // a10 = 0, a01 ≠ 0
            if a[0][0].is_zero() || a[0][1].abs() < a[0][0].abs() {
                self.rotate_cols()?;
                continue;
            }
            let q = a[0][1].div_floor(&a[0][0]);
            self.col2_add_col1(&-q)?;
        }
        if self.w.0[E1].is_negative() {
            self.rotate_rows()?;
            self.rotate_rows()?;
        }
        Ok(())
    }
}

/// Canonical form in `Λ_K3`.
pub fn canonical_form(w: &LVector) -> Result<CanonicalFormResult> {
    canonical_form_in(&Lattice::k3(), w)
}

/// Isometry `g` with `g(w) = e1 + (w²/2)·f1`, for primitive `w` with `w² ≥ 0`.
pub fn canonical_form_in(host: &Lattice, w: &LVector) -> Result<CanonicalFormResult> {
    check_host(host)?;
    let n = host.rank();
    let w2 = host.norm(w)?;
    if !w.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    if w2.is_negative() {
        return Err(Error::NegativeNorm);
    }
    let mut r = Reducer {
        host,
        w: w.clone(),
        cols: (0..n).map(|j| LVector::unit(n, j)).collect(),
        steps: Vec::new(),
    };
    r.smith_block()?;

    let m = LVector(r.w.0[4..].to_vec());
    if !m.is_zero() {
        // move content(m) into the e2 slot; f2 coefficient is zero here
        let c = m.content();
        let m0: Vec<BigInt> = m.0.iter().map(|x| x / &c).collect();
        let rest: Vec<Vec<BigInt>> = host.gram()[4..].iter().map(|row| row[4..].to_vec()).collect();
        let z = matrix::mat_vec(&rest, &m0);
        let (g, coeffs) = matrix::bezout(&z);
        if !g.is_one() {
            return Err(Error::ImpossibleState("dual vector not found in unimodular block".into()));
        }
        let mut a = LVector::zero(n);
        a.0[4..].clone_from_slice(&coeffs);
        r.apply(r.unit(E2), a)?;
        r.smith_block()?;
    }
    if !r.w.0[E1].is_one() {
        return Err(Error::ImpossibleState(format!("block reduction ended at {}", r.w)));
    }
    let mut a = LVector::zero(n);
    a.0[4..].clone_from_slice(&r.w.0[4..]);
    r.apply(r.unit(F1), a)?;

    let d: BigInt = &w2 / BigInt::from(2);
    let mut target = LVector::unit(n, E1);
    target.0[F1] = d.clone();
    if r.w != target {
        return Err(Error::ImpossibleState(format!("canonical form ended at {}", r.w)));
    }
    Ok(CanonicalFormResult {
        g: Isometry { matrix: columns_to_matrix(&r.cols) },
        d,
        target,
        steps: r.steps,
    })
}

/// Positive and isotropic classes orthogonal to `w`.
#[derive(Clone, Debug)]
pub struct OrthWitnesses {
    /// `g⁻¹(e2 + f2)`, of norm 2.
    pub v: LVector,
    /// `g⁻¹(e2)`, isotropic and primitive.
    pub ell: LVector,
    pub canonical: CanonicalFormResult,
}

pub fn orth_witnesses(w: &LVector) -> Result<OrthWitnesses> {
    orth_witnesses_in(&Lattice::k3(), w)
}

pub fn orth_witnesses_in(host: &Lattice, w: &LVector) -> Result<OrthWitnesses> {
    let w2 = host.norm(w)?;
    if !w2.is_positive() {
        return Err(Error::NotPositive(format!("w² = {w2}")));
    }
    let canonical = canonical_form_in(host, w)?;
    let n = host.rank();
    let e2 = LVector::unit(n, E2);
    let e2f2 = &e2 + &LVector::unit(n, F2);
    Ok(OrthWitnesses {
        v: canonical.apply_inverse(&e2f2),
        ell: canonical.apply_inverse(&e2),
        canonical,
    })
}
