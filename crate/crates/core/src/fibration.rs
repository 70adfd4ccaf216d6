//! Isotropic classes orthogonal to a polarization, and the walk into the nef chamber.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::eichler::{orth_witnesses, CanonicalFormResult};
use crate::enumerate::root_slice_with;
use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::lattice::{LVector, Lattice, QVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NefWalkResult {
    pub nef_class: LVector,
    /// Roots used, in order.
    pub reflections: Vec<LVector>,
    /// `ℓ·ω` before the first step and after each one.
    pub pairing_trace: Vec<BigInt>,
}

/// `x ↦ x + (x·δ)δ` for a root `δ`.
pub fn reflect(lattice: &Lattice, delta: &LVector, x: &LVector) -> Result<LVector> {
    let k = lattice.inner(x, delta)?;
    Ok(x + &delta.scale(&k))
}

/// Roots `δ` with `0 < δ·ω < ℓ·ω` and `δ·ℓ < 0`, cheapest first.
pub fn negative_roots(lattice: &Lattice, omega: &LVector, ell: &LVector, strategy: Strategy) -> Result<Vec<(BigInt, LVector)>> {
    let bound = lattice.inner(ell, omega)?;
    let mut out = Vec::new();
    for d in root_slice_with(lattice, omega, &bound, strategy)? {
        if lattice.inner(&d, ell)?.is_negative() {
            out.push((lattice.inner(&d, omega)?, d));
        }
    }
    out.sort();
    Ok(out)
}

pub fn make_nef(lattice: &Lattice, omega: &LVector, ell: &LVector) -> Result<NefWalkResult> {
    make_nef_with(lattice, omega, ell, Strategy::default())
}

pub fn make_nef_with(lattice: &Lattice, omega: &LVector, ell: &LVector, strategy: Strategy) -> Result<NefWalkResult> {
    let w2 = lattice.norm(omega)?;
    if !w2.is_positive() {
        return Err(Error::NotPositive(format!("ω² = {w2}")));
    }
    if !lattice.norm(ell)?.is_zero() {
        return Err(Error::NotIsotropic);
    }
    let mut p = lattice.inner(ell, omega)?;
    if !p.is_positive() {
        return Err(Error::WrongSide);
    }
    let mut ell = ell.clone();
    let mut reflections = Vec::new();
    let mut pairing_trace = vec![p.clone()];
    loop {
        let cands = negative_roots(lattice, omega, &ell, strategy)?;
        let Some((_, delta)) = cands.into_iter().next() else { break };
        let next = reflect(lattice, &delta, &ell)?;
        let q = lattice.inner(&next, omega)?;
        if !lattice.norm(&next)?.is_zero() || !q.is_positive() || q >= p {
            return Err(Error::ImpossibleState(format!("reflection in {delta} did not shorten the walk")));
        }
        ell = next;
        p = q;
        reflections.push(delta);
        pairing_trace.push(p.clone());
    }
    Ok(NefWalkResult { nef_class: ell, reflections, pairing_trace })
}

#[derive(Clone, Debug)]
pub struct SyzWitness {
    /// Primitive isotropic, orthogonal to `w`.
    pub ell: LVector,
    /// The primitive integral class on the ray of the input.
    pub w: LVector,
    pub canonical: CanonicalFormResult,
}

pub fn syz_witness(w: &QVector) -> Result<SyzWitness> {
    if w.is_zero() {
        return Err(Error::ZeroVector);
    }
    let k3 = Lattice::k3();
    if w.len() != k3.rank() {
        return Err(Error::RankMismatch { expected: k3.rank(), got: w.len() });
    }
    let w = w.primitive_integral();
    let w2 = k3.norm(&w)?;
    if !w2.is_positive() {
        return Err(Error::NotPositive(format!("w² = {w2}")));
    }
    let o = orth_witnesses(&w)?;
    Ok(SyzWitness { ell: o.ell, w, canonical: o.canonical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn v(c: &[i64]) -> LVector {
        LVector::from_i64(c)
    }

    fn ud() -> Lattice {
        Lattice::direct_sum(&[&Lattice::hyperbolic_plane(), &Lattice::diagonal(&[-2])])
    }

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn nef_walk_fixture() {
        let l = ud();
        let w = v(&[3, 2, 1]);
        let r = make_nef(&l, &w, &v(&[1, 1, -1])).unwrap();
        assert_eq!(r.nef_class, v(&[1, 0, 0]));
        assert_eq!(r.reflections, vec![v(&[0, 0, -1]), v(&[0, 1, 1])]);
        assert_eq!(r.pairing_trace, ints(&[7, 3, 2]));
        let r = make_nef(&l, &w, &v(&[1, 0, 0])).unwrap();
        assert!(r.reflections.is_empty());
        assert_eq!(r.nef_class, v(&[1, 0, 0]));
    }

    #[test]
    fn nef_walk_errors() {
        let l = ud();
        let w = v(&[3, 2, 1]);
        assert_eq!(make_nef(&l, &w, &v(&[-1, 0, 0])), Err(Error::WrongSide));
        assert_eq!(make_nef(&l, &w, &v(&[1, 1, 0])), Err(Error::NotIsotropic));
        assert!(matches!(make_nef(&l, &v(&[1, 0, 0]), &v(&[1, 0, 0])), Err(Error::NotPositive(_))));
    }

    #[test]
    fn reflections_are_involutions() {
        let l = ud();
        let d = v(&[0, 1, 1]);
        assert_eq!(reflect(&l, &d, &d).unwrap(), -d.clone());
        for x in [v(&[1, 1, -1]), v(&[4, -2, 7])] {
            let y = reflect(&l, &d, &x).unwrap();
            assert_eq!(reflect(&l, &d, &y).unwrap(), x);
            assert_eq!(l.norm(&y).unwrap(), l.norm(&x).unwrap());
        }
    }

    #[test]
    fn syz_examples() {
        let mut w = LVector::zero(22);
        w.0[0] = BigInt::from(1);
        w.0[1] = BigInt::from(1);
        let e2 = LVector::unit(22, 2);
        assert_eq!(syz_witness(&w.to_rational()).unwrap().ell, e2);
        w.0[1] = BigInt::from(2);
        assert_eq!(syz_witness(&w.to_rational()).unwrap().ell, e2);
        let mut w = LVector::zero(22);
        w.0[0] = BigInt::from(2);
        w.0[1] = BigInt::from(2);
        let s = syz_witness(&w.to_rational()).unwrap();
        assert_eq!(s.ell, e2);
        assert_eq!(s.w.0[0], BigInt::from(1));
        let half = w.to_rational().scale(&BigRational::new(1.into(), 4.into()));
        assert_eq!(syz_witness(&half).unwrap().ell, e2);
        assert_eq!(syz_witness(&QVector::zero(22)).unwrap_err(), Error::ZeroVector);
        assert!(matches!(syz_witness(&LVector::unit(22, 0).to_rational()), Err(Error::NotPositive(_))));
    }
}
