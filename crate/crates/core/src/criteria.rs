//! Lagrangian lattices, the decision `Lag = SLag`, certificates, and realizability.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::enumerate::{find_positive, roots_generate_with, RootReport};
use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::formal::FormalVector;
use crate::hodge::{Omega, PeriodData};
use crate::lattice::{LVector, Lattice, QVector, Sublattice};
use crate::matrix;

/// `[ω]^⊥ ∩ Λ`. For a formal `ω` this is the joint kernel of the base and every perturbation term.
pub fn lag_lattice(host: &Lattice, omega: &Omega) -> Result<Sublattice> {
    let n = host.rank();
    if omega.rank() != n {
        return Err(Error::RankMismatch { expected: n, got: omega.rank() });
    }
    match omega {
        Omega::Rational(w) => {
            if w.is_zero() {
                return Err(Error::ZeroOmega);
            }
            let w2 = host.inner_q(w, w)?;
            if !w2.is_positive() {
                return Err(Error::NotPositive(format!("ω² = {w2}")));
            }
            host.orthogonal_to_rational(std::slice::from_ref(w))
        }
        Omega::Formal(f) => {
            let parts = f.components();
            if parts.iter().all(QVector::is_zero) {
                return Err(Error::ZeroOmega);
            }
            let b2 = host.inner_q(&f.base, &f.base)?;
            if !b2.is_positive() {
                return Err(Error::NotPositive(format!("base² = {b2}")));
            }
            host.orthogonal_to_rational(&parts)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveSplit {
    pub alpha: LVector,
    pub beta: LVector,
    pub m: BigInt,
}

/// `γ = m·x + (γ − m·x)` with both parts of positive square, `m ≥ 1` minimal.
pub fn decompose_positive(l: &Sublattice, gamma: &LVector, x: &LVector) -> Result<PositiveSplit> {
    let h = l.host();
    if !l.contains(x) || !l.contains(gamma) {
        return Err(Error::NotMember);
    }
    let a = h.norm(x)?;
    if !a.is_positive() {
        return Err(Error::NotPositive(format!("x² = {a}")));
    }
    let b = h.inner(gamma, x)?;
    let c = h.norm(gamma)?;
    // (γ − m x)² = a m² − 2 b m + c
    let f = |m: &BigInt| &a * m * m - BigInt::from(2) * &b * m + &c;
    let mut m = BigInt::one();
    if !f(&m).is_positive() {
        // 1 lies between the roots; start just below the larger one
        let disc = &b * &b - &a * &c;
        let est = (&b + disc.sqrt()).div_floor(&a);
        if est > m {
            m = est;
        }
        while !f(&m).is_positive() {
            m += 1;
        }
    }
    let alpha = x.scale(&m);
    let beta = gamma - &alpha;
    Ok(PositiveSplit { alpha, beta, m })
}

/// `v = m·δ + α` with `v² > 0`, `|m|` minimal and `m` of the sign of `δ·α`.
pub fn positive_from_isotropic(l: &Sublattice, delta: &LVector, alpha: &LVector) -> Result<(LVector, BigInt)> {
    let h = l.host();
    if !l.contains(delta) || !l.contains(alpha) {
        return Err(Error::NotMember);
    }
    if !h.norm(delta)?.is_zero() {
        return Err(Error::NotIsotropic);
    }
    let k = h.inner(delta, alpha)?;
    if k.is_zero() {
        return Err(Error::NotCoupled);
    }
    let a2 = h.norm(alpha)?;
    let two_k = BigInt::from(2) * k.abs();
    let s = (-a2).div_floor(&two_k) + 1;
    let s = if s < BigInt::one() { BigInt::one() } else { s };
    let m = if k.is_negative() { -s } else { s };
    let v = &delta.scale(&m) + alpha;
    debug_assert!(h.norm(&v)?.is_positive());
    Ok((v, m))
}

/// `L = rad ⊕ N` for a form without positive vectors.
#[derive(Clone, Debug)]
pub struct RadicalSplit {
    pub rad: Sublattice,
    /// A complement of `rad` in `L`, in `L` coordinates.
    pub complement: Sublattice,
    /// The Gram lattice of `complement`, negative definite.
    pub n: Lattice,
}

pub fn split_radical(l: &Lattice) -> Result<RadicalSplit> {
    if let Some(v) = find_positive(l) {
        return Err(Error::HasPositive(v));
    }
    let n = l.rank();
    let rad = l.radical();
    let r = rad.rank();
    let complement = if r == 0 {
        Sublattice::full(l.clone())
    } else {
        // t·radᵀ = [I; 0] since rad is saturated, so the last columns of t⁻¹ complete rad to a basis
        let rt = matrix::transpose(rad.basis(), n);
        let (_, t) = matrix::hnf_with_transform(&rt, r, true);
        let inv = matrix::rat_inverse(&matrix::to_rational(&t))
            .ok_or_else(|| Error::ImpossibleState("transform is singular".into()))?;
        let gens: Vec<LVector> = (r..n)
            .map(|j| {
                LVector(
                    (0..n)
                        .map(|i| {
                            let q = &inv[i][j];
                            debug_assert!(q.is_integer());
                            q.to_integer()
                        })
                        .collect(),
                )
            })
            .collect();
        Sublattice::from_generators(l.clone(), &gens)?
    };
    let nl = complement.gram_lattice();
    if !nl.is_negative_definite() {
        return Err(Error::ImpossibleState("complement of the radical is not negative definite".into()));
    }
    Ok(RadicalSplit { rad, complement, n: nl })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    PositiveWitness,
    Split,
}

#[derive(Clone, Debug)]
pub struct ClassifyReport {
    pub case: Case,
    pub witness: Option<LVector>,
    pub rad: Sublattice,
    /// Present in the split case.
    pub split: Option<RadicalSplit>,
    pub roots: Option<RootReport>,
    pub roots_generate: Option<bool>,
    pub equal: bool,
}

pub fn classify(l: &Lattice) -> Result<ClassifyReport> {
    classify_with(l, Strategy::default())
}

pub fn classify_with(l: &Lattice, strategy: Strategy) -> Result<ClassifyReport> {
    if let Some(v) = find_positive(l) {
        return Ok(ClassifyReport {
            case: Case::PositiveWitness,
            witness: Some(v),
            rad: l.radical(),
            split: None,
            roots: None,
            roots_generate: None,
            equal: true,
        });
    }
    let split = split_radical(l)?;
    let roots = roots_generate_with(&split.n, strategy)?;
    let generates = roots.generates;
    Ok(ClassifyReport {
        case: Case::Split,
        witness: None,
        rad: split.rad.clone(),
        split: Some(split),
        roots: Some(roots),
        roots_generate: Some(generates),
        equal: generates,
    })
}

/// An integer combination of classes of square at least −2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlagCertificate {
    pub terms: Vec<(BigInt, LVector)>,
    pub context: Sublattice,
}

impl SlagCertificate {
    pub fn sum(&self) -> LVector {
        let n = self.context.host().rank();
        self.terms
            .iter()
            .fold(LVector::zero(n), |acc, (c, v)| &acc + &v.scale(c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateCheck {
    pub ok: bool,
    pub failure: Option<String>,
}

impl CertificateCheck {
    fn fail(msg: String) -> Self {
        CertificateCheck { ok: false, failure: Some(msg) }
    }
}

/// Recompute a certificate from scratch.
pub fn verify_certificate(l: &Sublattice, gamma: &LVector, cert: &SlagCertificate) -> CertificateCheck {
    let h = l.host();
    let n = h.rank();
    if gamma.len() != n {
        return CertificateCheck::fail("target has the wrong rank".into());
    }
    let minus_two = BigInt::from(-2);
    let mut sum = LVector::zero(n);
    for (i, (c, v)) in cert.terms.iter().enumerate() {
        if v.len() != n {
            return CertificateCheck::fail(format!("wrong rank at index {i}"));
        }
        if c.is_zero() {
            return CertificateCheck::fail(format!("zero coefficient at index {i}"));
        }
        if !l.contains(v) {
            return CertificateCheck::fail(format!("not in lattice at index {i}"));
        }
        if h.norm(v).expect("rank checked") < minus_two {
            return CertificateCheck::fail(format!("square < −2 at index {i}"));
        }
        sum = &sum + &v.scale(c);
    }
    if &sum != gamma {
        return CertificateCheck::fail("sum mismatch".into());
    }
    CertificateCheck { ok: true, failure: None }
}

/// Certificate that `γ ∈ L` lies in the span of the classes of square ≥ −2 in `L`.
pub fn certificate_in(l: &Sublattice, gamma: &LVector) -> Result<SlagCertificate> {
    let h = l.host();
    let coords = l.coordinates(gamma).ok_or(Error::NotMember)?;
    let mut cert = SlagCertificate { terms: Vec::new(), context: l.clone() };
    if gamma.is_zero() {
        return Ok(cert);
    }
    if h.norm(gamma)? >= BigInt::from(-2) {
        cert.terms.push((BigInt::one(), gamma.clone()));
        return Ok(cert);
    }
    let gl = l.gram_lattice();
    let report = classify(&gl)?;
    match report.case {
        Case::PositiveWitness => {
            let x = l.to_host(&report.witness.expect("witness present").0);
            let s = decompose_positive(l, gamma, &x)?;
            cert.terms.push((BigInt::one(), s.alpha));
            cert.terms.push((BigInt::one(), s.beta));
            Ok(cert)
        }
        Case::Split => {
            let split = report.split.expect("split present");
            let roots = report.roots.expect("roots present");
            // coordinates of γ in the basis rad ∪ complement of Z^r
            let rad_b = split.rad.basis_vectors();
            let comp_b = split.complement.basis_vectors();
            let basis: Vec<Vec<BigRational>> = rad_b
                .iter()
                .chain(&comp_b)
                .map(|v| v.to_rational().0)
                .collect();
            let target: Vec<BigRational> = coords.iter().cloned().map(BigRational::from_integer).collect();
            let sol = matrix::rat_solve_left(&basis, &target)
                .ok_or_else(|| Error::ImpossibleState("radical and complement do not span".into()))?;
            let sol: Vec<BigInt> = sol.iter().map(BigRational::to_integer).collect();
            let (a, b) = sol.split_at(rad_b.len());
            for (ai, r) in a.iter().zip(&rad_b) {
                if !ai.is_zero() {
                    cert.terms.push((ai.clone(), l.to_host(&r.0)));
                }
            }
            let n_vec = LVector(b.to_vec());
            let span = Sublattice::from_generators(split.n.clone(), &roots.roots)?;
            if !span.contains(&n_vec) {
                return Err(Error::NotDecomposable(format!(
                    "component {n_vec} in the negative definite part is outside the root span"
                )));
            }
            let simple = simple_roots(&split.n, &roots.roots);
            let sb: Vec<Vec<BigRational>> = simple.iter().map(|v| v.to_rational().0).collect();
            let coeffs = matrix::rat_solve_left(&sb, &n_vec.to_rational().0)
                .ok_or_else(|| Error::ImpossibleState("simple roots do not span the root lattice".into()))?;
            for (c, s) in coeffs.iter().zip(&simple) {
                if c.is_zero() {
                    continue;
                }
                if !c.is_integer() {
                    return Err(Error::ImpossibleState("non-integral simple root coordinate".into()));
                }
                // N coordinates → complement coordinates in L → host
                let in_l = split.complement.to_host(&s.0);
                cert.terms.push((c.to_integer(), l.to_host(&in_l.0)));
            }
            Ok(cert)
        }
    }
}

/// Simple roots for a generic linear functional; they form a Z-basis of the root lattice.
fn simple_roots(n: &Lattice, reps: &[LVector]) -> Vec<LVector> {
    let k = reps
        .iter()
        .flat_map(|r| r.0.iter().map(|c| c.abs()))
        .max()
        .unwrap_or_default()
        * 2
        + 1;
    let phi = |v: &LVector| {
        v.0.iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &k + c)
    };
    let positive: Vec<LVector> = reps
        .iter()
        .map(|r| if phi(r).is_positive() { r.clone() } else { -r.clone() })
        .collect();
    let set: HashSet<&LVector> = positive.iter().collect();
    let mut simple: Vec<LVector> = positive
        .iter()
        .filter(|p| !positive.iter().any(|q| set.contains(&(*p - q))))
        .cloned()
        .collect();
    simple.sort();
    debug_assert!(simple.iter().all(|s| n.norm(s).unwrap() == BigInt::from(-2)));
    simple
}

/// Certificate for a Lagrangian class of given period data.
pub fn slag_certificate(p: &PeriodData, gamma: &LVector) -> Result<SlagCertificate> {
    p.validate()?;
    if !p.is_lagrangian(gamma)? {
        return Err(Error::NotLagrangian);
    }
    let l = lag_lattice(&p.host, &p.omega)?;
    certificate_in(&l, gamma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealizabilityFailure {
    NotProper,
    NotSaturated,
    NoPositiveInComplement,
}

impl RealizabilityFailure {
    pub fn name(self) -> &'static str {
        match self {
            RealizabilityFailure::NotProper => "NotProper",
            RealizabilityFailure::NotSaturated => "NotSaturated",
            RealizabilityFailure::NoPositiveInComplement => "NoPositiveInComplement",
        }
    }
}

/// `v = x + ε·Σ tᵢ yᵢ` with `v² > 0` for `|tᵢ| ≤ 1`, `0 < ε < eps_bound`, and `v^⊥ ∩ Λ = E`.
#[derive(Clone, Debug)]
pub struct RealizationWitness {
    /// With `eps = eps_bound / 2` and markers `t_1, …, t_m`.
    pub vector: FormalVector,
    pub x: LVector,
    pub ys: Vec<LVector>,
    pub eps_bound: BigRational,
    /// `x² − 2ε Σ|x·yᵢ| − ε² Σ|yᵢ·yⱼ|` at `ε = eps_bound / 2`, a lower bound for `v²`.
    pub worst_case_norm: BigRational,
    pub joint_kernel: Sublattice,
}

#[derive(Clone, Debug)]
pub struct RealizabilityReport {
    pub ok: bool,
    pub failing_condition: Option<RealizabilityFailure>,
    pub witness: Option<RealizationWitness>,
}

fn first_failure(host: &Lattice, e: &Sublattice) -> Result<(Option<RealizabilityFailure>, Sublattice)> {
    if host.signature().2 != 0 {
        return Err(Error::Degenerate);
    }
    if e.host() != host {
        return Err(Error::RankMismatch { expected: host.rank(), got: e.host().rank() });
    }
    let perp = host.orth_complement(e)?;
    let fail = if e.is_full() {
        Some(RealizabilityFailure::NotProper)
    } else if !e.is_saturated() {
        Some(RealizabilityFailure::NotSaturated)
    } else if find_positive(&perp.gram_lattice()).is_none() {
        Some(RealizabilityFailure::NoPositiveInComplement)
    } else {
        None
    };
    Ok((fail, perp))
}

pub fn realizable(host: &Lattice, e: &Sublattice) -> Result<RealizabilityReport> {
    let (fail, _) = first_failure(host, e)?;
    if let Some(f) = fail {
        return Ok(RealizabilityReport { ok: false, failing_condition: Some(f), witness: None });
    }
    let w = realize_witness(host, e)?;
    Ok(RealizabilityReport { ok: true, failing_condition: None, witness: Some(w) })
}

pub fn realize_witness(host: &Lattice, e: &Sublattice) -> Result<RealizationWitness> {
    let (fail, perp) = first_failure(host, e)?;
    if let Some(f) = fail {
        return Err(Error::NotRealizable(f.name().into()));
    }
    let xl = find_positive(&perp.gram_lattice()).expect("checked above");
    let x = perp.to_host(&xl.0);
    let ys = perp.basis_vectors();
    let x2 = host.norm(&x)?;
    let mut s1 = BigInt::zero();
    for y in &ys {
        s1 += host.inner(&x, y)?.abs();
    }
    let mut s2 = BigInt::zero();
    for yi in &ys {
        for yj in &ys {
            s2 += host.inner(yi, yj)?.abs();
        }
    }
    let two = BigInt::from(2);
    let ratio = BigRational::new(x2.clone(), &two * &s1 + &s2 + 1);
    let eps_bound = ratio.min(BigRational::one());
    let eps = &eps_bound / BigRational::from_integer(two.clone());
    let worst_case_norm = BigRational::from_integer(x2)
        - BigRational::from_integer(&two * &s1) * &eps
        - BigRational::from_integer(s2) * &eps * &eps;
    if !worst_case_norm.is_positive() {
        return Err(Error::ImpossibleState("perturbation bound does not keep v² positive".into()));
    }
    let mut kernel_of = vec![x.clone()];
    kernel_of.extend(ys.iter().cloned());
    let joint_kernel = host.orthogonal_to(&kernel_of)?;
    if &joint_kernel != e {
        return Err(Error::NotRealizable("joint kernel differs from E".into()));
    }
    let terms = ys.iter().enumerate().map(|(i, y)| (i + 1, y.to_rational())).collect();
    let vector = FormalVector::new(x.to_rational(), eps, terms)?;
    Ok(RealizationWitness { vector, x, ys, eps_bound, worst_case_norm, joint_kernel })
}
