//! Period data and hyperkähler-rotation bookkeeping.
//!
//! For a Lagrangian class `γ` with `c = γ·θ ≠ 0`, the rotation phase is fixed
//! by `ζ² = c̄/c`. `ζ` itself is never formed: the rotated Picard lattice and
//! the sign of `x·Re(ζθ)` only involve `c` up to a positive real factor.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::formal::{AnyVector, FormalVector};
use crate::lattice::{LVector, Lattice, QVector, Sublattice};

/// `re + i·im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        GaussianRational::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn one() -> Self {
        GaussianRational::from_integers(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }

    /// `|z|²`.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_div(&self, other: &GaussianRational) -> Option<Self> {
        let n = other.norm_sq();
        if n.is_zero() {
            return None;
        }
        let num = self * &other.conj();
        Some(GaussianRational::new(num.re / &n, num.im / n))
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -&self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

/// Which square root of `ζ²` is meant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RootChoice {
    #[default]
    Plus,
    Minus,
}

impl RootChoice {
    pub fn sign(self) -> i8 {
        match self {
            RootChoice::Plus => 1,
            RootChoice::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            RootChoice::Plus => RootChoice::Minus,
            RootChoice::Minus => RootChoice::Plus,
        }
    }
}

/// The Kähler-type direction: rational, or rational plus formal perturbation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Omega {
    Rational(QVector),
    Formal(FormalVector),
}

impl Omega {
    pub fn rank(&self) -> usize {
        match self {
            Omega::Rational(q) => q.len(),
            Omega::Formal(f) => f.rank(),
        }
    }

    fn as_any(&self) -> AnyVector {
        match self {
            Omega::Rational(q) => AnyVector::Rat(q.clone()),
            Omega::Formal(f) => AnyVector::Formal(f.clone()),
        }
    }

    fn rational(&self) -> Result<&QVector> {
        match self {
            Omega::Rational(q) => Ok(q),
            Omega::Formal(_) => Err(Error::FormalOmegaUnsupported),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodData {
    pub host: Lattice,
    pub theta_re: QVector,
    pub theta_im: QVector,
    pub omega: Omega,
}

impl PeriodData {
    pub fn new(host: Lattice, theta_re: QVector, theta_im: QVector, omega: Omega) -> Self {
        PeriodData { host, theta_re, theta_im, omega }
    }

    /// Check every period-domain identity exactly; the error names the first one that fails.
    pub fn validate(&self) -> Result<()> {
        let n = self.host.rank();
        for len in [self.theta_re.len(), self.theta_im.len(), self.omega.rank()] {
            if len != n {
                return Err(Error::RankMismatch { expected: n, got: len });
            }
        }
        let h = &self.host;
        let rr = h.inner_q(&self.theta_re, &self.theta_re)?;
        let ii = h.inner_q(&self.theta_im, &self.theta_im)?;
        if rr != ii {
            return Err(Error::InvalidPeriod("θ_re² ≠ θ_im²".into()));
        }
        if !h.inner_q(&self.theta_re, &self.theta_im)?.is_zero() {
            return Err(Error::InvalidPeriod("θ_re·θ_im ≠ 0".into()));
        }
        let tt = rr + ii;
        if tt.is_zero() {
            return Err(Error::InvalidPeriod("θ·θ̄ = 0".into()));
        }
        if tt.is_negative() {
            return Err(Error::InvalidPeriod("θ·θ̄ < 0".into()));
        }
        if let Omega::Rational(w) = &self.omega {
            if !h.inner_q(w, w)?.is_positive() {
                return Err(Error::InvalidPeriod("ω² ≤ 0".into()));
            }
        }
        let w = self.omega.as_any();
        for (name, t) in [("re", &self.theta_re), ("im", &self.theta_im)] {
            if !h.pair(&w, &AnyVector::Rat(t.clone()))?.is_zero() {
                return Err(Error::InvalidPeriod(format!("ω·θ_{name} ≠ 0")));
            }
        }
        Ok(())
    }

    /// Whether `ω² = Re(ζθ)²`, i.e. `ω² = θ_re²`. Nothing depends on it.
    pub fn is_normalized(&self) -> Result<bool> {
        let w = self.omega.rational()?;
        Ok(self.host.inner_q(w, w)? == self.host.inner_q(&self.theta_re, &self.theta_re)?)
    }

    /// Exact `γ·ω`, zero as a polynomial when `ω` is formal.
    pub fn is_lagrangian(&self, gamma: &LVector) -> Result<bool> {
        Ok(self.host.pair(&AnyVector::Int(gamma.clone()), &self.omega.as_any())?.is_zero())
    }

    /// `x·θ` as a Gaussian rational.
    pub fn theta_pairing(&self, x: &LVector) -> Result<GaussianRational> {
        Ok(GaussianRational::new(
            self.host.inner_lq(x, &self.theta_re)?,
            self.host.inner_lq(x, &self.theta_im)?,
        ))
    }

    /// `c = γ·θ` after the common preconditions.
    fn rotation_constant(&self, gamma: &LVector) -> Result<GaussianRational> {
        self.validate()?;
        self.omega.rational()?;
        if !self.is_lagrangian(gamma)? {
            return Err(Error::NotLagrangian);
        }
        let c = self.theta_pairing(gamma)?;
        if c.is_zero() {
            return Err(Error::TypeOneOne);
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationPhase {
    pub c: GaussianRational,
    pub zeta_squared: GaussianRational,
    pub root_choice: RootChoice,
}

pub fn validate_period(p: &PeriodData) -> Result<()> {
    p.validate()
}

/// `c = γ·θ` and `ζ² = c̄/c`.
pub fn phase_square(p: &PeriodData, gamma: &LVector) -> Result<RotationPhase> {
    let c = p.rotation_constant(gamma)?;
    let zeta_squared = c.conj().checked_div(&c).expect("c is nonzero");
    Ok(RotationPhase { c, zeta_squared, root_choice: RootChoice::Plus })
}

/// Classes of type (1,1) after rotating by `ζ`: `x·ω = 0` and `Im(c̄·(x·θ)) = 0`.
pub fn rotated_picard(p: &PeriodData, gamma: &LVector) -> Result<Sublattice> {
    let c = p.rotation_constant(gamma)?;
    let w = p.omega.rational()?;
    // Im(c̄ z) = c_re z_im - c_im z_re
    let mixed: QVector = QVector(
        p.theta_im
            .0
            .iter()
            .zip(&p.theta_re.0)
            .map(|(ti, tr)| &c.re * ti - &c.im * tr)
            .collect(),
    );
    p.host.orthogonal_to_rational(&[w.clone(), mixed])
}

/// Sign of `x·Re(ζθ)` for `ζ = ±c̄/|c|`.
pub fn kahler_sign(p: &PeriodData, gamma: &LVector, x: &LVector, root: RootChoice) -> Result<i8> {
    let c = p.rotation_constant(gamma)?;
    let z = p.theta_pairing(x)?;
    let re = &c.re * &z.re + &c.im * &z.im;
    let s: i8 = if re.is_positive() {
        1
    } else if re.is_negative() {
        -1
    } else {
        0
    };
    Ok(s * root.sign())
}

/// Toy period data on `U³`: `θ = (e1+f1) + i(e2+f2)`, `ω = e3+f3`.
pub fn toy_period() -> PeriodData {
    let u = Lattice::hyperbolic_plane();
    let q = |c: &[i64]| LVector::from_i64(c).to_rational();
    PeriodData::new(
        Lattice::direct_sum(&[&u, &u, &u]),
        q(&[1, 1, 0, 0, 0, 0]),
        q(&[0, 0, 1, 1, 0, 0]),
        Omega::Rational(q(&[0, 0, 0, 0, 1, 1])),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn v(c: &[i64]) -> LVector {
        LVector::from_i64(c)
    }

    fn int(k: i64) -> BigInt {
        BigInt::from(k)
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_integers(re, im)
    }

    #[test]
    fn validate_examples() {
        let p = toy_period();
        assert_eq!(p.validate(), Ok(()));
        let mut bad = p.clone();
        bad.theta_im = QVector::zero(6);
        bad.theta_re = v(&[1, 0, 0, 0, 0, 0]).to_rational();
        assert_eq!(bad.validate(), Err(Error::InvalidPeriod("θ·θ̄ = 0".into())));
        let mut bad = p.clone();
        bad.omega = Omega::Rational(v(&[0, 0, 0, 0, 1, 0]).to_rational());
        assert_eq!(bad.validate(), Err(Error::InvalidPeriod("ω² ≤ 0".into())));
        let mut bad = p;
        bad.omega = Omega::Rational(v(&[1, 1, 0, 0, 1, 1]).to_rational());
        assert_eq!(bad.validate(), Err(Error::InvalidPeriod("ω·θ_re ≠ 0".into())));
    }

    #[test]
    fn phase_examples() {
        let p = toy_period();
        let ph = phase_square(&p, &v(&[1, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!((ph.c, ph.zeta_squared), (g(1, 0), g(1, 0)));
        let ph = phase_square(&p, &v(&[0, 0, 1, 0, 0, 0])).unwrap();
        assert_eq!((ph.c, ph.zeta_squared), (g(0, 1), g(-1, 0)));
        let ph = phase_square(&p, &v(&[1, 0, 1, 0, 0, 0])).unwrap();
        assert_eq!((ph.c.clone(), ph.zeta_squared.clone()), (g(1, 1), g(0, -1)));
        assert!((&ph.zeta_squared * &ph.zeta_squared.conj()) == GaussianRational::one());
    }

    #[test]
    fn phase_errors() {
        let p = toy_period();
        assert_eq!(phase_square(&p, &v(&[0, 0, 0, 0, 1, 0])), Err(Error::NotLagrangian));
        assert_eq!(phase_square(&p, &v(&[0, 0, 0, 0, 1, -1])), Err(Error::TypeOneOne));
        let mut formal = p.clone();
        let base = v(&[0, 0, 0, 0, 1, 1]).to_rational();
        formal.omega = Omega::Formal(
            FormalVector::new(base, BigRational::new(int(1), int(2)), vec![(1, v(&[0, 0, 0, 0, 1, -1]).to_rational())])
                .unwrap(),
        );
        assert_eq!(phase_square(&formal, &v(&[1, 0, 0, 0, 0, 0])), Err(Error::FormalOmegaUnsupported));
    }

    #[test]
    fn rotated_picard_examples() {
        let p = toy_period();
        let host = p.host.clone();
        let e1 = v(&[1, 0, 0, 0, 0, 0]);
        let pic = rotated_picard(&p, &e1).unwrap();
        let want = Sublattice::from_generators(
            host.clone(),
            &[e1.clone(), v(&[0, 1, 0, 0, 0, 0]), v(&[0, 0, 1, -1, 0, 0]), v(&[0, 0, 0, 0, 1, -1])],
        )
        .unwrap();
        assert_eq!(pic, want);
        assert!(pic.contains(&e1));
        let e2 = v(&[0, 0, 1, 0, 0, 0]);
        let pic = rotated_picard(&p, &e2).unwrap();
        let want = Sublattice::from_generators(
            host,
            &[e2.clone(), v(&[0, 0, 0, 1, 0, 0]), v(&[1, -1, 0, 0, 0, 0]), v(&[0, 0, 0, 0, 1, -1])],
        )
        .unwrap();
        assert_eq!(pic, want);
    }

    #[test]
    fn kahler_sign_examples() {
        let p = toy_period();
        let e1 = v(&[1, 0, 0, 0, 0, 0]);
        assert_eq!(kahler_sign(&p, &e1, &e1, RootChoice::Plus), Ok(1));
        assert_eq!(kahler_sign(&p, &e1, &v(&[0, 0, 1, -1, 0, 0]), RootChoice::Plus), Ok(0));
        for x in [e1.clone(), v(&[0, 3, 1, 0, 0, 0]), v(&[-2, 0, 0, 5, 1, 0])] {
            let a = kahler_sign(&p, &e1, &x, RootChoice::Plus).unwrap();
            let b = kahler_sign(&p, &e1, &x, RootChoice::Minus).unwrap();
            assert_eq!(a, -b);
        }
    }

    #[test]
    fn gaussian_arithmetic() {
        let z = g(3, -4);
        assert_eq!(z.norm_sq(), BigRational::from_integer(int(25)));
        assert_eq!(z.checked_div(&z), Some(GaussianRational::one()));
        assert_eq!(g(0, 0).checked_div(&z), Some(g(0, 0)));
        assert_eq!(z.checked_div(&g(0, 0)), None);
        assert_eq!(z.to_string(), "3 - 4i");
    }
}
