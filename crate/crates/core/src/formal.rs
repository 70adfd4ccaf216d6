//! Vectors with formal real markers.
//!
//! A [`FormalVector`] stands for `x + ε·Σ tᵢ·yᵢ` where the markers `tᵢ` are
//! reals with `{1, t₁, …, t_m}` linearly independent over Q. Pairings involving
//! such vectors are polynomials in the markers with rational coefficients; a
//! pairing vanishes iff every coefficient does.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{LVector, Lattice, QVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalVector {
    pub base: QVector,
    pub eps: BigRational,
    pub terms: Vec<(usize, QVector)>,
}

impl FormalVector {
    pub fn new(base: QVector, eps: BigRational, terms: Vec<(usize, QVector)>) -> Result<Self> {
        if eps <= BigRational::zero() {
            return Err(Error::NotPositive("epsilon must be positive".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for (i, y) in &terms {
            if !seen.insert(*i) {
                return Err(Error::ImpossibleState(format!("marker t{i} repeated")));
            }
            if y.len() != base.len() {
                return Err(Error::RankMismatch { expected: base.len(), got: y.len() });
            }
        }
        Ok(FormalVector { base, eps, terms })
    }

    pub fn rank(&self) -> usize {
        self.base.len()
    }

    /// All vectors that must be orthogonal to a rational class pairing to zero with `self`.
    pub fn components(&self) -> Vec<QVector> {
        std::iter::once(self.base.clone())
            .chain(self.terms.iter().map(|(_, y)| y.clone()))
            .collect()
    }
}

/// Polynomial in the markers: monomial (sorted marker indices) to coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MarkerPoly {
    pub terms: BTreeMap<Vec<usize>, BigRational>,
}

impl MarkerPoly {
    pub fn constant(c: BigRational) -> Self {
        let mut p = MarkerPoly::default();
        p.add_term(Vec::new(), c);
        p
    }

    fn add_term(&mut self, mut monomial: Vec<usize>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        monomial.sort_unstable();
        let entry = self.terms.entry(monomial).or_insert_with(BigRational::zero);
        *entry += c;
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when no marker appears.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Evaluate at given marker values (an index not in `values` counts as zero).
    pub fn evaluate(&self, values: &BTreeMap<usize, BigRational>) -> BigRational {
        self.terms
            .iter()
            .map(|(mono, c)| {
                mono.iter().fold(c.clone(), |acc, i| {
                    acc * values.get(i).cloned().unwrap_or_else(BigRational::zero)
                })
            })
            .sum()
    }
}

impl fmt::Display for MarkerPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (mono, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for i in mono {
                write!(f, "*t{i}")?;
            }
        }
        Ok(())
    }
}

/// Any of the three vector kinds a pairing accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyVector {
    Int(LVector),
    Rat(QVector),
    Formal(FormalVector),
}

impl AnyVector {
    fn affine_parts(&self) -> (QVector, Vec<(usize, QVector)>) {
        match self {
            AnyVector::Int(v) => (v.to_rational(), Vec::new()),
            AnyVector::Rat(q) => (q.clone(), Vec::new()),
            AnyVector::Formal(f) => (
                f.base.clone(),
                f.terms.iter().map(|(i, y)| (*i, y.scale(&f.eps))).collect(),
            ),
        }
    }
}

impl Lattice {
    /// Exact pairing of two vectors of any kind.
    pub fn pair(&self, x: &AnyVector, y: &AnyVector) -> Result<MarkerPoly> {
        let (xb, xt) = x.affine_parts();
        let (yb, yt) = y.affine_parts();
        let mut p = MarkerPoly::constant(self.inner_q(&xb, &yb)?);
        for (j, z) in &yt {
            p.add_term(vec![*j], self.inner_q(&xb, z)?);
        }
        for (i, z) in &xt {
            p.add_term(vec![*i], self.inner_q(z, &yb)?);
            for (j, w) in &yt {
                p.add_term(vec![*i, *j], self.inner_q(z, w)?);
            }
        }
        Ok(p)
    }
}
