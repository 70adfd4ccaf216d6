//! Seeded random polarizations of `Λ_K3` and per-class re-verification of the
//! positive and isotropic witness constructions.
//!
//! A box that is uniform over all 22 coordinates almost never yields `w² > 0`
//! (the two `E8` blocks contribute a large negative mean), so the `U³` and
//! `E8²` coordinates are drawn from separate boxes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::criteria::{classify, lag_lattice, Case};
use crate::eichler::orth_witnesses;
use crate::exec::{map_ordered, Strategy};
use crate::hodge::Omega;
use crate::lattice::{LVector, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    Positive,
    Isotropic,
    Both,
}

impl SampleMode {
    fn positive(self) -> bool {
        matches!(self, SampleMode::Positive | SampleMode::Both)
    }

    fn isotropic(self) -> bool {
        matches!(self, SampleMode::Isotropic | SampleMode::Both)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SampleBox {
    /// Coordinates in the `U³` part lie in `[-hyperbolic, hyperbolic]`.
    pub hyperbolic: i64,
    /// Coordinates in the `E8²` part lie in `[-definite, definite]`.
    pub definite: i64,
    pub max_attempts: u32,
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox { hyperbolic: 10, definite: 2, max_attempts: 10_000 }
    }
}

/// The random stream of one trial: independent of every other trial index.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Rejection sampling of a primitive `w ∈ Λ_K3` whose norm passes `accept`.
pub fn draw_primitive<R: Rng>(rng: &mut R, b: &SampleBox, accept: impl Fn(&BigInt) -> bool) -> Option<LVector> {
    let k3 = Lattice::k3();
    for _ in 0..b.max_attempts {
        let coords: Vec<BigInt> = (0..22)
            .map(|i| {
                let r = if i < 6 { b.hyperbolic } else { b.definite };
                BigInt::from(rng.gen_range(-r..=r))
            })
            .collect();
        let w = LVector(coords);
        if w.is_zero() || !w.is_primitive() {
            continue;
        }
        if accept(&k3.norm(&w).expect("rank 22")) {
            return Some(w);
        }
    }
    None
}

/// A random primitive `w` with `w² > 0` for trial `trial`.
pub fn draw_polarization(seed: u64, trial: u64, b: &SampleBox) -> Option<LVector> {
    draw_primitive(&mut trial_rng(seed, trial), b, |n| n.is_positive())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveCheck {
    /// `g⁻¹(e2+f2)` from the canonical form, norm 2.
    pub v: LVector,
    /// The classifier's witness, in `Λ_K3` coordinates.
    pub witness: LVector,
    pub witness_norm: BigInt,
    pub signature: (usize, usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicCheck {
    pub ell: LVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub trial: u64,
    pub w: LVector,
    pub w2: BigInt,
    pub positive: Option<Result<PositiveCheck, String>>,
    pub isotropic: Option<Result<IsotropicCheck, String>>,
}

fn check_positive(k3: &Lattice, w: &LVector) -> Result<PositiveCheck, String> {
    let err = |e: crate::Error| e.to_string();
    let o = orth_witnesses(w).map_err(err)?;
    if !k3.inner(&o.v, w).map_err(err)?.is_zero() || k3.norm(&o.v).map_err(err)? != BigInt::from(2) {
        return Err("canonical-form witness fails v·w = 0, v² = 2".into());
    }
    let lag = lag_lattice(k3, &Omega::Rational(w.to_rational())).map_err(err)?;
    let gl = lag.gram_lattice();
    let signature = gl.signature();
    if signature != (2, 19, 0) {
        return Err(format!("Lagrangian lattice has signature {signature:?}"));
    }
    let report = classify(&gl).map_err(err)?;
    if report.case != Case::PositiveWitness {
        return Err("classifier did not find a positive vector".into());
    }
    let witness = lag.to_host(&report.witness.expect("positive case").0);
    let witness_norm = k3.norm(&witness).map_err(err)?;
    if !witness_norm.is_positive() || !k3.inner(&witness, w).map_err(err)?.is_zero() {
        return Err(format!("classifier witness {witness} fails re-verification"));
    }
    Ok(PositiveCheck { v: o.v, witness, witness_norm, signature })
}

fn check_isotropic(k3: &Lattice, w: &LVector) -> Result<IsotropicCheck, String> {
    let err = |e: crate::Error| e.to_string();
    let ell = orth_witnesses(w).map_err(err)?.ell;
    if ell.is_zero() || !ell.is_primitive() {
        return Err(format!("ℓ = {ell} is not primitive"));
    }
    if !k3.norm(&ell).map_err(err)?.is_zero() || !k3.inner(&ell, w).map_err(err)?.is_zero() {
        return Err(format!("ℓ = {ell} fails ℓ² = 0, ℓ·w = 0"));
    }
    Ok(IsotropicCheck { ell })
}

/// Run and independently re-check the requested constructions for one class.
pub fn run_trial(trial: u64, w: &LVector, mode: SampleMode) -> TrialOutcome {
    let k3 = Lattice::k3();
    let w2 = k3.norm(w).unwrap_or_else(|_| BigInt::zero());
    TrialOutcome {
        trial,
        w: w.clone(),
        w2,
        positive: mode.positive().then(|| check_positive(&k3, w)),
        isotropic: mode.isotropic().then(|| check_isotropic(&k3, w)),
    }
}

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub count: usize,
    pub seed: u64,
    pub mode: SampleMode,
    pub sample_box: SampleBox,
    pub strategy: Strategy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleFailure {
    pub trial: u64,
    pub w: Option<LVector>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleReport {
    pub count: usize,
    pub positive_successes: usize,
    pub isotropic_successes: usize,
    /// Classifier witness norm to number of trials.
    pub witness_norms: BTreeMap<BigInt, usize>,
    pub failures: Vec<SampleFailure>,
    pub trials: Vec<TrialOutcome>,
}

pub fn sample(cfg: &SampleConfig) -> SampleReport {
    let idx: Vec<u64> = (0..cfg.count as u64).collect();
    let results = map_ordered(cfg.strategy, idx, |t| match draw_polarization(cfg.seed, t, &cfg.sample_box) {
        Some(w) => Ok(run_trial(t, &w, cfg.mode)),
        None => Err(t),
    });
    summarize(cfg.count, results)
}

/// Fold trial outcomes (in trial order) into a report.
pub fn summarize(count: usize, results: Vec<Result<TrialOutcome, u64>>) -> SampleReport {
    let mut report = SampleReport {
        count,
        positive_successes: 0,
        isotropic_successes: 0,
        witness_norms: BTreeMap::new(),
        failures: Vec::new(),
        trials: Vec::new(),
    };
    for r in results {
        let t = match r {
            Ok(t) => t,
            Err(trial) => {
                report.failures.push(SampleFailure { trial, w: None, reason: "no class drawn within the attempt limit".into() });
                continue;
            }
        };
        match &t.positive {
            Some(Ok(p)) => {
                report.positive_successes += 1;
                *report.witness_norms.entry(p.witness_norm.clone()).or_default() += 1;
            }
            Some(Err(e)) => report.failures.push(SampleFailure { trial: t.trial, w: Some(t.w.clone()), reason: e.clone() }),
            None => {}
        }
        match &t.isotropic {
            Some(Ok(_)) => report.isotropic_successes += 1,
            Some(Err(e)) => report.failures.push(SampleFailure { trial: t.trial, w: Some(t.w.clone()), reason: e.clone() }),
            None => {}
        }
        report.trials.push(t);
    }
    report
}

/// `e1 + f1`, the standard polarization of degree 2.
pub fn standard_polarization() -> LVector {
    let mut w = LVector::zero(22);
    w.0[0] = BigInt::one();
    w.0[1] = BigInt::one();
    w
}
