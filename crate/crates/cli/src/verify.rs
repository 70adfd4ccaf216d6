//! Independent re-checking of emitted result documents.

use k3lag::criteria::{lag_lattice, verify_certificate, SlagCertificate};
use k3lag::eichler::canonical_form_in;
use k3lag::enumerate::root_slice;
use k3lag::fibration::reflect;
use k3lag::sampling::SampleMode;
use k3lag::{Isometry, LVector, Lattice, RootChoice, Sublattice};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::commands::{classify_json, lattice_from, sublattice_from, Options};
use crate::wire::*;
use crate::CliError;

struct Checker {
    count: usize,
    failure: Option<String>,
}

impl Checker {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }
}

fn opts_for(doc: &Value) -> Options {
    let o = doc.get("options").cloned().unwrap_or(Value::Null);
    let num = |k: &str| o.get(k).and_then(Value::as_str).and_then(|s| s.parse::<u64>().ok());
    Options {
        lattice: o.get("lattice").and_then(Value::as_str).map(str::to_string),
        height: num("height").unwrap_or(6),
        seed: num("seed").unwrap_or(42),
        count: num("count").map(|c| c as usize),
        box_size: o.get("box").and_then(Value::as_str).and_then(|s| s.parse().ok()),
        root_choice: match o.get("root_choice").and_then(Value::as_str) {
            Some("-") => RootChoice::Minus,
            _ => RootChoice::Plus,
        },
        mode: match o.get("mode").and_then(Value::as_str) {
            Some("positive") => SampleMode::Positive,
            Some("isotropic") => SampleMode::Isotropic,
            _ => SampleMode::Both,
        },
    }
}

pub fn verify(doc: &Value) -> Result<crate::commands::Outcome, CliError> {
    let command = field(doc, "command")?.as_str().ok_or_else(|| malformed("command must be a string"))?;
    let input = doc.get("input").cloned().unwrap_or(Value::Null);
    let result = field(doc, "result")?;
    let opts = opts_for(doc);
    let mut c = Checker { count: 0, failure: None };
    match command {
        "info" | "classify" | "roots" => recompute(command, &input, &opts, result, &mut c)?,
        "decompose" => decompose(&input, &opts, result, &mut c)?,
        "realize" => realize(&input, &opts, result, &mut c)?,
        "syz" => syz(&input, &opts, result, &mut c)?,
        "eichler" => eichler(&input, &opts, result, &mut c)?,
        "sample" => sample(result, &mut c)?,
        other => return Err(malformed(format!("cannot verify command {other:?}"))),
    }
    Ok(crate::commands::Outcome {
        result: json!({
            "command": command,
            "verified": c.failure.is_none(),
            "checks": c.count,
            "failure": c.failure,
        }),
        unknown: false,
    })
}

fn recompute(command: &str, input: &Value, opts: &Options, result: &Value, c: &mut Checker) -> Result<(), CliError> {
    if command == "classify" && input.get("omega").is_none() {
        let l = lattice_from(input, opts, None)?;
        if let Some(w) = result.get("witness").filter(|w| !w.is_null()) {
            let w = parse_vector(w)?;
            c.check(l.norm(&w).map(|n| n.is_positive()).unwrap_or(false), || "witness is not positive".into());
        }
        if let Some(n) = result.get("n_part").filter(|n| !n.is_null()) {
            c.check(parse_lattice(n)?.is_negative_definite(), || "N is not negative definite".into());
        }
        c.check(classify_json(&l)? == *result, || "recomputed classification differs".into());
        return Ok(());
    }
    if command == "roots" {
        let l = lattice_from(input, opts, None)?;
        if let Some(rs) = result.get("roots") {
            for r in parse_vectors(rs)? {
                c.check(l.norm(&r).map(|n| n == BigInt::from(-2)).unwrap_or(false), || format!("{r} is not a root"));
            }
        }
    }
    let again = crate::commands::run(command, input, opts)?;
    c.check(again.result == *result, || "recomputed result differs".into());
    Ok(())
}

fn decompose(input: &Value, opts: &Options, result: &Value, c: &mut Checker) -> Result<(), CliError> {
    let gamma = parse_vector(field(input, "gamma")?)?;
    let context = match input.get("period") {
        Some(p) => {
            let p = parse_period(p)?;
            lag_lattice(&p.host, &p.omega).map_err(CliError::core)?
        }
        None => Sublattice::full(lattice_from(input, opts, None)?),
    };
    let cert = field(result, "certificate")?;
    let terms = field(cert, "terms")?
        .as_array()
        .ok_or_else(|| malformed("terms must be an array"))?
        .iter()
        .map(|t| Ok((parse_int(field(t, "coefficient")?)?, parse_vector(field(t, "class")?)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let cert = SlagCertificate { terms, context: context.clone() };
    let check = verify_certificate(&context, &gamma, &cert);
    c.check(check.ok, || check.failure.clone().unwrap_or_default());
    if let Some(rot) = result.get("rotation").filter(|r| r.get("zeta_squared").is_some()) {
        let z = field(rot, "zeta_squared")?;
        let (re, im) = (parse_rat(field(z, "re")?)?, parse_rat(field(z, "im")?)?);
        c.check(&re * &re + &im * &im == BigRational::from_integer(1.into()), || "|ζ²| ≠ 1".into());
    }
    Ok(())
}

fn realize(input: &Value, opts: &Options, result: &Value, c: &mut Checker) -> Result<(), CliError> {
    let host = lattice_from(input, opts, Some(Lattice::k3()))?;
    let e = sublattice_from(&host, input)?;
    let ok = field(result, "ok")?.as_bool().unwrap_or(false);
    if !ok {
        let expected = if e.is_full() {
            "NotProper"
        } else if !e.is_saturated() {
            "NotSaturated"
        } else {
            "NoPositiveInComplement"
        };
        c.check(field(result, "failing_condition")?.as_str() == Some(expected), || "failing condition differs".into());
        if expected == "NoPositiveInComplement" {
            let perp = host.orth_complement(&e).map_err(CliError::core)?;
            c.check(k3lag::enumerate::find_positive(&perp.gram_lattice()).is_none(), || "complement has a positive vector".into());
        }
        return Ok(());
    }
    let w = field(result, "witness")?;
    let x = parse_vector(field(w, "x")?)?;
    let ys = parse_vectors(field(w, "ys")?)?;
    let eps = parse_rat(field(field(w, "vector")?, "eps")?)?;
    let x2 = host.norm(&x).map_err(CliError::core)?;
    c.check(x2.is_positive(), || "x² ≤ 0".into());
    let mut all = vec![x.clone()];
    all.extend(ys.iter().cloned());
    let ker = host.orthogonal_to(&all).map_err(CliError::core)?;
    c.check(ker == e, || "joint kernel differs from E".into());
    for b in e.basis_vectors() {
        c.check(host.inner(&b, &x).map(|p| p.is_zero()).unwrap_or(false), || "x is not orthogonal to E".into());
    }
    let (mut s1, mut s2) = (BigInt::zero(), BigInt::zero());
    for y in &ys {
        s1 += host.inner(&x, y).map_err(CliError::core)?.abs();
        for z in &ys {
            s2 += host.inner(y, z).map_err(CliError::core)?.abs();
        }
    }
    let lower = BigRational::from_integer(x2) - BigRational::from_integer(BigInt::from(2) * s1) * &eps - BigRational::from_integer(s2) * &eps * &eps;
    c.check(eps.is_positive() && lower.is_positive(), || "perturbation bound fails".into());
    Ok(())
}

fn syz(input: &Value, opts: &Options, result: &Value, c: &mut Checker) -> Result<(), CliError> {
    if let Some(ell0) = input.get("ell") {
        let l = lattice_from(input, opts, None)?;
        let w = parse_vector(field(input, "omega")?)?;
        let mut ell = parse_vector(ell0)?;
        let trace: Vec<BigInt> = field(result, "pairing_trace")?
            .as_array()
            .ok_or_else(|| malformed("pairing_trace must be an array"))?
            .iter()
            .map(parse_int)
            .collect::<Result<_, _>>()?;
        let pair = |a: &LVector, b: &LVector| l.inner(a, b).map_err(CliError::core);
        c.check(trace.first() == Some(&pair(&ell, &w)?), || "trace does not start at ℓ·ω".into());
        for (k, d) in parse_vectors(field(result, "reflections")?)?.iter().enumerate() {
            c.check(l.norm(d).map(|n| n == BigInt::from(-2)).unwrap_or(false), || format!("{d} is not a root"));
            ell = reflect(&l, d, &ell).map_err(CliError::core)?;
            c.check(l.norm(&ell).map(|n| n.is_zero()).unwrap_or(false), || "intermediate class is not isotropic".into());
            let p = pair(&ell, &w)?;
            c.check(trace.get(k + 1) == Some(&p) && p < trace[k] && p.is_positive(), || "trace mismatch".into());
        }
        c.check(ell == parse_vector(field(result, "nef_class")?)?, || "replayed walk ends elsewhere".into());
        let p = pair(&ell, &w)?;
        for d in root_slice(&l, &w, &p).map_err(CliError::core)? {
            c.check(!pair(&d, &ell)?.is_negative(), || format!("root {d} pairs negatively"));
        }
        return Ok(());
    }
    let k3 = Lattice::k3();
    let w_in = parse_qvector(field(input, "w")?)?;
    let w = parse_vector(field(result, "w")?)?;
    let ell = parse_vector(field(result, "ell")?)?;
    c.check(w_in.primitive_integral() == w, || "w is not the primitive class of the input".into());
    c.check(!ell.is_zero() && ell.is_primitive(), || "ℓ is not primitive".into());
    c.check(k3.norm(&ell).map(|n| n.is_zero()).unwrap_or(false), || "ℓ² ≠ 0".into());
    c.check(k3.inner(&ell, &w).map(|n| n.is_zero()).unwrap_or(false), || "ℓ·w ≠ 0".into());
    Ok(())
}

fn eichler(input: &Value, opts: &Options, result: &Value, c: &mut Checker) -> Result<(), CliError> {
    let host = lattice_from(input, opts, Some(Lattice::k3()))?;
    let w = parse_vector(field(input, "w")?)?;
    let g = Isometry { matrix: parse_matrix(field(result, "g")?)? };
    let target = parse_vector(field(result, "target")?)?;
    let w2 = host.norm(&w).map_err(CliError::core)?;
    let n = host.rank();
    let mut want = LVector::unit(n, 0);
    want.0[1] = &w2 / BigInt::from(2);
    c.check(g.matrix.len() == n && g.matrix.iter().all(|r| r.len() == n), || "g has the wrong shape".into());
    if c.failure.is_some() {
        return Ok(());
    }
    c.check(g.preserves(&host), || "gᵀGg ≠ G".into());
    c.check(target == want, || "target is not e1 + (w²/2) f1".into());
    c.check(g.apply(&w) == want, || "g(w) ≠ target".into());
    // the canonical form is deterministic
    let again = canonical_form_in(&host, &w).map_err(CliError::core)?;
    c.check(again.g == g, || "recomputed isometry differs".into());
    if let Some(wt) = result.get("witnesses").filter(|x| !x.is_null()) {
        let v = parse_vector(field(wt, "v")?)?;
        let ell = parse_vector(field(wt, "ell")?)?;
        c.check(host.norm(&v).map(|x| x == BigInt::from(2)).unwrap_or(false), || "v² ≠ 2".into());
        c.check(host.inner(&v, &w).map(|x| x.is_zero()).unwrap_or(false), || "v·w ≠ 0".into());
        c.check(host.norm(&ell).map(|x| x.is_zero()).unwrap_or(false), || "ℓ² ≠ 0".into());
        c.check(host.inner(&ell, &w).map(|x| x.is_zero()).unwrap_or(false), || "ℓ·w ≠ 0".into());
    }
    Ok(())
}

fn sample(result: &Value, c: &mut Checker) -> Result<(), CliError> {
    let k3 = Lattice::k3();
    let trials = field(result, "trials")?.as_array().ok_or_else(|| malformed("trials must be an array"))?;
    let (mut pos, mut iso) = (0usize, 0usize);
    for t in trials {
        let w = parse_vector(field(t, "w")?)?;
        c.check(w.is_primitive() && k3.norm(&w).map(|n| n.is_positive()).unwrap_or(false), || format!("w = {w} is not a primitive positive class"));
        if let Some(p) = t.get("positive").filter(|p| !p.is_null() && p.get("error").is_none()) {
            let v = parse_vector(field(p, "v")?)?;
            let x = parse_vector(field(p, "witness")?)?;
            c.check(k3.norm(&v).map(|n| n == BigInt::from(2)).unwrap_or(false), || "v² ≠ 2".into());
            c.check(k3.inner(&v, &w).map(|n| n.is_zero()).unwrap_or(false), || "v·w ≠ 0".into());
            c.check(k3.norm(&x).map(|n| n.is_positive()).unwrap_or(false), || "witness² ≤ 0".into());
            c.check(k3.inner(&x, &w).map(|n| n.is_zero()).unwrap_or(false), || "witness·w ≠ 0".into());
            pos += 1;
        }
        if let Some(p) = t.get("isotropic").filter(|p| !p.is_null() && p.get("error").is_none()) {
            let ell = parse_vector(field(p, "ell")?)?;
            c.check(!ell.is_zero() && ell.is_primitive(), || "ℓ is not primitive".into());
            c.check(k3.norm(&ell).map(|n| n.is_zero()).unwrap_or(false), || "ℓ² ≠ 0".into());
            c.check(k3.inner(&ell, &w).map(|n| n.is_zero()).unwrap_or(false), || "ℓ·w ≠ 0".into());
            iso += 1;
        }
    }
    c.check(field(result, "positive_successes")?.as_u64() == Some(pos as u64), || "positive success count differs".into());
    c.check(field(result, "isotropic_successes")?.as_u64() == Some(iso as u64), || "isotropic success count differs".into());
    Ok(())
}
