//! JSON encoding: integers as decimal strings, rationals as `"p/q"`,
//! Gaussian rationals as `{re, im}`. Decoders also accept plain JSON integers.

use std::str::FromStr;

use k3lag::hodge::Omega;
use k3lag::{FormalVector, GaussianRational, LVector, Lattice, PeriodData, QVector, Sublattice};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::CliError;

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn rat(x: &BigRational) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

pub fn gauss(z: &GaussianRational) -> Value {
    json!({ "re": rat(&z.re), "im": rat(&z.im) })
}

pub fn vector(v: &LVector) -> Value {
    Value::Array(v.0.iter().map(int).collect())
}

pub fn qvector(v: &QVector) -> Value {
    Value::Array(v.0.iter().map(rat).collect())
}

pub fn vectors(vs: &[LVector]) -> Value {
    Value::Array(vs.iter().map(vector).collect())
}

pub fn matrix(m: &[Vec<BigInt>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(int).collect())).collect())
}

pub fn formal(f: &FormalVector) -> Value {
    json!({
        "base": qvector(&f.base),
        "eps": rat(&f.eps),
        "terms": f.terms.iter().map(|(i, y)| json!({ "marker": i, "vector": qvector(y) })).collect::<Vec<_>>(),
    })
}

pub fn malformed(msg: impl Into<String>) -> CliError {
    CliError::malformed("malformed_input", msg)
}

pub fn parse_int(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| malformed(format!("not an integer: {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(BigInt::from_str(&n.to_string()).expect("integral number")),
        other => Err(malformed(format!("not an integer: {other}"))),
    }
}

pub fn parse_rat(v: &Value) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((p, q)) => {
                    let p = BigInt::from_str(p.trim()).map_err(|_| malformed(format!("not a rational: {s:?}")))?;
                    let q = BigInt::from_str(q.trim()).map_err(|_| malformed(format!("not a rational: {s:?}")))?;
                    if q.is_zero() {
                        return Err(malformed(format!("zero denominator: {s:?}")));
                    }
                    Ok(BigRational::new(p, q))
                }
                None => Ok(BigRational::from_integer(parse_int(v)?)),
            }
        }
        _ => Ok(BigRational::from_integer(parse_int(v)?)),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| malformed(format!("{what} must be an array")))
}

pub fn parse_vector(v: &Value) -> Result<LVector, CliError> {
    Ok(LVector(array(v, "vector")?.iter().map(parse_int).collect::<Result<_, _>>()?))
}

pub fn parse_qvector(v: &Value) -> Result<QVector, CliError> {
    Ok(QVector(array(v, "vector")?.iter().map(parse_rat).collect::<Result<_, _>>()?))
}

pub fn parse_vectors(v: &Value) -> Result<Vec<LVector>, CliError> {
    array(v, "vector list")?.iter().map(parse_vector).collect()
}

pub fn parse_matrix(v: &Value) -> Result<Vec<Vec<BigInt>>, CliError> {
    array(v, "matrix")?
        .iter()
        .map(|r| array(r, "matrix row")?.iter().map(parse_int).collect())
        .collect()
}

fn named(token: &str) -> Result<Lattice, CliError> {
    let t = token.trim();
    let base = match t {
        "U" => return Ok(Lattice::hyperbolic_plane()),
        "E8" => return Ok(Lattice::e8()),
        "K3" => return Ok(Lattice::k3()),
        _ => t,
    };
    if let Some(inner) = base.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
        let d = inner.trim().parse::<i64>().map_err(|_| malformed(format!("bad diagonal entry {t:?}")))?;
        return Ok(Lattice::diagonal(&[d]));
    }
    // U3, E82, ... as repeated blocks
    for (name, l) in [("U", Lattice::hyperbolic_plane()), ("E8", Lattice::e8())] {
        if let Some(k) = base.strip_prefix(name).and_then(|s| s.parse::<usize>().ok()) {
            let parts: Vec<&Lattice> = std::iter::repeat(&l).take(k).collect();
            return Ok(Lattice::direct_sum(&parts));
        }
    }
    Err(malformed(format!("unknown lattice name {t:?}")))
}

/// A lattice given by name (`"K3"`, `"U+E8"`, `"U3+<-2>"`), as `{"gram": …}`, or as a bare Gram matrix.
pub fn parse_lattice(v: &Value) -> Result<Lattice, CliError> {
    match v {
        Value::String(s) => {
            let parts = s.split('+').map(named).collect::<Result<Vec<_>, _>>()?;
            Ok(Lattice::direct_sum(&parts.iter().collect::<Vec<_>>()))
        }
        Value::Object(m) => parse_lattice(m.get("gram").ok_or_else(|| malformed("lattice object needs \"gram\""))?),
        Value::Array(_) => Lattice::from_gram(parse_matrix(v)?).map_err(CliError::core),
        other => Err(malformed(format!("not a lattice: {other}"))),
    }
}

pub fn lattice_json(l: &Lattice) -> Value {
    json!({ "gram": matrix(l.gram()) })
}

pub fn sublattice_json(s: &Sublattice) -> Value {
    matrix(s.basis())
}

pub fn parse_formal(v: &Value) -> Result<FormalVector, CliError> {
    let base = parse_qvector(field(v, "base")?)?;
    let eps = parse_rat(field(v, "eps")?)?;
    let terms = array(field(v, "terms")?, "terms")?
        .iter()
        .map(|t| {
            let i = field(t, "marker")?
                .as_u64()
                .ok_or_else(|| malformed("marker must be a non-negative integer"))?;
            Ok((i as usize, parse_qvector(field(t, "vector")?)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    FormalVector::new(base, eps, terms).map_err(CliError::core)
}

pub fn parse_omega(v: &Value) -> Result<Omega, CliError> {
    if v.is_object() {
        Ok(Omega::Formal(parse_formal(v)?))
    } else {
        Ok(Omega::Rational(parse_qvector(v)?))
    }
}

pub fn parse_period(v: &Value) -> Result<PeriodData, CliError> {
    let host = match v.get("host") {
        Some(h) => parse_lattice(h)?,
        None => Lattice::k3(),
    };
    Ok(PeriodData::new(
        host,
        parse_qvector(field(v, "theta_re")?)?,
        parse_qvector(field(v, "theta_im")?)?,
        parse_omega(field(v, "omega")?)?,
    ))
}

pub fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| malformed(format!("missing field {key:?}")))
}
