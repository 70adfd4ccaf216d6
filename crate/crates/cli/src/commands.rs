use std::path::Path;

use k3lag::criteria::{self, certificate_in, classify, lag_lattice, realizable, slag_certificate, verify_certificate, Case};
use k3lag::eichler::{canonical_form_in, orth_witnesses_in};
use k3lag::enumerate::{find_isotropic, root_slice, roots_generate, short_vectors, IsotropicSearch};
use k3lag::fibration::{make_nef, syz_witness};
use k3lag::hodge::{kahler_sign, phase_square, rotated_picard, Omega};
use k3lag::sampling::{run_trial, sample, summarize, SampleBox, SampleConfig, SampleMode, SampleReport};
use k3lag::{Error, Lattice, RootChoice, Strategy, Sublattice};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::wire::*;
use crate::CliError;

#[derive(Clone, Debug)]
pub struct Options {
    pub lattice: Option<String>,
    pub height: u64,
    pub seed: u64,
    pub count: Option<usize>,
    pub box_size: Option<i64>,
    pub root_choice: RootChoice,
    pub mode: SampleMode,
}

impl Options {
    pub fn to_json(&self) -> Value {
        json!({
            "lattice": self.lattice,
            "height": self.height.to_string(),
            "seed": self.seed.to_string(),
            "count": self.count.map(|c| c.to_string()),
            "box": self.box_size.map(|b| b.to_string()),
            "root_choice": root_name(self.root_choice),
            "mode": mode_name(self.mode),
        })
    }
}

pub fn root_name(r: RootChoice) -> &'static str {
    match r {
        RootChoice::Plus => "+",
        RootChoice::Minus => "-",
    }
}

pub fn mode_name(m: SampleMode) -> &'static str {
    match m {
        SampleMode::Positive => "positive",
        SampleMode::Isotropic => "isotropic",
        SampleMode::Both => "both",
    }
}

pub struct Outcome {
    pub result: Value,
    /// A search ran out of its configured bounds.
    pub unknown: bool,
}

impl Outcome {
    fn done(result: Value) -> Self {
        Outcome { result, unknown: false }
    }
}

pub fn run(command: &str, payload: &Value, opts: &Options) -> Result<Outcome, CliError> {
    if !payload.is_null() && !payload.is_object() {
        return Err(malformed("input document must be a JSON object"));
    }
    match command {
        "info" => info(payload, opts),
        "classify" => classify_cmd(payload, opts),
        "decompose" => decompose(payload, opts),
        "realize" => realize(payload, opts),
        "syz" => syz(payload, opts),
        "eichler" => eichler(payload, opts),
        "roots" => roots(payload, opts),
        "sample" => sample_cmd(payload, opts),
        "verify" => crate::verify::verify(payload),
        other => Err(malformed(format!("unknown command {other:?}"))),
    }
}

/// The lattice from the payload (`lattice` or `gram`), else `--lattice`, else `default`.
pub fn lattice_from(payload: &Value, opts: &Options, default: Option<Lattice>) -> Result<Lattice, CliError> {
    if let Some(l) = payload.get("lattice") {
        return parse_lattice(l);
    }
    if let Some(g) = payload.get("gram") {
        return parse_lattice(g);
    }
    if let Some(name) = &opts.lattice {
        if Path::new(name).is_file() {
            let text = std::fs::read_to_string(name).map_err(|e| malformed(format!("cannot read {name}: {e}")))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| malformed(format!("{name}: {e}")))?;
            return parse_lattice(&v);
        }
        return parse_lattice(&Value::String(name.clone()));
    }
    default.ok_or_else(|| malformed("no lattice given (payload \"lattice\" or --lattice)"))
}

fn info(payload: &Value, opts: &Options) -> Result<Outcome, CliError> {
    let l = lattice_from(payload, opts, Some(Lattice::k3()))?;
    let (p, n, z) = l.signature();
    let search = find_isotropic(&l, opts.height);
    let unknown = matches!(search, IsotropicSearch::Unknown { .. });
    let isotropic = match search {
        IsotropicSearch::Found(v) => json!({ "status": "found", "vector": vector(&v) }),
        IsotropicSearch::NoneExists => json!({ "status": "none" }),
        IsotropicSearch::Unknown { height } => json!({ "status": "unknown", "height": height.to_string() }),
    };
    Ok(Outcome {
        result: json!({
            "rank": l.rank(),
            "gram": matrix(l.gram()),
            "even": l.is_even(),
            "determinant": int(&l.determinant()),
            "unimodular": l.is_unimodular(),
            "signature": [p, n, z],
            "isotropic": isotropic,
        }),
        unknown,
    })
}

pub fn classify_json(l: &Lattice) -> Result<Value, CliError> {
    let r = classify(l).map_err(CliError::core)?;
    let n = r.split.as_ref().map(|s| lattice_json(&s.n));
    let complement = r.split.as_ref().map(|s| sublattice_json(&s.complement));
    Ok(json!({
        "case": match r.case { Case::PositiveWitness => "PositiveWitness", Case::Split => "Split" },
        "witness": r.witness.as_ref().map(vector),
        "rad": sublattice_json(&r.rad),
        "complement": complement,
        "n_part": n,
        "roots_generate": r.roots_generate,
        "root_count": r.roots.as_ref().map(|x| x.count),
        "equal": r.equal,
    }))
}

fn classify_cmd(payload: &Value, opts: &Options) -> Result<Outcome, CliError> {
    if let Some(w) = payload.get("omega") {
        let host = lattice_from(payload, opts, Some(Lattice::k3()))?;
        let omega = parse_omega(w)?;
        let lag = lag_lattice(&host, &omega).map_err(CliError::core)?;
        let gl = lag.gram_lattice();
        let mut out = classify_json(&gl)?;
        let sig = gl.signature();
        out["lag_basis"] = sublattice_json(&lag);
        out["lag_signature"] = json!([sig.0, sig.1, sig.2]);
        if let Some(wv) = out.get("witness").filter(|w| !w.is_null()) {
            out["witness_host"] = vector(&lag.to_host(&parse_vector(wv)?.0));
        }
        return Ok(Outcome::done(out));
    }
    let l = lattice_from(payload, opts, None)?;
    Ok(Outcome::done(classify_json(&l)?))
}

fn certificate_json(cert: &criteria::SlagCertificate) -> Value {
    let h = cert.context.host();
    json!({
        "terms": cert.terms.iter().map(|(c, v)| json!({
            "coefficient": int(c),
            "class": vector(v),
            "square": int(&h.norm(v).expect("rank checked")),
        })).collect::<Vec<_>>(),
        "context": sublattice_json(&cert.context),
    })
}

fn decompose(payload: &Value, opts: &Options) -> Result<Outcome, CliError> {
    let gamma = parse_vector(field(payload, "gamma")?)?;
    if let Some(pv) = payload.get("period") {
        let p = parse_period(pv)?;
        if gamma.len() != p.host.rank() {
            return Err(CliError::core(Error::RankMismatch { expected: p.host.rank(), got: gamma.len() }));
        }
        let cert = slag_certificate(&p, &gamma).map_err(CliError::core)?;
        let check = verify_certificate(&cert.context, &gamma, &cert);
        let rotation = match (&p.omega, phase_square(&p, &gamma)) {
            (Omega::Formal(_), _) => Value::Null,
            (_, Err(Error::TypeOneOne)) => json!({ "type_one_one": true }),
            (_, Err(e)) => return Err(CliError::core(e)),
            (_, Ok(ph)) => {
                let pic = rotated_picard(&p, &gamma).map_err(CliError::core)?;
                let probes = match payload.get("probes") {
                    Some(v) => parse_vectors(v)?,
                    None => Vec::new(),
                };
                let signs = probes
                    .iter()
                    .map(|x| kahler_sign(&p, &gamma, x, opts.root_choice).map(|s| json!(s)))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(CliError::core)?;
                json!({
                    "c": gauss(&ph.c),
                    "zeta_squared": gauss(&ph.zeta_squared),
                    "root_choice": root_name(opts.root_choice),
                    "rotated_picard": sublattice_json(&pic),
                    "kahler_signs": signs,
                })
            }
        };
        return Ok(Outcome::done(json!({
            "certificate": certificate_json(&cert),
            "verified": check.ok,
            "failure": check.failure,
            "rotation": rotation,
        })));
    }
    let l = lattice_from(payload, opts, None)?;
    let full = Sublattice::full(l.clone());
    if gamma.len() != l.rank() {
        return Err(CliError::core(Error::RankMismatch { expected: l.rank(), got: gamma.len() }));
    }
    let cert = certificate_in(&full, &gamma).map_err(CliError::core)?;
    let check = verify_certificate(&full, &gamma, &cert);
    Ok(Outcome::done(json!({
        "certificate": certificate_json(&cert),
        "verified": check.ok,
        "failure": check.failure,
        "rotation": null,
    })))
}

pub fn sublattice_from(host: &Lattice, payload: &Value) -> Result<Sublattice, CliError> {
    let gens = parse_vectors(field(payload, "generators")?)?;
    Sublattice::from_generators(host.clone(), &gens).map_err(CliError::core)
}

fn realize(payload: &Value, opts: &Options) -> Result<Outcome, CliError> {
    let host = lattice_from(payload, opts, Some(Lattice::k3()))?;
    let e = sublattice_from(&host, payload)?;
    let r = realizable(&host, &e).map_err(CliError::core)?;
    let witness = r.witness.as_ref().map(|w| {
        json!({
            "x": vector(&w.x),
            "ys": vectors(&w.ys),
            "eps_bound": rat(&w.eps_bound),
            "vector": formal(&w.vector),
            "worst_case_norm": rat(&w.worst_case_norm),
            "joint_kernel": sublattice_json(&w.joint_kernel),
        })
    });
    Ok(Outcome::done(json!({
        "ok": r.ok,
        "failing_condition": r.failing_condition.map(|f| f.name()),
        "e_basis": sublattice_json(&e),
        "witness": witness,
    })))
}

fn syz(payload: &Value, opts: &Options) -> Result<Outcome, CliError> {
    if let Some(ell) = payload.get("ell") {
        let l = lattice_from(payload, opts, None)?;
        let w = parse_vector(field(payload, "omega")?)?;
        let ell = parse_vector(ell)?;
        let r = make_nef(&l, &w, &ell).map_err(CliError::core)?;
        return Ok(Outcome::done(json!({
            "nef_class": vector(&r.nef_class),
            "reflections": vectors(&r.reflections),
            "pairing_trace": r.pairing_trace.iter().map(int).collect::<Vec<_>>(),
            "checks": {
                "ell_sq": int(&l.norm(&r.nef_class).map_err(CliError::core)?),
                "pairing": int(r.pairing_trace.last().expect("trace is nonempty")),
            },
        })));
    }
    let w = parse_qvector(field(payload, "w")?)?;
    let s = syz_witness(&w).map_err(CliError::core)?;
    let k3 = Lattice::k3();
    Ok(Outcome::done(json!({
        "w": vector(&s.w),
        "ell": vector(&s.ell),
        "checks": {
            "ell_sq": int(&k3.norm(&s.ell).expect("rank 22")),
            "pairing": int(&k3.inner(&s.ell, &s.w).expect("rank 22")),
            "primitive": s.ell.is_primitive(),
        },
        "canonical": { "d": int(&s.canonical.d), "steps": s.canonical.steps.len() },
    })))
}

fn eichler(payload: &Value, opts: &Options) -> Result<Outcome, CliError> {
    let host = lattice_from(payload, opts, Some(Lattice::k3()))?;
    let w = parse_vector(field(payload, "w")?)?;
    let r = canonical_form_in(&host, &w).map_err(CliError::core)?;
    let witnesses = if host.norm(&w).map_err(CliError::core)?.is_positive() {
        let o = orth_witnesses_in(&host, &w).map_err(CliError::core)?;
        json!({ "v": vector(&o.v), "ell": vector(&o.ell) })
    } else {
        Value::Null
    };
    Ok(Outcome::done(json!({
        "d": int(&r.d),
        "target": vector(&r.target),
        "g": matrix(&r.g.matrix),
        "steps": r.steps.iter().map(|t| json!({ "u": vector(&t.u), "a": vector(&t.a) })).collect::<Vec<_>>(),
        "checks": {
            "preserves": r.g.preserves(&host),
            "maps_to_target": r.g.apply(&w) == r.target,
        },
        "witnesses": witnesses,
    })))
}

fn roots(payload: &Value, opts: &Options) -> Result<Outcome, CliError> {
    let l = lattice_from(payload, opts, None)?;
    if let Some(w) = payload.get("omega") {
        let w = parse_vector(w)?;
        let bound = parse_int(field(payload, "bound")?)?;
        let rs = root_slice(&l, &w, &bound).map_err(CliError::core)?;
        return Ok(Outcome::done(json!({
            "kind": "slice",
            "roots": vectors(&rs),
            "count": rs.len(),
        })));
    }
    if let Some(b) = payload.get("bound") {
        let bound = parse_int(b)?;
        let vs = short_vectors(&l, &bound).map_err(CliError::core)?;
        let norms: Vec<Value> = vs.iter().map(|v| int(&l.norm(v).expect("rank checked"))).collect();
        return Ok(Outcome::done(json!({
            "kind": "short_vectors",
            "vectors": vectors(&vs),
            "norms": norms,
            "count": vs.len(),
        })));
    }
    let r = roots_generate(&l).map_err(CliError::core)?;
    Ok(Outcome::done(json!({
        "kind": "roots",
        "roots": vectors(&r.roots),
        "count": r.count,
        "generates": r.generates,
        "generation_basis": r.generation_basis.as_ref().map(sublattice_json),
    })))
}

pub fn sample_json(r: &SampleReport, seed: u64) -> Value {
    let norms: serde_json::Map<String, Value> = r.witness_norms.iter().map(|(k, c)| (k.to_string(), json!(c))).collect();
    let trials: Vec<Value> = r
        .trials
        .iter()
        .map(|t| {
            let positive = t.positive.as_ref().map(|p| match p {
                Ok(p) => json!({ "v": vector(&p.v), "witness": vector(&p.witness), "witness_norm": int(&p.witness_norm) }),
                Err(e) => json!({ "error": e }),
            });
            let isotropic = t.isotropic.as_ref().map(|p| match p {
                Ok(p) => json!({ "ell": vector(&p.ell) }),
                Err(e) => json!({ "error": e }),
            });
            json!({ "trial": t.trial, "w": vector(&t.w), "w2": int(&t.w2), "positive": positive, "isotropic": isotropic })
        })
        .collect();
    json!({
        "count": r.count,
        "seed": seed.to_string(),
        "positive_successes": r.positive_successes,
        "isotropic_successes": r.isotropic_successes,
        "witness_norms": norms,
        "failures": r.failures.iter().map(|f| json!({
            "trial": f.trial,
            "w": f.w.as_ref().map(vector),
            "reason": f.reason,
        })).collect::<Vec<_>>(),
        "trials": trials,
    })
}

fn sample_cmd(payload: &Value, opts: &Options) -> Result<Outcome, CliError> {
    let count = opts.count.unwrap_or(100);
    if count == 0 {
        return Err(malformed("--count must be at least 1"));
    }
    if let Some(w) = payload.get("w") {
        let w = parse_vector(w)?;
        if w.len() != 22 {
            return Err(CliError::core(Error::RankMismatch { expected: 22, got: w.len() }));
        }
        let r = summarize(1, vec![Ok(run_trial(0, &w, opts.mode))]);
        return Ok(Outcome::done(sample_json(&r, opts.seed)));
    }
    let mut sample_box = SampleBox::default();
    if let Some(b) = opts.box_size {
        if b < 1 {
            return Err(malformed("--box must be at least 1"));
        }
        sample_box.hyperbolic = b;
    }
    let cfg = SampleConfig { count, seed: opts.seed, mode: opts.mode, sample_box, strategy: Strategy::default() };
    Ok(Outcome::done(sample_json(&sample(&cfg), opts.seed)))
}
