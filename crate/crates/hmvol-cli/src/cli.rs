//! Subcommand drivers. Each returns one structured document, rendered in
//! the requested format.

use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use hmvol::criteria::{
    find_m_threshold, is_big, is_big_lattice, lattice_bound_params, reduce_ratio, uniform_n_threshold,
    unram_sqfree_thresholds, ThresholdResult,
};
use hmvol::hlattice::{parse_vector, validate_lattice, HermitianLattice, ThetaReading};
use hmvol::plocal::{check_heart_for_vector, condition_p, jordan_profile, recognize_shape, check_star};
use hmvol::qfield::{make_field, FieldClass, QuadInt};
use hmvol::volume::{prasad_volume, Parity, VBoundParams, VolumeOptions};

use crate::{Cli, Command, Format, Reading, ThresholdArgs};

pub struct Output {
    pub text: String,
    pub warnings: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    d: i64,
    gram: Vec<Vec<[i64; 2]>>,
    #[serde(default)]
    #[allow(dead_code)]
    name: Option<String>,
    #[serde(default)]
    #[allow(dead_code)]
    notes: Option<String>,
}

pub fn load_lattice(path: &str) -> Result<HermitianLattice> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
    parse_lattice(&text).with_context(|| format!("in {path}"))
}

pub fn parse_lattice(text: &str) -> Result<HermitianLattice> {
    let file: LatticeFile = serde_json::from_str(text).map_err(|e| anyhow!("line {} column {}: {e}", e.line(), e.column()))?;
    let field = make_field(file.d)?;
    let gram: Vec<Vec<QuadInt>> = file.gram.iter().map(|row| row.iter().map(|&[a, b]| QuadInt::new(a, b)).collect()).collect();
    Ok(validate_lattice(&field, gram)?)
}

fn reading(r: Reading) -> ThetaReading {
    match r {
        Reading::Union => ThetaReading::Union,
        Reading::Intersection => ThetaReading::Intersection,
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

pub fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    let mut warnings = Vec::new();
    let doc = match &cli.command {
        Command::Analyze { path } => analyze(&load_lattice(path)?, g.precision_bits, &mut warnings)?,
        Command::Bound(b) => {
            let alpha = b.alpha.as_deref().map(parse_ratio).transpose()?;
            match (&b.path, &b.params) {
                (Some(p), None) => {
                    let l = load_lattice(p)?;
                    let rep = is_big_lattice(&l, b.a, reading(g.theta_reading), alpha, b.sharp, g.precision_bits)?;
                    if rep.conditional {
                        warnings.push("verdict is conditional: the principality check (star) did not succeed".into());
                    }
                    let mut v = to_value(&rep);
                    v["theta_reading"] = json!(format!("{:?}", reading(g.theta_reading)).to_lowercase());
                    v["sharp"] = json!(b.sharp);
                    v
                }
                (None, Some(s)) => {
                    let mut params = parse_params(s)?;
                    if b.sharp {
                        params.sharp = true;
                    }
                    if let Some(al) = alpha {
                        params.alpha = Some(al);
                    }
                    let rep = is_big(&params, b.a, g.precision_bits)?;
                    let mut v = to_value(&rep);
                    v["params"] = to_value(&params);
                    v["sharp"] = json!(params.sharp);
                    v
                }
                _ => bail!("give either a lattice file or --params"),
            }
        }
        Command::Thresholds(t) => thresholds(t, g.precision_bits)?,
        Command::Classify { path, vector } => classify(&load_lattice(path)?, vector)?,
    };
    Ok(Output { text: render(&doc, g.format), warnings })
}

fn parse_ratio(s: &str) -> Result<(u64, u64)> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<u64>()?, q.trim().parse::<u64>()?),
        None => (s.trim().parse::<u64>()?, 1),
    };
    if p == 0 || q == 0 {
        bail!("ratio {s} must be positive");
    }
    Ok(reduce_ratio(p, q))
}

/// `class=generic,n=199,theta=1,dl=1,disc=7,parity=even_dim,sharp`; bare words
/// name the class, the parity or `sharp`.
pub fn parse_params(s: &str) -> Result<VBoundParams> {
    let mut class = None;
    let mut n = None;
    let mut parity = None;
    let mut theta = BigInt::from(1);
    let mut dl = None;
    let mut disc = None;
    let mut alpha = None;
    let mut sharp = false;
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok.split_once('=') {
            Some((k, v)) => {
                let v = v.trim();
                match k.trim() {
                    "class" => class = Some(FieldClass::parse(v)?),
                    "n" => n = Some(v.parse::<u64>().context("n")?),
                    "parity" => parity = Some(Parity::parse(v)?),
                    "theta" => theta = v.parse().context("theta")?,
                    "dl" | "d_l" => dl = Some(v.parse::<BigInt>().context("D(L)")?),
                    "disc" | "d" => disc = Some(v.parse::<u64>().context("disc")?),
                    "alpha" => alpha = Some(parse_ratio(v)?),
                    "sharp" => sharp = v.parse().context("sharp")?,
                    other => bail!("unknown parameter '{other}'"),
                }
            }
            None if tok == "sharp" => sharp = true,
            None => {
                if let Ok(c) = FieldClass::parse(tok) {
                    class = Some(c);
                } else if let Ok(p) = Parity::parse(tok) {
                    parity = Some(p);
                } else {
                    bail!("unknown parameter '{tok}'");
                }
            }
        }
    }
    let n = n.ok_or_else(|| anyhow!("--params needs n"))?;
    let mut p = VBoundParams::new(class.unwrap_or(FieldClass::Generic), n);
    if let Some(par) = parity {
        if par != p.parity() {
            bail!("parity {} is inconsistent with n = {n}", par.name());
        }
    }
    p.theta = theta;
    p.d_l = dl;
    p.disc = disc;
    p.alpha = alpha;
    p.sharp = sharp;
    Ok(p)
}

fn analyze(l: &HermitianLattice, prec: u32, warnings: &mut Vec<String>) -> Result<Value> {
    let dg = l.discriminant_group()?;
    let shape = recognize_shape(l)?;
    let star = check_star(l)?;
    let mut profiles = Map::new();
    for p in l.bad_primes()? {
        let v = match jordan_profile(l, p) {
            Ok(prof) => json!({ "split_class": prof.split_class, "blocks": prof.blocks }),
            Err(e) => {
                warnings.push(format!("p = {p}: {e}"));
                json!({ "unsupported": e.to_string() })
            }
        };
        profiles.insert(p.to_string(), v);
    }
    let volume = match prasad_volume(l, &VolumeOptions::default(), prec) {
        Ok(v) => to_value(&v),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let bound = lattice_bound_params(l, ThetaReading::Union, None, false).ok().map(|b| to_value(&b.params));
    Ok(json!({
        "field": { "d": l.field.d, "disc": l.field.disc, "class": l.field.class() },
        "rank": l.rank(),
        "signature": [l.signature.0, l.signature.1],
        "det": l.determinant().to_string(),
        "discriminant_group": dg,
        "theta": {
            "union": l.theta(ThetaReading::Union)?.to_string(),
            "intersection": l.theta(ThetaReading::Intersection)?.to_string(),
        },
        "shape": shape,
        "p_1": condition_p(l, 1.0)?,
        "jordan": profiles,
        "star": { "overall": star.overall, "per_prime": star.per_prime, "notes": star.notes },
        "volume_su": volume,
        "bound_params": bound,
    }))
}

fn classify(l: &HermitianLattice, vector: &str) -> Result<Value> {
    let v = parse_vector(vector)?;
    let (div, i) = l.div_and_i(&v)?;
    let class = l.classify_reflective(&v)?;
    let k = l.orthogonal_complement(&v)?;
    let heart = if class.is_reflective() { Some(to_value(&check_heart_for_vector(l, &v)?)) } else { None };
    Ok(json!({
        "vector": v,
        "norm": l.norm(&v).to_string(),
        "div": div,
        "i_l": i,
        "reflective": class,
        "k_gram": k.gram,
        "heart": heart,
    }))
}

fn threshold_row(label: &str, published: Option<u64>, r: std::result::Result<ThresholdResult, hmvol::Error>) -> Value {
    match r {
        Ok(t) => {
            let mut v = to_value(&t);
            v["label"] = json!(label);
            v["published"] = json!(published);
            v
        }
        Err(e) => json!({ "label": label, "published": published, "error": e.to_string() }),
    }
}

fn thresholds(t: &ThresholdArgs, prec: u32) -> Result<Value> {
    let classes: Vec<FieldClass> = match &t.class {
        Some(c) => vec![FieldClass::parse(c)?],
        None => vec![FieldClass::Generic, FieldClass::Gauss, FieldClass::Eisenstein],
    };
    let parities: Vec<Parity> = match &t.parity {
        Some(p) => vec![Parity::parse(p)?],
        None => vec![Parity::OddDim, Parity::EvenDim],
    };
    let published = |c: FieldClass, p: Parity| match (p, c) {
        (Parity::OddDim, FieldClass::Generic) => 277,
        (Parity::OddDim, FieldClass::Gauss) => 550,
        (Parity::OddDim, FieldClass::Eisenstein) => 823,
        (Parity::EvenDim, FieldClass::Generic) => 390,
        (Parity::EvenDim, FieldClass::Gauss) => 776,
        (Parity::EvenDim, FieldClass::Eisenstein) => 1163,
    };
    let mut table = Vec::new();
    let mut failed = Vec::new();
    for &p in &parities {
        for &c in &classes {
            let label = format!("{}/{}", c.name(), p.name());
            let r = find_m_threshold(c, p, 1, t.cap, prec);
            if let Err(e) = &r {
                failed.push(format!("{label}: {e}"));
            }
            table.push(threshold_row(&label, Some(published(c, p)), r));
        }
    }
    let filtered = t.class.is_some() || t.parity.is_some();
    if !failed.is_empty() && filtered {
        bail!("{}", failed.join("; "));
    }
    let mut doc = json!({ "m_thresholds": table, "precision_bits": prec });
    if !filtered {
        doc["unramified_square_free"] = match unram_sqfree_thresholds(t.n_cap, prec) {
            Ok(r) => {
                let mut v = to_value(&r);
                v["published_n"] = json!(138);
                v["published_d0"] = json!(30);
                v
            }
            Err(e) => json!({ "error": e.to_string() }),
        };
        doc["uniform_n"] = threshold_row("generic/uniform_n", Some(582), uniform_n_threshold(FieldClass::Generic, 1, t.n_cap, prec));
    }
    Ok(doc)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("serializable"),
        Format::Csv | Format::Table => {
            let mut rows = Vec::new();
            flatten("", doc, &mut rows);
            if format == Format::Csv {
                let quote = |s: &str| if s.contains([',', '"', '\n']) { format!("\"{}\"", s.replace('"', "\"\"")) } else { s.to_string() };
                let mut s = String::from("key,value");
                for (k, v) in rows {
                    s.push('\n');
                    s.push_str(&format!("{},{}", quote(&k), quote(&v)));
                }
                s
            } else {
                let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
                rows.iter().map(|(k, v)| format!("{k:<w$}  {v}")).collect::<Vec<_>>().join("\n")
            }
        }
    }
}
