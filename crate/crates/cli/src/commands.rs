//! Subcommand bodies. Each takes parsed input and returns a JSON payload
//! tagged with whether the mathematical check succeeded.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use isoindex_core::degree::{self, DEFAULT_EPSILON, DEFAULT_LEVEL};
use isoindex_core::homology::{self, lefschetz_table, ComplexJson};
use isoindex_core::matrix::{big_to_json, json_to_big};
use isoindex_core::realization::{build_skew_product_with, plan_from_decomposition, verify_plan};
use isoindex_core::sequence::{format_rational, growth_window, DoldWitness};
use isoindex_core::{
    anosov_index_sequence, check_dold, fixed_point_index, growth_exponent, index_from_traces,
    roots_of_unity_eigencheck, roots_of_unity_form, verify_roundtrip, CatalogMap, ChainMap,
    DoldDecomposition, IntMatrix, PeriodicSequence, RealizationPlan, SimplicialComplex,
    SimplicialPair,
};

/// Input problems; these map to exit code 2 and produce no payload.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Input(String),
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// A payload and whether it reports success (exit 0) or a domain failure (exit 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub success: bool,
    pub payload: Value,
}

impl Outcome {
    fn ok(payload: Value) -> Self {
        Self { success: true, payload }
    }

    fn failed(payload: Value) -> Self {
        Self { success: false, payload }
    }

    fn from_check(success: bool, payload: Value) -> Self {
        Self { success, payload }
    }
}

fn parse_sequence(input: &Value) -> Result<PeriodicSequence, CliError> {
    serde_json::from_value(input.clone()).map_err(|e| invalid(format!("expected {{\"period\", \"values\"}}: {e}")))
}

fn parse_decomposition(input: &Value) -> Result<DoldDecomposition, CliError> {
    serde_json::from_value(input.clone()).map_err(|e| invalid(format!("expected {{\"coefficients\"}}: {e}")))
}

fn decomposition_json(dec: &DoldDecomposition) -> Value {
    Value::Object(
        dec.coefficients()
            .iter()
            .map(|(k, a)| (k.to_string(), Value::from(format_rational(a))))
            .collect(),
    )
}

fn witness_json(w: &DoldWitness) -> Value {
    match w {
        DoldWitness::NonIntegral { k, value } => json!({
            "kind": "non-integral",
            "k": k,
            "value": format_rational(value),
        }),
        DoldWitness::Unreconstructed { n, expected, reconstructed } => json!({
            "kind": "unreconstructed",
            "n": n,
            "expected": expected,
            "reconstructed": format_rational(reconstructed),
        }),
    }
}

fn big_list(values: &[BigInt]) -> Value {
    Value::Array(values.iter().map(big_to_json).collect())
}

pub fn check(input: &Value) -> Result<Outcome, CliError> {
    let seq = parse_sequence(input)?;
    let c = check_dold(&seq);
    let mut out = Map::new();
    out.insert("dold".into(), c.holds.into());
    out.insert("coefficients".into(), decomposition_json(&c.decomposition));
    if let Some(w) = &c.witness {
        out.insert("witness".into(), witness_json(w));
    }
    Ok(Outcome::from_check(c.holds, Value::Object(out)))
}

/// Sequence input: coefficients and the roots-of-unity form.
/// Decomposition input: one period of the sequence it describes.
pub fn decompose(input: &Value) -> Result<Outcome, CliError> {
    if input.get("coefficients").is_some() {
        let dec = parse_decomposition(input)?;
        let period = dec.support_lcm();
        let values: Result<Vec<i64>, _> = (1..=period).map(|n| dec.evaluate_integer(n)).collect();
        return Ok(match values {
            Ok(values) => Outcome::ok(json!({
                "coefficients": decomposition_json(&dec),
                "period": period,
                "values": values,
            })),
            Err(e) => Outcome::failed(json!({
                "coefficients": decomposition_json(&dec),
                "error": e.to_string(),
            })),
        });
    }
    let seq = parse_sequence(input)?;
    let c = check_dold(&seq);
    let mut out = Map::new();
    out.insert("dold".into(), c.holds.into());
    out.insert("coefficients".into(), decomposition_json(&c.decomposition));
    match &c.witness {
        Some(w) => {
            out.insert("witness".into(), witness_json(w));
        }
        None => {
            let form = roots_of_unity_form(&seq).expect("sequence satisfies the congruences");
            let roots = |v: &[isoindex_core::RootOfUnity]| Value::Array(v.iter().map(|r| r.to_string().into()).collect());
            out.insert(
                "roots_of_unity".into(),
                json!({ "lambda": roots(&form.lambda), "mu": roots(&form.mu) }),
            );
        }
    }
    Ok(Outcome::from_check(c.holds, Value::Object(out)))
}

pub fn realize(input: &Value, seed: u64) -> Result<Outcome, CliError> {
    let (plan, table) = if input.get("coefficients").is_some() {
        let dec = parse_decomposition(input)?;
        let plan = match plan_from_decomposition(&dec) {
            Ok(p) => p,
            Err(e) => return Ok(Outcome::failed(json!({ "error": e.to_string() }))),
        };
        let table = verify_plan(&plan).map_err(invalid)?;
        (plan, table)
    } else {
        let seq = parse_sequence(input)?;
        let c = check_dold(&seq);
        if let Some(w) = &c.witness {
            return Ok(Outcome::failed(json!({
                "dold": false,
                "coefficients": decomposition_json(&c.decomposition),
                "witness": witness_json(w),
            })));
        }
        verify_roundtrip(&seq).map_err(invalid)?
    };
    let model = match build_skew_product_with(&plan, isoindex_core::realization::DEFAULT_PHI_MARGIN, seed) {
        Ok(m) => json!({ "supported": true, "description": m.description(), "property_check": m.report() }),
        Err(e) => json!({ "supported": false, "error": e.to_string() }),
    };
    Ok(Outcome::from_check(
        table.holds,
        json!({ "plan": plan, "table": table, "model": model }),
    ))
}

pub struct NumericArgs<'a> {
    pub map: Option<&'a str>,
    pub n: u64,
    pub epsilon: Option<f64>,
    pub level: Option<u32>,
    pub inverse: bool,
    pub seed: u64,
}

pub fn index_numeric(args: &NumericArgs, input: Option<&Value>) -> Result<Outcome, CliError> {
    if args.n == 0 {
        return Err(invalid("--n must be at least 1"));
    }
    let (mut f, from_plan) = match (args.map, input) {
        (Some(id), _) => (CatalogMap::by_id(id).map_err(invalid)?, false),
        (None, Some(v)) => {
            let plan: RealizationPlan =
                serde_json::from_value(v.get("plan").unwrap_or(v).clone()).map_err(invalid)?;
            match build_skew_product_with(&plan, isoindex_core::realization::DEFAULT_PHI_MARGIN, args.seed) {
                Ok(model) => (CatalogMap::radial(Arc::new(model)), true),
                Err(e) => return Ok(Outcome::failed(json!({ "map": "plan", "n": args.n, "error": e.to_string() }))),
            }
        }
        (None, None) => return Err(invalid("give --map or a plan on --input")),
    };
    if args.inverse {
        f = match f.inverse() {
            Ok(g) => g,
            Err(e) => return Ok(Outcome::failed(json!({ "map": f.id(), "n": args.n, "error": e.to_string() }))),
        };
    }
    if f.is_symbolic() {
        let index = f.symbolic_index(args.n).expect("symbolic maps have a formula");
        return Ok(Outcome::ok(json!({
            "map": f.id(),
            "n": args.n,
            "index": big_to_json(&index),
            "note": "symbolic only",
        })));
    }
    let epsilon = args.epsilon.unwrap_or(DEFAULT_EPSILON);
    let level = args.level.unwrap_or(DEFAULT_LEVEL);
    if level > degree::MAX_LEVEL {
        return Err(invalid(format!("--level must be at most {}", degree::MAX_LEVEL)));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(invalid("--epsilon must be positive"));
    }
    let mut out = Map::new();
    out.insert("map".into(), f.id().into());
    out.insert("n".into(), args.n.into());
    let report = fixed_point_index(&f, args.n, epsilon, level);
    let symbolic = from_plan.then(|| f.symbolic_index(args.n)).flatten();
    let success = match report {
        Ok(r) => {
            out.insert("index".into(), r.index.into());
            out.insert("residual".into(), r.residual.into());
            out.insert("level_used".into(), r.level_used.into());
            out.insert("epsilon_check".into(), r.epsilon_check.into());
            if let Some(s) = &symbolic {
                out.insert("symbolic".into(), big_to_json(s));
                out.insert("agrees".into(), (BigInt::from(r.index) == *s).into());
            }
            symbolic.as_ref().is_none_or(|s| BigInt::from(r.index) == *s)
        }
        Err(e) => {
            out.insert("error".into(), e.to_string().into());
            if let Some(s) = &symbolic {
                out.insert("symbolic".into(), big_to_json(s));
            }
            false
        }
    };
    Ok(Outcome::from_check(success, Value::Object(out)))
}

fn load_complex(v: &Value, what: &str) -> Result<SimplicialComplex, CliError> {
    let raw: ComplexJson = serde_json::from_value(v.clone()).map_err(|e| invalid(format!("{what}: {e}")))?;
    let (c, added) = SimplicialComplex::closure(raw.simplices).map_err(|e| invalid(format!("{what}: {e}")))?;
    if added > 0 {
        eprintln!("warning: {what}: added {added} missing faces");
    }
    Ok(c)
}

fn parse_matrix(v: &Value) -> Result<IntMatrix, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| invalid(format!("matrix: {e}")))
}

/// Matrices per dimension, as a list (`[M_0, M_1, ...]`) or an object keyed
/// by dimension. Dimensions not given act as the identity on `ranks`.
fn parse_chain_map(v: &Value, ranks: &[usize]) -> Result<ChainMap, CliError> {
    let mut given: BTreeMap<usize, IntMatrix> = BTreeMap::new();
    match v {
        Value::Array(items) => {
            for (i, m) in items.iter().enumerate() {
                given.insert(i, parse_matrix(m)?);
            }
        }
        Value::Object(items) => {
            for (k, m) in items {
                let dim = k.parse().map_err(|_| invalid(format!("matrix key {k:?} is not a dimension")))?;
                given.insert(dim, parse_matrix(m)?);
            }
        }
        _ => return Err(invalid("matrices must be a list or an object")),
    }
    if let Some(&dim) = given.keys().find(|&&d| d > homology::MAX_DIM) {
        return Err(invalid(format!("no homology in dimension {dim}")));
    }
    let mut matrices = Vec::new();
    for (dim, &rank) in ranks.iter().enumerate() {
        let m = given.remove(&dim).unwrap_or_else(|| IntMatrix::identity(rank));
        if m.rows() != rank || m.cols() != rank {
            return Err(invalid(format!(
                "matrix in dimension {dim} is {}x{}, but the group has rank {rank}",
                m.rows(),
                m.cols()
            )));
        }
        matrices.push(m);
    }
    ChainMap::new(matrices).map_err(invalid)
}

fn trace_tables(map: &ChainMap, n_max: u64) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("lefschetz".into(), big_list(&lefschetz_table(map, n_max)));
    let index: Result<Vec<BigInt>, _> = (1..=n_max).map(|n| index_from_traces(map, n)).collect();
    match index {
        Ok(v) => out.insert("index_from_traces".into(), big_list(&v)),
        Err(e) => out.insert("index_from_traces".into(), json!({ "error": e.to_string() })),
    };
    out
}

/// Homology of a complex or pair, with Lefschetz numbers when matrices on
/// homology are supplied. A pair with a nonempty subcomplex is read as the
/// quotient space `N/L`.
pub fn homology(input: &Value, n_max: Option<u64>) -> Result<Outcome, CliError> {
    let pair = if let Some(total) = input.get("total") {
        let total = load_complex(total, "total")?;
        let sub = match input.get("sub") {
            Some(s) => load_complex(s, "sub")?,
            None => SimplicialComplex::default(),
        };
        SimplicialPair::new(total, sub).map_err(invalid)?
    } else if input.get("simplices").is_some() {
        SimplicialPair::absolute(load_complex(input, "complex")?)
    } else {
        return Err(invalid("expected {\"simplices\"} or {\"total\", \"sub\"}"));
    };
    let quotient = !pair.sub().is_empty();
    let groups = if quotient {
        homology::quotient_homology(&pair)
    } else {
        homology::relative_homology(&pair)
    };
    let euler: i64 = groups
        .iter()
        .enumerate()
        .map(|(i, g)| if i % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) })
        .sum();
    let mut out = Map::new();
    out.insert("space".into(), (if quotient { "N/L" } else { "N" }).into());
    out.insert(
        "homology".into(),
        Value::Array(
            groups
                .iter()
                .enumerate()
                .map(|(dim, g)| {
                    json!({
                        "dim": dim,
                        "betti": g.betti,
                        "torsion": big_list(&g.torsion),
                        "group": g.to_string(),
                    })
                })
                .collect(),
        ),
    );
    out.insert("euler_characteristic".into(), euler.into());
    if let Some(m) = input.get("matrices") {
        let ranks: Vec<usize> = groups.iter().map(|g| g.betti).collect();
        let map = parse_chain_map(m, &ranks)?;
        let n_max = n_max.or_else(|| input.get("n_max").and_then(Value::as_u64)).unwrap_or(3);
        out.extend(trace_tables(&map, n_max));
    }
    Ok(Outcome::ok(Value::Object(out)))
}

/// Lefschetz numbers and the eigenvalue check from matrices alone.
pub fn lefschetz(input: &Value, n_max: Option<u64>) -> Result<Outcome, CliError> {
    let raw = input.get("matrices").ok_or_else(|| invalid("expected {\"matrices\"}"))?;
    let ranks: Vec<usize> = match raw {
        Value::Array(items) => items.iter().map(|m| m.as_array().map_or(0, Vec::len)).collect(),
        Value::Object(items) => {
            let mut ranks = vec![0; homology::MAX_DIM + 1];
            for (k, m) in items {
                if let Ok(d) = k.parse::<usize>() {
                    if d < ranks.len() {
                        ranks[d] = m.as_array().map_or(0, Vec::len);
                    }
                }
            }
            ranks
        }
        _ => return Err(invalid("matrices must be a list or an object")),
    };
    let map = parse_chain_map(raw, &ranks)?;
    let n_max = n_max.or_else(|| input.get("n_max").and_then(Value::as_u64)).unwrap_or(6);
    let mut out = trace_tables(&map, n_max);
    let checks: Vec<Value> = map
        .matrices()
        .iter()
        .enumerate()
        .filter(|(_, m)| m.rows() > 0)
        .map(|(dim, m)| {
            let c = roots_of_unity_eigencheck(m).expect("square by construction");
            json!({ "dim": dim, "eigencheck": c })
        })
        .collect();
    out.insert("eigenvalues".into(), Value::Array(checks));
    Ok(Outcome::ok(Value::Object(out)))
}

/// Growth exponent of a sequence (`{"period", "values"}`), of explicit
/// samples (`{"samples"}`), or of the symbolic catalog sequence.
pub fn growth(input: Option<&Value>, map: Option<&str>, terms: u64) -> Result<Outcome, CliError> {
    let samples: Vec<BigInt> = match (map, input) {
        (Some("anosov-remark6"), _) => anosov_index_sequence(terms as usize),
        (Some(other), _) => return Err(invalid(format!("no symbolic sequence for map {other:?}"))),
        (None, Some(v)) if v.get("samples").is_some() => v["samples"]
            .as_array()
            .ok_or_else(|| invalid("samples must be a list"))?
            .iter()
            .map(json_to_big)
            .collect::<Result<_, _>>()
            .map_err(invalid)?,
        (None, Some(v)) => {
            let seq = parse_sequence(v)?;
            seq.take(terms).into_iter().map(BigInt::from).collect()
        }
        (None, None) => return Err(invalid("give --map or a sequence on --input")),
    };
    Ok(match growth_exponent(&samples) {
        Ok(g) => {
            let (first, last) = growth_window(samples.len());
            Outcome::ok(json!({
                "terms": samples.len(),
                "window": [first, last],
                "growth_exponent": g,
            }))
        }
        Err(e) => Outcome::failed(json!({ "terms": samples.len(), "error": e.to_string() })),
    })
}
