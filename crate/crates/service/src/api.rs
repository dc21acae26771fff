use std::collections::BTreeSet;
use std::time::Instant;

use contract_forge::contract::ContractJson;
use contract_forge::{parse_expr, ContractError, Direction, PolyhedralContract};
use contract_forge_labs::aircraft::{
    evaluate_instance, explore_grid, tolerance_cost, AircraftError, ExploreConfig, HxKind,
    OperatingPoint, PhysicalConstants, ToleranceVector,
};
use contract_forge_labs::mission::{
    schedule, MissionError, OperationalRequirements, TaskHyperparameters, TaskKind,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Request body: contracts in file form plus operation options.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ApiRequest {
    pub op: Option<String>,
    pub contracts: Vec<ContractJson>,
    pub options: Value,
}

/// Status code and JSON body.
#[derive(Debug, Clone, PartialEq)]
pub struct Response {
    pub status: u16,
    pub body: Value,
}

enum Failure {
    BadRequest(String),
    NotFound(String),
    MethodNotAllowed,
    Incompatible(Value, String),
    Unprocessable(String),
}

impl From<ContractError> for Failure {
    fn from(e: ContractError) -> Self {
        match &e {
            ContractError::Incompatible(d) => {
                Failure::Incompatible(json!(d.to_json()), e.to_string())
            }
            ContractError::Parse(_) | ContractError::Interface(_) => {
                Failure::BadRequest(e.to_string())
            }
            _ => Failure::Unprocessable(e.to_string()),
        }
    }
}

impl From<MissionError> for Failure {
    fn from(e: MissionError) -> Self {
        match e {
            MissionError::Contract(c) => c.into(),
            MissionError::Config(m) => Failure::BadRequest(m),
            other => Failure::Unprocessable(other.to_string()),
        }
    }
}

impl From<AircraftError> for Failure {
    fn from(e: AircraftError) -> Self {
        match e {
            AircraftError::Contract(c) => c.into(),
            AircraftError::Config(_) | AircraftError::Range(_) | AircraftError::Construction(_) => {
                Failure::BadRequest(e.to_string())
            }
            other => Failure::Unprocessable(other.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

/// Routes one request. Every route except `GET /api/health` takes a POST
/// with an [`ApiRequest`] body; `OPTIONS` answers CORS preflights.
pub fn handle(method: &str, path: &str, body: &[u8]) -> Response {
    let start = Instant::now();
    let path = path.split('?').next().unwrap_or(path);
    let outcome = route(method, path, body);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok(result) => Response {
            status: if method == "OPTIONS" { 204 } else { 200 },
            body: json!({ "ok": true, "result": result, "diagnostic": null, "elapsed_ms": elapsed_ms }),
        },
        Err(f) => {
            let (status, diagnostic, error) = match f {
                Failure::BadRequest(m) => (400, Value::Null, m),
                Failure::NotFound(m) => (404, Value::Null, m),
                Failure::MethodNotAllowed => (
                    405,
                    Value::Null,
                    format!("method {method} not allowed on {path}"),
                ),
                Failure::Incompatible(d, m) => (422, d, m),
                Failure::Unprocessable(m) => (422, Value::Null, m),
            };
            Response {
                status,
                body: json!({
                    "ok": false, "result": null, "diagnostic": diagnostic, "error": error, "elapsed_ms": elapsed_ms
                }),
            }
        }
    }
}

fn route(method: &str, path: &str, body: &[u8]) -> Outcome {
    type Op = fn(&ApiRequest) -> Outcome;
    let op: Op = match path {
        "/api/health" => {
            return match method {
                "GET" | "OPTIONS" => Ok(Value::Null),
                _ => Err(Failure::MethodNotAllowed),
            }
        }
        "/api/compose" => compose,
        "/api/quotient" => quotient,
        "/api/merge" => merge,
        "/api/refines" => refines,
        "/api/bounds" => bounds,
        "/api/optimize" => optimize,
        "/api/mission/schedulability" => schedulability,
        "/api/aircraft/evaluate" => aircraft_evaluate,
        "/api/aircraft/explore" => aircraft_explore,
        other => return Err(Failure::NotFound(format!("no route {other}"))),
    };
    match method {
        "OPTIONS" => Ok(Value::Null),
        "POST" => {
            let req: ApiRequest = serde_json::from_slice(body)
                .map_err(|e| Failure::BadRequest(format!("malformed body: {e}")))?;
            op(&req)
        }
        _ => Err(Failure::MethodNotAllowed),
    }
}

fn contracts<const N: usize>(req: &ApiRequest) -> Result<[PolyhedralContract; N], Failure> {
    if req.contracts.len() != N {
        return Err(Failure::BadRequest(format!(
            "expected {N} contracts, got {}",
            req.contracts.len()
        )));
    }
    let parsed: Vec<PolyhedralContract> = req
        .contracts
        .iter()
        .map(|c| c.to_contract())
        .collect::<Result<_, _>>()?;
    Ok(parsed.try_into().unwrap_or_else(|_| unreachable!()))
}

fn options<T: DeserializeOwned>(req: &ApiRequest) -> Result<T, Failure> {
    let v = if req.options.is_null() {
        json!({})
    } else {
        req.options.clone()
    };
    serde_json::from_value(v).map_err(|e| Failure::BadRequest(format!("invalid options: {e}")))
}

fn contract_result(c: &PolyhedralContract) -> Value {
    json!({ "contract": c.to_json(), "text": c.to_string() })
}

#[derive(Deserialize, Default)]
#[serde(default)]
struct ComposeOptions {
    keep: BTreeSet<String>,
}

fn compose(req: &ApiRequest) -> Outcome {
    let [a, b] = contracts(req)?;
    let o: ComposeOptions = options(req)?;
    Ok(contract_result(&a.compose_keeping(&b, &o.keep)?))
}

fn quotient(req: &ApiRequest) -> Outcome {
    let [top, part] = contracts(req)?;
    Ok(contract_result(&top.quotient(&part)?))
}

fn merge(req: &ApiRequest) -> Outcome {
    let [a, b] = contracts(req)?;
    let m = a.merge(&b)?;
    let mut out = contract_result(&m);
    out["compatible"] = json!(m.is_compatible());
    out["consistent"] = json!(m.is_consistent());
    Ok(out)
}

fn refines(req: &ApiRequest) -> Outcome {
    let [a, b] = contracts(req)?;
    Ok(json!(a.refines(&b)?.to_json()))
}

#[derive(Deserialize)]
struct BoundsOptions {
    #[serde(default)]
    var: Option<String>,
    #[serde(default)]
    vars: Vec<String>,
}

fn bound_value(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn bounds(req: &ApiRequest) -> Outcome {
    let [c] = contracts(req)?;
    let o: BoundsOptions = options(req)?;
    let mut vars = o.vars;
    vars.extend(o.var);
    if vars.is_empty() {
        vars = c.inputs().iter().chain(c.outputs()).cloned().collect();
    }
    let mut out = serde_json::Map::new();
    for v in vars {
        if !c.has_var(&v) {
            return Err(Failure::BadRequest(format!("unknown variable {v}")));
        }
        let (lo, hi) = c.get_variable_bounds(&v)?;
        out.insert(
            v,
            json!({ "lower": bound_value(lo), "upper": bound_value(hi) }),
        );
    }
    Ok(Value::Object(out))
}

#[derive(Deserialize)]
struct OptimizeOptions {
    expr: String,
    direction: Direction,
}

fn optimize(req: &ApiRequest) -> Outcome {
    let [c] = contracts(req)?;
    let o: OptimizeOptions = options(req)?;
    let expr = parse_expr(&o.expr).map_err(|e| Failure::BadRequest(e.to_string()))?;
    let value = c.optimize(&expr, o.direction)?.value();
    Ok(json!({ "value": value, "unbounded": value.is_none() }))
}

#[derive(Deserialize)]
struct ScheduleOptions {
    sequence: Vec<String>,
    #[serde(default)]
    hyper: Option<TaskHyperparameters>,
    #[serde(default)]
    requirements: Option<OperationalRequirements>,
}

fn schedulability(req: &ApiRequest) -> Outcome {
    let o: ScheduleOptions = options(req)?;
    let sequence = TaskKind::parse_sequence(&o.sequence)?;
    let hyper = o.hyper.unwrap_or_default();
    hyper.validate()?;
    let r = schedule(&sequence, &hyper, &o.requirements.unwrap_or_default())?;
    Ok(json!({ "sequence": sequence, "schedule": r }))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Tolerances {
    Uniform(f64),
    Each(ToleranceVector),
}

#[derive(Deserialize)]
struct EvaluateOptions {
    #[serde(default)]
    constants: PhysicalConstants,
    op: OperatingPoint,
    eps: Tolerances,
    hx: HxKind,
}

fn aircraft_evaluate(req: &ApiRequest) -> Outcome {
    let o: EvaluateOptions = options(req)?;
    let eps = match o.eps {
        Tolerances::Uniform(e) => ToleranceVector::uniform(e),
        Tolerances::Each(v) => v,
    };
    let r = evaluate_instance(&o.constants, &o.op, &eps, o.hx)?;
    let cost = tolerance_cost(&o.constants, &r);
    Ok(json!({ "instance": r, "valid": r.valid(), "cost": cost }))
}

fn aircraft_explore(req: &ApiRequest) -> Outcome {
    let cfg: ExploreConfig = options(req)?;
    let rows = explore_grid(&cfg, None)?;
    Ok(json!({ "rows": rows }))
}
