use contract_forge::{ContractError, LinearTerm, PolyhedralContract, TermList};
use serde::Serialize;

use super::components::build_sud;
use super::model::{AircraftError, HxKind, OperatingPoint, PhysicalConstants, ToleranceVector};

/// Cost added when an instance violates the loop requirements.
pub const PENALTY: f64 = 1e6;

/// Requirement contract of the fuel loop: bounded deviations of tank temperature, air
/// temperature and power demand; engine inlet and returned fuel kept in range.
pub fn make_spec(
    k: &PhysicalConstants,
    op: &OperatingPoint,
) -> Result<PolyhedralContract, AircraftError> {
    let t_a = op.air_temperature()?;
    let mut a = Vec::new();
    let mut within = |v: &str, nominal: f64, rel: f64| {
        a.push(LinearTerm::leq([(v, 1.0)], (1.0 + rel) * nominal));
        a.push(LinearTerm::leq([(v, -1.0)], -(1.0 - rel) * nominal));
    };
    within("T_in", k.t_in_nominal, 0.02);
    within("T_a", t_a, 0.02);
    within("w_nom", k.w_nom_nominal, 0.05);
    let (lo, hi) = k.t_e_range;
    let g = vec![
        LinearTerm::leq([("T_e", 1.0)], hi),
        LinearTerm::leq([("T_e", -1.0)], -lo),
        LinearTerm::leq([("T_out", 1.0), ("T_in", -1.0)], k.delta_t),
        LinearTerm::leq([("T_out", -1.0), ("T_in", 1.0)], k.delta_t),
    ];
    Ok(PolyhedralContract::new(
        ["T_in", "T_a", "w_nom"],
        ["T_e", "T_out"],
        TermList::new(a),
        TermList::new(g),
    )?)
}

/// Outcome of checking one design instance against the loop requirements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceResult {
    pub op: OperatingPoint,
    pub eps: ToleranceVector,
    pub hx: HxKind,
    pub refines_spec: bool,
    /// Range of the engine inlet temperature under the assumed environment.
    pub t_e: Option<(f64, f64)>,
    /// Range of the returned fuel temperature under the assumed environment.
    pub t_out: Option<(f64, f64)>,
    /// Why the system does not refine the requirement contract, when it does not.
    pub reason: Option<String>,
}

impl InstanceResult {
    pub fn valid(&self) -> bool {
        self.refines_spec
    }
}

/// Builds the system for one instance, checks refinement of the
/// requirement contract and bounds the engine and return temperatures over the
/// behaviours allowed by the assumed environment.
pub fn evaluate_instance(
    k: &PhysicalConstants,
    op: &OperatingPoint,
    eps: &ToleranceVector,
    hx: HxKind,
) -> Result<InstanceResult, AircraftError> {
    k.validate()?;
    eps.validate()?;
    let spec = make_spec(k, op)?;
    let mut result = InstanceResult {
        op: *op,
        eps: *eps,
        hx,
        refines_spec: false,
        t_e: None,
        t_out: None,
        reason: None,
    };
    let sud = match build_sud(k, op, eps, hx) {
        Ok(s) => s,
        Err(AircraftError::Contract(ContractError::Incompatible(d))) => {
            result.reason = Some(d.to_string());
            return Ok(result);
        }
        Err(e) => return Err(e),
    };
    let report = sud.refines(&spec)?;
    result.refines_spec = report.refines;
    if !report.refines {
        result.reason = Some(format!("violated: {}", report.violated_lines().join("; ")));
    }
    let closed = match close_with_environment(&spec, &sud) {
        Ok(c) => c,
        Err(ContractError::Incompatible(d)) => {
            result.refines_spec = false;
            result.reason = Some(d.to_string());
            return Ok(result);
        }
        Err(e) => return Err(e.into()),
    };
    let behavior = closed.behavior();
    let upstream: TermList = behavior
        .iter()
        .filter(|t| !t.mentions("T_out"))
        .cloned()
        .collect();
    result.t_e = upstream.var_bounds("T_e").ok();
    result.t_out = behavior.var_bounds("T_out").ok();
    if result.t_e.is_none() || result.t_out.is_none() {
        result.refines_spec = false;
        result
            .reason
            .get_or_insert_with(|| "environment admits no behaviour".into());
    }
    Ok(result)
}

/// The system driven by an environment that produces exactly the inputs the
/// requirement contract assumes.
pub fn close_with_environment(
    spec: &PolyhedralContract,
    sud: &PolyhedralContract,
) -> Result<PolyhedralContract, ContractError> {
    let env = PolyhedralContract::new(
        Vec::<String>::new(),
        spec.inputs().iter().cloned(),
        TermList::empty(),
        spec.assumptions().clone(),
    )?;
    env.compose_keeping(sud, &spec.input_set())
}

/// `‖1 − ε‖₂` plus the squared distance of the temperature bounds to the
/// required limits, or [`PENALTY`] when the instance is not valid or its
/// engine temperature range leaves the required one.
pub fn tolerance_cost(k: &PhysicalConstants, r: &InstanceResult) -> f64 {
    let c: f64 = r
        .eps
        .to_array()
        .iter()
        .map(|e| (1.0 - e).powi(2))
        .sum::<f64>()
        .sqrt();
    let (lo, hi) = k.t_e_range;
    match (r.valid(), r.t_e, r.t_out) {
        (true, Some((e_lo, e_hi)), Some((o_lo, o_hi))) if e_lo >= lo && e_hi <= hi => {
            let t = k.t_in_nominal;
            let v = (e_lo - lo).powi(2)
                + (hi - e_hi).powi(2)
                + (o_lo - (t - k.delta_t)).powi(2)
                + ((t + k.delta_t) - o_hi).powi(2);
            c + v
        }
        _ => c + PENALTY,
    }
}
