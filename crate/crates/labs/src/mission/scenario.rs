use std::collections::BTreeSet;

use contract_forge::{
    ContractError, Direction, LinearExpr, LinearTerm, PolyhedralContract, TermList,
};
use serde::Serialize;

use super::model::{
    MissionError, OperationalRequirements, TaskHyperparameters, TaskKind, Viewpoint,
};
use super::templates::{task_viewpoint_contract, var};

/// One viewpoint of a task sequence: step contracts composed left to right,
/// keeping every intermediate state as an output.
pub fn viewpoint_chain(
    sequence: &[TaskKind],
    viewpoint: Viewpoint,
    hyper: &TaskHyperparameters,
) -> Result<PolyhedralContract, MissionError> {
    let Some((first, rest)) = sequence.split_first() else {
        return Err(MissionError::Config("task sequence is empty".into()));
    };
    let mut acc = task_viewpoint_contract(*first, viewpoint, hyper, 1)?;
    for (i, kind) in rest.iter().enumerate() {
        let step = i + 2;
        let next = task_viewpoint_contract(*kind, viewpoint, hyper, step)?;
        let keep: BTreeSet<String> = acc.output_set();
        acc = acc
            .compose_keeping(&next, &keep)
            .map_err(|e| locate(e, step, *kind, viewpoint))?;
    }
    Ok(acc)
}

fn locate(e: ContractError, step: usize, kind: TaskKind, viewpoint: Viewpoint) -> ContractError {
    match e {
        ContractError::Incompatible(d) => ContractError::Incompatible(Box::new(
            d.with_location(format!("step {step} ({kind}), {viewpoint} viewpoint")),
        )),
        other => other,
    }
}

/// The scenario contract: the three viewpoint chains merged.
pub fn build_scenario(
    sequence: &[TaskKind],
    hyper: &TaskHyperparameters,
) -> Result<PolyhedralContract, MissionError> {
    hyper.validate()?;
    let power = viewpoint_chain(sequence, Viewpoint::Power, hyper)?;
    let science = viewpoint_chain(sequence, Viewpoint::Science, hyper)?;
    let nav = viewpoint_chain(sequence, Viewpoint::Nav, hyper)?;
    Ok(power.merge(&science)?.merge(&nav)?)
}

/// Input-only contract holding the operational requirements of an
/// `steps`-step schedule.
///
/// Assumptions pin the initial data volume and uncertainty, bound the
/// initial charge to `[min_soc, 100]` and every duration from below; the
/// guarantees require every exit charge to stay above `min_soc`.
pub fn requirements_contract(
    req: &OperationalRequirements,
    steps: usize,
) -> Result<PolyhedralContract, MissionError> {
    let mut inputs: Vec<String> = (0..=steps).map(|k| var("soc", k)).collect();
    inputs.extend(["d_0".to_string(), "u_0".to_string()]);
    inputs.extend((1..=steps).map(|k| var("dt", k)));
    let mut a: Vec<LinearTerm> = (1..=steps)
        .map(|k| LinearTerm::leq([(var("dt", k), -1.0)], -req.min_step_duration))
        .collect();
    a.push(LinearTerm::eq([("d_0", 1.0)], req.initial_data_volume));
    a.push(LinearTerm::eq([("u_0", 1.0)], req.initial_uncertainty));
    a.push(LinearTerm::leq([("soc_0", -1.0)], -req.min_soc));
    a.push(LinearTerm::leq([("soc_0", 1.0)], 100.0));
    let g: Vec<LinearTerm> = (1..=steps)
        .map(|k| LinearTerm::leq([(var("soc", k), -1.0)], -req.min_soc))
        .collect();
    Ok(PolyhedralContract::new(
        inputs,
        Vec::<String>::new(),
        TermList::new(a),
        TermList::new(g),
    )?)
}

/// Outcome of one schedulability check.
#[derive(Debug, Clone, Serialize)]
pub struct ScheduleResult {
    pub admissible: bool,
    /// Scenario merged with the requirements; flagged when incompatible.
    #[serde(skip)]
    pub merged: PolyhedralContract,
    /// `(lower, upper)` state of charge at the exit of every step.
    pub soc_bounds: Option<Vec<(f64, f64)>>,
    /// Extremes of the mean exit state of charge.
    pub avg_soc_min: Option<f64>,
    pub avg_soc_max: Option<f64>,
}

/// Merges a scenario with requirements and, when the result is admissible,
/// extracts the state-of-charge envelope.
pub fn check_schedulable(
    scenario: &PolyhedralContract,
    steps: usize,
    requirements: &PolyhedralContract,
) -> Result<ScheduleResult, MissionError> {
    let merged = scenario.merge(requirements)?;
    let admissible = merged.is_compatible() && merged.is_consistent();
    if !admissible {
        return Ok(ScheduleResult {
            admissible,
            merged,
            soc_bounds: None,
            avg_soc_min: None,
            avg_soc_max: None,
        });
    }
    let soc_bounds = (1..=steps)
        .map(|k| merged.get_variable_bounds(&var("soc", k)))
        .collect::<Result<Vec<_>, _>>()?;
    let avg = LinearExpr::from_coeffs(
        (1..=steps).map(|k| (var("soc", k), 1.0 / steps as f64)),
        0.0,
    );
    let avg_soc_min = merged.optimize(&avg, Direction::Min)?.value();
    let avg_soc_max = merged.optimize(&avg, Direction::Max)?.value();
    Ok(ScheduleResult {
        admissible,
        merged,
        soc_bounds: Some(soc_bounds),
        avg_soc_min,
        avg_soc_max,
    })
}

/// Builds the scenario and requirements for `sequence` and checks them.
pub fn schedule(
    sequence: &[TaskKind],
    hyper: &TaskHyperparameters,
    req: &OperationalRequirements,
) -> Result<ScheduleResult, MissionError> {
    let scenario = build_scenario(sequence, hyper)?;
    check_schedulable(
        &scenario,
        sequence.len(),
        &requirements_contract(req, sequence.len())?,
    )
}
