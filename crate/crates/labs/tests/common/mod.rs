#![allow(dead_code)]

use std::collections::BTreeSet;

use contract_forge::{LinearTerm, TermList};
use contract_forge_labs::mission::{
    five_step_sequence, var, viewpoint_chain, Interval, TaskHyperparameters, Viewpoint,
};

/// Three capability sets used by the power chain checks.
pub fn power_chain_instances() -> Vec<TaskHyperparameters> {
    vec![
        TaskHyperparameters::default(),
        TaskHyperparameters {
            dsn_cons: Interval::new(0.4, 0.6),
            chrg_gen: Interval::new(1.0, 2.0),
            ..TaskHyperparameters::default()
        },
        TaskHyperparameters {
            dsn_cons: Interval::new(0.1, 0.15),
            sbo_cons: Interval::new(0.05, 0.1),
            chrg_gen: Interval::new(0.2, 0.5),
            ..TaskHyperparameters::default()
        },
    ]
}

/// Steps `k` whose exit charge carries a single-variable upper bound of 100.
pub fn soc_upper_100_steps(g: &TermList) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for t in g.iter() {
        if t.coeffs().len() != 1 {
            continue;
        }
        let (v, c) = t.coeffs().iter().next().unwrap();
        if *c > 0.0 && (t.bound() / c - 100.0).abs() < 1e-9 {
            if let Some(k) = v.strip_prefix("soc_").and_then(|k| k.parse().ok()) {
                out.insert(k);
            }
        }
    }
    out
}

/// Checks the composed 5-step power chain against the expected power chain structure.
pub fn check_power_chain(hyper: &TaskHyperparameters) -> Result<(), String> {
    let chain = viewpoint_chain(&five_step_sequence(), Viewpoint::Power, hyper)
        .map_err(|e| e.to_string())?;
    let mut expected: Vec<LinearTerm> = (1..=5)
        .map(|k| LinearTerm::leq([(var("dt", k), -1.0)], 0.0))
        .collect();
    expected.push(LinearTerm::leq(
        [("soc_0", -1.0), ("dt_1", hyper.dsn_cons.max)],
        0.0,
    ));
    let expected = TermList::new(expected);
    if !chain.assumptions().equivalent(&expected) {
        return Err(format!(
            "assumptions differ: {:?}",
            contract_forge::render(chain.assumptions())
        ));
    }
    let steps = soc_upper_100_steps(chain.guarantees());
    if steps != BTreeSet::from([2]) {
        return Err(format!(
            "soc <= 100 kept on exits {steps:?}, expected only the CHRG exit 2"
        ));
    }
    let behavior = chain.behavior();
    for k in 1..=5 {
        if !behavior.implies(&LinearTerm::leq([(var("soc", k), 1.0)], 100.0)) {
            return Err(format!("soc_{k} <= 100 is not implied"));
        }
    }
    Ok(())
}
