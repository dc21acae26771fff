use serde::Serialize;

use super::{interface, ContractError, PolyhedralContract};
use crate::parser::{render_with, Precision};
use crate::polyhedral::TermList;

/// Outcome of a refinement check `self ≤ other`.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementReport {
    pub refines: bool,
    /// Assumptions of the refining contract not implied by the other's assumptions.
    pub violated_assumptions: TermList,
    /// Guarantees of the refined contract not implied by its assumptions and
    /// the refining contract's guarantees.
    pub violated_guarantees: TermList,
}

/// Serialized form of [`RefinementReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementJson {
    pub refines: bool,
    pub violated_assumptions: Vec<String>,
    pub violated_guarantees: Vec<String>,
}

impl RefinementReport {
    pub fn violated_lines(&self) -> Vec<String> {
        render_with(
            &self.violated_assumptions.concat(&self.violated_guarantees),
            Precision::Display,
        )
    }

    pub fn to_json(&self) -> RefinementJson {
        RefinementJson {
            refines: self.refines,
            violated_assumptions: render_with(&self.violated_assumptions, Precision::Full),
            violated_guarantees: render_with(&self.violated_guarantees, Precision::Full),
        }
    }
}

impl PolyhedralContract {
    /// Whether `self` refines `other`: it accepts at least the environments of
    /// `other` and promises at least as much under them.
    ///
    /// Every variable of `other` must appear in `self` with the same role.
    pub fn refines(&self, other: &Self) -> Result<RefinementReport, ContractError> {
        for v in &other.inputs {
            if !self.inputs.contains(v) {
                return Err(interface(format!(
                    "input {v} of the refined contract is not an input of the refining one"
                )));
            }
        }
        for v in &other.outputs {
            if !self.outputs.contains(v) {
                return Err(interface(format!(
                    "output {v} of the refined contract is not an output of the refining one"
                )));
            }
        }
        let violated_assumptions: TermList = self
            .assumptions
            .iter()
            .filter(|t| !other.assumptions.implies(t))
            .cloned()
            .collect();
        let context = other.assumptions.concat(&self.guarantees);
        let violated_guarantees: TermList = other
            .guarantees
            .iter()
            .filter(|t| !context.implies(t))
            .cloned()
            .collect();
        Ok(RefinementReport {
            refines: violated_assumptions.is_empty() && violated_guarantees.is_empty(),
            violated_assumptions,
            violated_guarantees,
        })
    }
}
