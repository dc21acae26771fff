//! Assume-guarantee contracts over polyhedral constraints.

mod compose;
mod diagnostic;
mod json;
mod merge;
mod quotient;
mod refine;
mod transform;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use diagnostic::IncompatibilityDiagnostic;
pub use json::ContractJson;
pub use refine::RefinementReport;
pub use transform::{transform_sufficient, DischargeFailure};

use crate::parser::{parse_constraints, render, ParseError};
use crate::polyhedral::{
    is_valid_var_name, Direction, ExplosionError, InfeasibleRegion, LinearExpr, LpStatus, TermList,
    VarName,
};

/// Errors raised by contract construction and the algebra.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContractError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("interface error: {0}")]
    Interface(String),
    #[error("{0}")]
    Incompatible(Box<IncompatibilityDiagnostic>),
    #[error("quotient unsound: the composition does not refine the top-level contract; violated terms {violated:?}")]
    QuotientUnsound { violated: Vec<String> },
    #[error(transparent)]
    Infeasible(#[from] InfeasibleRegion),
    #[error(transparent)]
    Explosion(#[from] ExplosionError),
}

impl ContractError {
    /// The diagnostic, if this is a discharge failure.
    pub fn diagnostic(&self) -> Option<&IncompatibilityDiagnostic> {
        match self {
            ContractError::Incompatible(d) => Some(d),
            _ => None,
        }
    }
}

impl From<IncompatibilityDiagnostic> for ContractError {
    fn from(d: IncompatibilityDiagnostic) -> Self {
        ContractError::Incompatible(Box::new(d))
    }
}

/// Result of [`PolyhedralContract::optimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Optimum {
    Value(f64),
    Unbounded,
}

impl Optimum {
    pub fn value(self) -> Option<f64> {
        match self {
            Optimum::Value(v) => Some(v),
            Optimum::Unbounded => None,
        }
    }
}

/// A contract `(A, G)` with declared input and output variables.
///
/// Assumptions mention inputs only; guarantees mention inputs and outputs.
/// Compatibility (satisfiable `A`) and consistency (satisfiable `A ∪ G`) are
/// computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralContract {
    inputs: Vec<VarName>,
    outputs: Vec<VarName>,
    assumptions: TermList,
    guarantees: TermList,
    compatible: bool,
    consistent: bool,
}

fn interface(msg: impl Into<String>) -> ContractError {
    ContractError::Interface(msg.into())
}

impl PolyhedralContract {
    /// Builds a contract, checking the interface invariants.
    pub fn new<S: Into<VarName>>(
        inputs: impl IntoIterator<Item = S>,
        outputs: impl IntoIterator<Item = S>,
        assumptions: TermList,
        guarantees: TermList,
    ) -> Result<Self, ContractError> {
        let inputs: Vec<VarName> = inputs.into_iter().map(Into::into).collect();
        let outputs: Vec<VarName> = outputs.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for v in inputs.iter().chain(&outputs) {
            if !is_valid_var_name(v) {
                return Err(interface(format!("invalid variable name '{v}'")));
            }
            if !seen.insert(v.as_str()) {
                return Err(interface(format!(
                    "variable {v} is declared more than once"
                )));
            }
        }
        let input_set: BTreeSet<&str> = inputs.iter().map(String::as_str).collect();
        let output_set: BTreeSet<&str> = outputs.iter().map(String::as_str).collect();
        for t in &assumptions {
            for v in t.vars() {
                if output_set.contains(v.as_str()) {
                    return Err(interface(format!(
                        "assumption '{t}' mentions output variable {v}"
                    )));
                }
                if !input_set.contains(v.as_str()) {
                    return Err(interface(format!(
                        "assumption '{t}' mentions undeclared variable {v}"
                    )));
                }
            }
        }
        for t in &guarantees {
            for v in t.vars() {
                if !input_set.contains(v.as_str()) && !output_set.contains(v.as_str()) {
                    return Err(interface(format!(
                        "guarantee '{t}' mentions undeclared variable {v}"
                    )));
                }
            }
        }
        let compatible = assumptions.is_satisfiable();
        let consistent = compatible && assumptions.concat(&guarantees).is_satisfiable();
        Ok(Self {
            inputs,
            outputs,
            assumptions,
            guarantees,
            compatible,
            consistent,
        })
    }

    /// Builds a contract from constraint strings.
    pub fn from_strings<S: AsRef<str>>(
        inputs: &[S],
        outputs: &[S],
        assumptions: &[S],
        guarantees: &[S],
    ) -> Result<Self, ContractError> {
        let a = parse_constraints(assumptions)?;
        let g = parse_constraints(guarantees)?;
        Self::new(
            inputs.iter().map(|s| s.as_ref().to_string()),
            outputs.iter().map(|s| s.as_ref().to_string()),
            a,
            g,
        )
    }

    pub fn inputs(&self) -> &[VarName] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[VarName] {
        &self.outputs
    }

    pub fn assumptions(&self) -> &TermList {
        &self.assumptions
    }

    pub fn guarantees(&self) -> &TermList {
        &self.guarantees
    }

    /// Assumptions are satisfiable.
    pub fn is_compatible(&self) -> bool {
        self.compatible
    }

    /// Assumptions together with guarantees are satisfiable.
    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    pub fn input_set(&self) -> BTreeSet<VarName> {
        self.inputs.iter().cloned().collect()
    }

    pub fn output_set(&self) -> BTreeSet<VarName> {
        self.outputs.iter().cloned().collect()
    }

    pub fn has_var(&self, v: &str) -> bool {
        self.inputs.iter().chain(&self.outputs).any(|x| x == v)
    }

    /// `A ∪ G`.
    pub fn behavior(&self) -> TermList {
        self.assumptions.concat(&self.guarantees)
    }

    /// Range of `var` over `A ∪ G`.
    pub fn get_variable_bounds(&self, var: &str) -> Result<(f64, f64), ContractError> {
        if !self.has_var(var) {
            return Err(interface(format!(
                "variable {var} is not part of the contract"
            )));
        }
        Ok(self.behavior().var_bounds(var)?)
    }

    /// Optimizes a linear objective over `A ∪ G`.
    pub fn optimize(
        &self,
        objective: &LinearExpr,
        direction: Direction,
    ) -> Result<Optimum, ContractError> {
        if let Some(v) = objective.vars().find(|v| !self.has_var(v)) {
            return Err(interface(format!(
                "objective mentions {v}, which is not part of the contract"
            )));
        }
        let outcome = self.behavior().optimize(objective, direction);
        match outcome.status {
            LpStatus::Optimal => Ok(Optimum::Value(outcome.value.expect("optimal value"))),
            LpStatus::Unbounded => Ok(Optimum::Unbounded),
            LpStatus::Infeasible => Err(InfeasibleRegion.into()),
        }
    }

    /// Renames variables; names missing from `map` are kept.
    pub fn renamed(&self, map: &BTreeMap<VarName, VarName>) -> Result<Self, ContractError> {
        let rename = |v: &VarName| map.get(v).cloned().unwrap_or_else(|| v.clone());
        Self::new(
            self.inputs.iter().map(rename),
            self.outputs.iter().map(rename),
            self.assumptions.renamed(map),
            self.guarantees.renamed(map),
        )
    }

    /// Renames every variable through `f`.
    pub fn renamed_with(&self, f: impl Fn(&str) -> String) -> Result<Self, ContractError> {
        let map = self
            .inputs
            .iter()
            .chain(&self.outputs)
            .map(|v| (v.clone(), f(v)))
            .collect();
        self.renamed(&map)
    }

    /// Same interface (as sets) and mutual refinement.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.input_set() == other.input_set()
            && self.output_set() == other.output_set()
            && self.refines(other).is_ok_and(|r| r.refines)
            && other.refines(self).is_ok_and(|r| r.refines)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, label: &str, terms: &TermList) -> fmt::Result {
    writeln!(f, "{label}: [")?;
    for line in render(terms) {
        writeln!(f, "    {line}")?;
    }
    write!(f, "]")
}

impl fmt::Display for PolyhedralContract {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "InVars: [{}]", self.inputs.join(", "))?;
        writeln!(f, "OutVars:[{}]", self.outputs.join(", "))?;
        write_terms(f, "A", &self.assumptions)?;
        writeln!(f)?;
        write_terms(f, "G", &self.guarantees)
    }
}
