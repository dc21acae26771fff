use std::collections::BTreeSet;

use super::{
    interface, transform_sufficient, ContractError, IncompatibilityDiagnostic, PolyhedralContract,
};
use crate::polyhedral::{TermList, VarName};

impl PolyhedralContract {
    /// Series composition, eliminating every connected variable.
    pub fn compose(&self, other: &Self) -> Result<Self, ContractError> {
        self.compose_keeping(other, &BTreeSet::new())
    }

    /// Series composition; connected variables in `keep` stay as outputs.
    ///
    /// The upstream contract is the one whose outputs feed the other. Its
    /// guarantees discharge the downstream assumptions that mention its
    /// outputs; the connected variables are then projected out of the
    /// combined guarantees.
    pub fn compose_keeping(
        &self,
        other: &Self,
        keep: &BTreeSet<VarName>,
    ) -> Result<Self, ContractError> {
        let o1 = self.output_set();
        let o2 = other.output_set();
        if let Some(v) = o1.intersection(&o2).next() {
            return Err(interface(format!(
                "variable {v} is an output of both contracts"
            )));
        }
        let feeds_other = o1.iter().any(|v| other.inputs.contains(v));
        let fed_by_other = o2.iter().any(|v| self.inputs.contains(v));
        if feeds_other && fed_by_other {
            return Err(interface("composition would create a feedback loop"));
        }
        let (up, down) = if fed_by_other {
            (other, self)
        } else {
            (self, other)
        };

        let up_outputs = up.output_set();
        let internal: BTreeSet<VarName> = down
            .inputs
            .iter()
            .filter(|v| up_outputs.contains(*v) && !keep.contains(*v))
            .cloned()
            .collect();
        let all_outputs: Vec<VarName> = up.outputs.iter().chain(&down.outputs).cloned().collect();
        let mut inputs: Vec<VarName> = Vec::new();
        for v in up.inputs.iter().chain(&down.inputs) {
            if !all_outputs.contains(v) && !inputs.contains(v) {
                inputs.push(v.clone());
            }
        }
        let outputs: Vec<VarName> = all_outputs
            .into_iter()
            .filter(|v| !internal.contains(v))
            .collect();

        let mut assumptions = up.assumptions.clone();
        let mut failed = TermList::empty();
        let mut failed_vars = BTreeSet::new();
        for t in down.assumptions.iter() {
            if !t.vars().any(|v| up_outputs.contains(v)) {
                assumptions.push(t.clone());
                continue;
            }
            match transform_sufficient(t, &up_outputs, &up.guarantees) {
                Ok(terms) => terms.into_iter().for_each(|s| assumptions.push(s)),
                Err(failure) => {
                    failed_vars.extend(failure.vars);
                    failed.push(failure.term);
                }
            }
        }
        if !failed.is_empty() {
            return Err(IncompatibilityDiagnostic {
                failed_terms: failed,
                context_terms: up.guarantees.clone(),
                variables: failed_vars,
                location: None,
            }
            .into());
        }
        let assumptions = assumptions.reduce();
        let guarantees = up
            .guarantees
            .concat(&down.guarantees)
            .eliminate_unreduced(&internal)?
            .reduce_in_context(&assumptions);
        PolyhedralContract::new(inputs, outputs, assumptions, guarantees)
    }
}
