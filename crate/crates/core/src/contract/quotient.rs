use std::collections::BTreeSet;

use super::{interface, ContractError, PolyhedralContract};
use crate::polyhedral::VarName;

impl PolyhedralContract {
    /// The contract of the missing component that, composed downstream
    /// of `part`, refines `self`.
    ///
    /// The result's inputs are the outputs of `part` plus the top-level inputs
    /// `part` does not read; its outputs are the remaining top-level outputs.
    /// The result is checked by composing it with `part` and testing
    /// refinement against `self`.
    pub fn quotient(&self, part: &Self) -> Result<Self, ContractError> {
        let top_vars: BTreeSet<VarName> = self
            .input_set()
            .union(&self.output_set())
            .cloned()
            .collect();
        if let Some(v) = part.inputs.iter().find(|v| !top_vars.contains(*v)) {
            return Err(interface(format!(
                "input {v} of the partial implementation is not part of the top-level contract"
            )));
        }
        let part_outputs = part.output_set();
        let part_inputs = part.input_set();
        let mut inputs: Vec<VarName> = part.outputs.clone();
        inputs.extend(
            self.inputs
                .iter()
                .filter(|v| !part_inputs.contains(*v) && !part_outputs.contains(*v))
                .cloned(),
        );
        let outputs: Vec<VarName> = self
            .outputs
            .iter()
            .filter(|v| !part_outputs.contains(*v))
            .cloned()
            .collect();
        let input_set: BTreeSet<VarName> = inputs.iter().cloned().collect();
        let interface_set: BTreeSet<VarName> = inputs.iter().chain(&outputs).cloned().collect();

        let a_raw = self.assumptions.concat(&part.guarantees);
        let a_drop = a_raw.vars().difference(&input_set).cloned().collect();
        let assumptions = a_raw.eliminate(&a_drop)?;

        let g_raw = self
            .guarantees
            .concat(&part.guarantees)
            .concat(&part.assumptions);
        let g_drop = g_raw.vars().difference(&interface_set).cloned().collect();
        let guarantees = g_raw
            .eliminate_unreduced(&g_drop)?
            .reduce_in_context(&assumptions);

        let q = PolyhedralContract::new(inputs, outputs, assumptions, guarantees)?;
        let report = part.compose(&q)?.refines(self)?;
        if !report.refines {
            return Err(ContractError::QuotientUnsound {
                violated: report.violated_lines(),
            });
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contract(i: &[&str], o: &[&str], a: &[&str], g: &[&str]) -> PolyhedralContract {
        PolyhedralContract::from_strings(i, o, a, g).unwrap()
    }

    #[test]
    fn missing_downstream_component() {
        let top = contract(&["i"], &["o_p"], &["|i| <= 1"], &["o_p - 2i = 1"]);
        let part = contract(&["i"], &["o"], &["|i| <= 2"], &["o - 2i = 0"]);
        let q = top.quotient(&part).unwrap();
        assert_eq!(q.inputs(), &["o".to_string()]);
        assert_eq!(q.outputs(), &["o_p".to_string()]);
        let expected = contract(&["o"], &["o_p"], &["|o| <= 2"], &["o_p - o = 1"]);
        assert!(q.assumptions().equivalent(expected.assumptions()));
        assert!(q.guarantees().equivalent(expected.guarantees()));
        assert!(part.compose(&q).unwrap().refines(&top).unwrap().refines);
    }

    #[test]
    fn dividing_by_an_identity() {
        let top = contract(&["i"], &["o_p"], &["|i| <= 1"], &["o_p - 2i = 1"]);
        let id = contract(&["i"], &["j"], &[], &["j - i = 0"]);
        let q = top.quotient(&id).unwrap();
        let back = q
            .renamed_with(|v| if v == "j" { "i".into() } else { v.into() })
            .unwrap();
        assert!(back.equivalent(&top));
    }

    #[test]
    fn foreign_inputs_are_rejected() {
        let top = contract(&["i"], &["o_p"], &[], &[]);
        let part = contract(&["z"], &["o"], &[], &[]);
        assert!(matches!(
            top.quotient(&part),
            Err(ContractError::Interface(_))
        ));
    }
}
