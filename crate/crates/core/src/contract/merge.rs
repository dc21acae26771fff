use super::{ContractError, PolyhedralContract};
use crate::polyhedral::VarName;

impl PolyhedralContract {
    /// Conjunction of two viewpoints of the same component.
    ///
    /// A variable that is an input of one contract and an output of the other
    /// becomes an output; shared outputs appear once. When the joint assumptions are unsatisfiable the
    /// result is returned unreduced and flagged incompatible.
    pub fn merge(&self, other: &Self) -> Result<Self, ContractError> {
        let mut outputs: Vec<VarName> = self.outputs.clone();
        outputs.extend(
            other
                .outputs
                .iter()
                .filter(|v| !self.outputs.contains(*v))
                .cloned(),
        );
        let mut inputs: Vec<VarName> = Vec::new();
        for v in self.inputs.iter().chain(&other.inputs) {
            if !outputs.contains(v) && !inputs.contains(v) {
                inputs.push(v.clone());
            }
        }
        let a_raw = self.assumptions.concat(&other.assumptions);
        let g_raw = self.guarantees.concat(&other.guarantees);
        let (assumptions, guarantees) = if a_raw.is_satisfiable() {
            let a = a_raw.reduce();
            let g = g_raw.reduce_in_context(&a);
            (a, g)
        } else {
            (a_raw, g_raw)
        };
        PolyhedralContract::new(inputs, outputs, assumptions, guarantees)
    }
}
