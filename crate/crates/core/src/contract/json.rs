use serde::{Deserialize, Serialize};

use super::{ContractError, PolyhedralContract};
use crate::parser::{render_with, Precision};

/// The contract file format: variable lists and constraint strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractJson {
    #[serde(default)]
    pub input_vars: Vec<String>,
    #[serde(default)]
    pub output_vars: Vec<String>,
    #[serde(default)]
    pub assumptions: Vec<String>,
    #[serde(default)]
    pub guarantees: Vec<String>,
}

impl ContractJson {
    pub fn to_contract(&self) -> Result<PolyhedralContract, ContractError> {
        PolyhedralContract::from_strings(
            &self.input_vars,
            &self.output_vars,
            &self.assumptions,
            &self.guarantees,
        )
    }
}

impl PolyhedralContract {
    /// The file form, with full-precision numbers.
    pub fn to_json(&self) -> ContractJson {
        ContractJson {
            input_vars: self.inputs.clone(),
            output_vars: self.outputs.clone(),
            assumptions: render_with(&self.assumptions, Precision::Full),
            guarantees: render_with(&self.guarantees, Precision::Full),
        }
    }

    pub fn from_json(json: &ContractJson) -> Result<Self, ContractError> {
        json.to_contract()
    }

    /// Parses the file form from a JSON string.
    pub fn from_json_str(src: &str) -> Result<Self, ContractError> {
        let json: ContractJson = serde_json::from_str(src)
            .map_err(|e| ContractError::Interface(format!("invalid contract JSON: {e}")))?;
        json.to_contract()
    }
}
