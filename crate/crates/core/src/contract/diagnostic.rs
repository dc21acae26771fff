use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::parser::{render, render_with, Precision};
use crate::polyhedral::{TermList, VarName};

/// Assumption terms that could not be discharged by upstream guarantees.
#[derive(Debug, Clone, PartialEq)]
pub struct IncompatibilityDiagnostic {
    pub failed_terms: TermList,
    pub context_terms: TermList,
    pub variables: BTreeSet<VarName>,
    /// Where the failure happened, when a caller adds it (e.g. a mission step).
    pub location: Option<String>,
}

/// Serialized form of [`IncompatibilityDiagnostic`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticJson {
    pub variables: Vec<VarName>,
    pub failed_terms: Vec<String>,
    pub context_terms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    pub message: String,
}

impl IncompatibilityDiagnostic {
    pub fn with_location(mut self, location: impl Into<String>) -> Self {
        self.location = Some(location.into());
        self
    }

    pub fn to_json(&self) -> DiagnosticJson {
        DiagnosticJson {
            variables: self.variables.iter().cloned().collect(),
            failed_terms: render_with(&self.failed_terms, Precision::Full),
            context_terms: render_with(&self.context_terms, Precision::Full),
            location: self.location.clone(),
            message: self.to_string(),
        }
    }
}

impl fmt::Display for IncompatibilityDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.variables.iter().map(|v| format!("'{v}'")).collect();
        write!(
            f,
            "Could not eliminate variables [{}] by refining the assumptions\n[\n",
            vars.join(", ")
        )?;
        for line in render(&self.failed_terms) {
            writeln!(f, "    {line}")?;
        }
        writeln!(f, "]\nusing guarantees\n[")?;
        for line in render(&self.context_terms) {
            writeln!(f, "    {line}")?;
        }
        write!(f, "]")?;
        if let Some(loc) = &self.location {
            write!(f, "\nat {loc}")?;
        }
        Ok(())
    }
}
