use std::fmt;

use contract_forge::ContractError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A spacecraft task. TCM is modeled as its heating and delta-v phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TaskKind {
    Dsn,
    Sbo,
    TcmH,
    TcmDv,
    Chrg,
}

impl TaskKind {
    pub const ALL: [TaskKind; 5] = [
        TaskKind::Dsn,
        TaskKind::Sbo,
        TaskKind::TcmH,
        TaskKind::TcmDv,
        TaskKind::Chrg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Dsn => "DSN",
            TaskKind::Sbo => "SBO",
            TaskKind::TcmH => "TCM_H",
            TaskKind::TcmDv => "TCM_DV",
            TaskKind::Chrg => "CHRG",
        }
    }

    /// Parses task names; "TCM" expands to TCM_H followed by TCM_DV.
    pub fn parse_sequence<S: AsRef<str>>(names: &[S]) -> Result<Vec<TaskKind>, MissionError> {
        let mut out = Vec::new();
        for name in names {
            match name.as_ref().trim().to_ascii_uppercase().as_str() {
                "DSN" => out.push(TaskKind::Dsn),
                "SBO" => out.push(TaskKind::Sbo),
                "CHRG" => out.push(TaskKind::Chrg),
                "TCM_H" => out.push(TaskKind::TcmH),
                "TCM_DV" => out.push(TaskKind::TcmDv),
                "TCM" => out.extend([TaskKind::TcmH, TaskKind::TcmDv]),
                other => return Err(MissionError::Config(format!("unknown task '{other}'"))),
            }
        }
        if out.is_empty() {
            return Err(MissionError::Config("task sequence is empty".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The canonical 5-step sequence.
pub fn five_step_sequence() -> Vec<TaskKind> {
    vec![
        TaskKind::Dsn,
        TaskKind::Chrg,
        TaskKind::Sbo,
        TaskKind::TcmH,
        TaskKind::TcmDv,
    ]
}

/// The 5-step sequence repeated four times.
pub fn twenty_step_sequence() -> Vec<TaskKind> {
    five_step_sequence().repeat(4)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Viewpoint {
    Power,
    Science,
    Nav,
}

impl Viewpoint {
    pub const ALL: [Viewpoint; 3] = [Viewpoint::Power, Viewpoint::Science, Viewpoint::Nav];
}

impl fmt::Display for Viewpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Viewpoint::Power => "power",
            Viewpoint::Science => "science",
            Viewpoint::Nav => "navigation",
        })
    }
}

/// A closed range `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub min: f64,
    pub max: f64,
}

impl Interval {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.min + self.max)
    }
}

/// Capability ranges of every task, in % per second unless noted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskHyperparameters {
    pub dsn_cons: Interval,
    pub sbo_cons: Interval,
    pub tcm_h_cons: Interval,
    pub tcm_dv_cons: Interval,
    pub chrg_gen: Interval,
    /// Downlink rate draining onboard storage.
    pub dsn_rate: Interval,
    /// Science data generation rate.
    pub sbo_sgen: Interval,
    /// Uncertainty injected per DSN instance, in %.
    pub dsn_noise: Interval,
    /// Uncertainty injected per CHRG instance, in %.
    pub chrg_noise: Interval,
    pub tcm_dv_noise: Interval,
    /// Uncertainty reduction rate; a negative minimum allows deterioration.
    pub sbo_imp: Interval,
    /// Trajectory progress rate.
    pub tcm_dv_imp: Interval,
}

impl TaskHyperparameters {
    /// The twelve ranges in a fixed order.
    pub fn ranges(&self) -> [(&'static str, Interval); 12] {
        [
            ("dsn_cons", self.dsn_cons),
            ("sbo_cons", self.sbo_cons),
            ("tcm_h_cons", self.tcm_h_cons),
            ("tcm_dv_cons", self.tcm_dv_cons),
            ("chrg_gen", self.chrg_gen),
            ("dsn_rate", self.dsn_rate),
            ("sbo_sgen", self.sbo_sgen),
            ("dsn_noise", self.dsn_noise),
            ("chrg_noise", self.chrg_noise),
            ("tcm_dv_noise", self.tcm_dv_noise),
            ("sbo_imp", self.sbo_imp),
            ("tcm_dv_imp", self.tcm_dv_imp),
        ]
    }

    /// Builds the ranges from the order of [`TaskHyperparameters::ranges`].
    pub fn from_ranges(r: [Interval; 12]) -> Self {
        Self {
            dsn_cons: r[0],
            sbo_cons: r[1],
            tcm_h_cons: r[2],
            tcm_dv_cons: r[3],
            chrg_gen: r[4],
            dsn_rate: r[5],
            sbo_sgen: r[6],
            dsn_noise: r[7],
            chrg_noise: r[8],
            tcm_dv_noise: r[9],
            sbo_imp: r[10],
            tcm_dv_imp: r[11],
        }
    }

    pub fn validate(&self) -> Result<(), MissionError> {
        for (name, r) in self.ranges() {
            if !(r.min.is_finite() && r.max.is_finite()) || r.min > r.max {
                return Err(MissionError::Config(format!(
                    "{name}: invalid range [{}, {}]",
                    r.min, r.max
                )));
            }
            if r.min < 0.0 && name != "sbo_imp" {
                return Err(MissionError::Config(format!(
                    "{name}: range must be non-negative"
                )));
            }
        }
        Ok(())
    }
}

impl Default for TaskHyperparameters {
    fn default() -> Self {
        Self {
            dsn_cons: Interval::new(0.2, 0.3),
            sbo_cons: Interval::new(0.1, 0.2),
            tcm_h_cons: Interval::new(0.05, 0.1),
            tcm_dv_cons: Interval::new(0.2, 0.3),
            chrg_gen: Interval::new(0.5, 1.0),
            dsn_rate: Interval::new(0.5, 1.0),
            sbo_sgen: Interval::new(0.3, 0.6),
            dsn_noise: Interval::new(1.0, 3.0),
            chrg_noise: Interval::new(1.0, 3.0),
            tcm_dv_noise: Interval::new(0.05, 0.1),
            sbo_imp: Interval::new(-0.1, 0.5),
            tcm_dv_imp: Interval::new(0.1, 0.3),
        }
    }
}

/// Constraints on the entry and exit variables of a schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperationalRequirements {
    /// Lowest allowed state of charge, in %.
    pub min_soc: f64,
    /// Shortest allowed step, in seconds.
    pub min_step_duration: f64,
    /// Onboard science storage at the start, in %.
    pub initial_data_volume: f64,
    /// Trajectory estimation uncertainty at the start, in %.
    pub initial_uncertainty: f64,
}

impl OperationalRequirements {
    pub fn values(&self) -> [f64; 4] {
        [
            self.min_soc,
            self.min_step_duration,
            self.initial_data_volume,
            self.initial_uncertainty,
        ]
    }
}

impl Default for OperationalRequirements {
    fn default() -> Self {
        Self {
            min_soc: 70.0,
            min_step_duration: 15.0,
            initial_data_volume: 80.0,
            initial_uncertainty: 60.0,
        }
    }
}

#[derive(Debug, Error)]
pub enum MissionError {
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
