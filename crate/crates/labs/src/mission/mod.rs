//! Spacecraft task scheduling: per-viewpoint task contracts, scenario
//! composition, schedulability against operational requirements and
//! Latin-hypercube sweeps.

mod lhs;
mod model;
mod scenario;
mod sweep;
mod templates;

pub use lhs::latin_hypercube_sample;
pub use model::{
    five_step_sequence, twenty_step_sequence, Interval, MissionError, OperationalRequirements,
    TaskHyperparameters, TaskKind, Viewpoint,
};
pub use scenario::{
    build_scenario, check_schedulable, requirements_contract, schedule, viewpoint_chain,
    ScheduleResult,
};
pub use sweep::{
    run_sweep, score, write_outputs, HyperRanges, MeanDev, RequirementRanges, SweepConfig,
    SweepReport, SweepRow,
};
pub use templates::{task_viewpoint_contract, var};
