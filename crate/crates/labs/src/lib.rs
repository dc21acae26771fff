//! Design studies built on polyhedral contracts: spacecraft task
//! schedulability and aircraft fuel/thermal-management exploration.

pub mod aircraft;
pub mod mission;
mod svg;
