//! Aircraft fuel and thermal management: component contracts, the system
//! under design, refinement against the loop requirements, grid
//! exploration and tolerance optimization.

mod components;
mod evaluate;
mod explore;
mod model;
mod optimize;

pub use components::{build_sud, make_component, sud_components};
pub use evaluate::{
    close_with_environment, evaluate_instance, make_spec, tolerance_cost, InstanceResult, PENALTY,
};
pub use explore::{
    covering_pairs, explore_grid, two_level_policy, write_explore_outputs, ExploreConfig,
};
pub use model::{
    isa_air_temperature, AircraftError, ComponentKind, HxKind, OperatingPoint, PhysicalConstants,
    ToleranceVector,
};
pub use optimize::{
    nelder_mead_minimize, optimize, write_optimize_output, NelderMeadResult, OptimizeConfig,
    OptimizeReport,
};
