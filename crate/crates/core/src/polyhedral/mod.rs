//! Linear terms, polyhedra and the LP-backed queries over them.

mod eliminate;
mod lp;
mod reduce;
pub mod simplex;
mod term;
mod termlist;

pub use eliminate::EXPLOSION_LIMIT;
pub use lp::{
    default_solver, is_implied, is_satisfiable, lp_optimize, lp_optimize_with, Direction, LpOutcome,
};
pub use simplex::{DenseSimplex, LpSolver, LpStatus};
pub use term::{is_valid_var_name, LinearExpr, LinearTerm, Relation, VarName};
pub use termlist::{ExplosionError, InfeasibleRegion, TermList};
