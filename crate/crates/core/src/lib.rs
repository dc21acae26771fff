#![doc = include_str!("../README.md")]

pub mod contract;
pub mod parser;
pub mod polyhedral;
pub mod tolerance;

pub use contract::{
    ContractError, IncompatibilityDiagnostic, PolyhedralContract, RefinementReport,
};
pub use parser::{parse_constraint, parse_constraints, parse_expr, render, ParseError};
pub use polyhedral::{Direction, LinearExpr, LinearTerm, Relation, TermList, VarName};
