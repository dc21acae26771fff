//! The chapters of the book, one module each, so `cargo test --doc` runs
//! every snippet against the current crates.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/terms.md")]
pub mod terms {}
#[doc = include_str!("../../../book/src/contracts.md")]
pub mod contracts {}
#[doc = include_str!("../../../book/src/composition.md")]
pub mod composition {}
#[doc = include_str!("../../../book/src/quotient.md")]
pub mod quotient {}
#[doc = include_str!("../../../book/src/merge.md")]
pub mod merge {}
#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}
#[doc = include_str!("../../../book/src/mission.md")]
pub mod mission {}
#[doc = include_str!("../../../book/src/aircraft.md")]
pub mod aircraft {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
