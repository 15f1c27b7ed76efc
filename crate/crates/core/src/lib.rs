//! Clause-set toolkit: hardness measures, prime implicates via doping,
//! SMU trees of deficiency one, DNF translations, trigger hypergraphs and
//! benchmark generation.

pub mod bench;
pub mod cnf;
pub mod dimacs;
pub mod error;
pub mod limits;
pub mod mps;
pub mod reductions;
pub mod smu;
pub mod translations;
pub mod trigger;

pub use cnf::{Clause, ClauseSet, Lit, MultiClauseSet, PartialAssignment, Var};
pub use error::{Error, Result};
pub use limits::Limits;
