use thiserror::Error;

use crate::cnf::{Lit, Var};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An input is larger than the configured desk-scale limit allows.
    #[error("{what}: size {actual} exceeds the configured limit {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    /// A search or saturation ran out of its work budget.
    #[error("{what}: budget of {budget} exhausted")]
    BudgetExceeded { what: &'static str, budget: usize },
    #[error("clause-set is satisfiable")]
    NotUnsatisfiable,
    #[error("clause-set is not saturated minimally unsatisfiable of deficiency 1: {0}")]
    NotSmu1(String),
    #[error("clause-set is not a hitting clause-set")]
    NotHitting,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("variable {0} does not label any node of the tree")]
    VariableNotPresent(Var),
    #[error("leaf set must not be empty")]
    EmptyLeafSet,
    #[error("leaf {leaf} has depth {depth}, but depth at least {required} is required")]
    DepthPrecondition {
        leaf: usize,
        depth: usize,
        required: usize,
    },
    #[error("clause contains complementary literals {lit} and {neg}", lit = .0, neg = .0.complement())]
    Tautology(Lit),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
