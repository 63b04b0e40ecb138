use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("digraph is not balanced: edge {0} -> {1} closes a cycle with nonzero net orientation")]
    NotBalanced(usize, usize),

    #[error("{what} needs {needed} units, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("paths have different heights ({0} vs {1})")]
    HeightMismatch(i64, i64),

    #[error("path {0} is not minimal")]
    NotMinimal(String),

    #[error("no common minimal path of length <= {0}")]
    SearchExhausted(usize),

    #[error("invalid special tree: {0}")]
    InvalidSpec(String),

    #[error("vertex set mixes levels: E-neighbourhoods need a subset of A or of B")]
    MixedLevels,

    #[error("invalid pin {0} -> {1}")]
    InvalidPin(usize, usize),

    #[error("identity system pins one class to two different values")]
    InconsistentPins,

    #[error("operation is not a weak near-unanimity operation")]
    NotWnu,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("operation arity {arity} exceeds the arity budget {budget}")]
    ArityBudgetExceeded { arity: u128, budget: u128 },

    #[error("construction stuck: {0}")]
    ConstructionStuck(String),

    #[error("vertices of the set are not at a common template distance from {0}")]
    DistanceNotUniform(usize),

    #[error("nothing found: {0}")]
    NoneFound(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::ArityBudgetExceeded { .. }
        )
    }
}
