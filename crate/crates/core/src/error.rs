use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed instance: {0}")]
    Syntax(#[from] serde_json::Error),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("self-loop at `{0}`")]
    SelfLoop(String),

    #[error("parallel edge {{{0}, {1}}}")]
    ParallelEdge(String, String),

    #[error("no edge {{{0}, {1}}} in instance")]
    UnknownEdge(String, String),

    #[error("s and t must differ")]
    TerminalsEqual,

    #[error("negative value for `{0}`")]
    Negative(&'static str),

    #[error("edge {{{u}, {v}}}: {reason}")]
    VariantMismatch {
        u: String,
        v: String,
        reason: String,
    },

    #[error("edge {{{0}, {1}}} is missing cost or cap")]
    MissingWeight(String, String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("min cut endpoints must differ")]
    SameEndpoints,

    #[error("cannot merge s with t")]
    MergeTerminals,

    #[error("{what} budget of {limit} exceeded")]
    Budget { what: &'static str, limit: u64 },

    #[error("{solver}: {reason}")]
    Inapplicable {
        solver: &'static str,
        reason: String,
    },

    #[error("invalid tree decomposition: {0}")]
    Decomposition(String),

    #[error("invalid source instance: {0}")]
    Source(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn inapplicable(solver: &'static str, reason: impl Into<String>) -> Self {
        Error::Inapplicable {
            solver,
            reason: reason.into(),
        }
    }

    /// True for errors that mean "try a different solver", as opposed to bad input.
    pub fn is_budget_or_inapplicable(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::Inapplicable { .. })
    }
}
