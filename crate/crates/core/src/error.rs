use thiserror::Error;

/// Errors raised by the analytic, optimization and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SrfError {
    /// A closed form was evaluated outside the set where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Coincident points or a zero-length edge.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// Index bounds or cardinalities that violate a structural contract.
    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("no feasible lattice point in the scanned window")]
    EmptyFeasibleSet,

    #[error("{method} did not converge within {budget} {unit}")]
    NonConvergence {
        method: &'static str,
        budget: usize,
        unit: &'static str,
    },

    /// Newton iteration collapsed onto the spurious root cos(omega) = 1.
    #[error("iteration landed on the degenerate root cos(omega) = 1")]
    DegenerateRoot,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("cross-check failure between {left} and {right}: {detail}")]
    CrossCheckFailure {
        left: &'static str,
        right: &'static str,
        detail: String,
    },
}

impl SrfError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        SrfError::Domain(msg.into())
    }

    pub(crate) fn spec(msg: impl Into<String>) -> Self {
        SrfError::Spec(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, SrfError>;
