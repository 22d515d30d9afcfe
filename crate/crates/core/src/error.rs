use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Tables with wrong dimensions, out-of-range indices and the like.
    #[error("malformed structure: {0}")]
    Structure(String),

    #[error("{what}: size {actual} exceeds cap {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    /// A search ran out of budget. `found` counts results produced before the
    /// cut-off; they are never returned as if complete.
    #[error("{what}: budget {limit} exhausted after {found} results (partial)")]
    BudgetExhausted {
        what: &'static str,
        limit: u64,
        found: usize,
    },

    #[error("isomorphism search undecided: {0}")]
    Undecided(String),

    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),

    #[error("operation requires a binary Γ-semiring, got arity {0}")]
    NotBinary(usize),

    #[error("operation requires a designated unit on `{0}`")]
    MissingUnit(String),

    #[error("incompatible operands: {0}")]
    Mismatch(String),

    #[error("`{0}` was not built by the triangular construction")]
    NotTriangular(String),

    #[error("module is not classified within the current caps: {0}")]
    Unclassified(String),

    #[error("automorphism cannot be stabilized to a free module within {0} levels")]
    NotStabilizable(usize),

    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),

    /// Base change sent an invertible matrix to a non-invertible one.
    #[error("pushed matrix is not invertible: {0}")]
    NotInvertible(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("not a group: {0}")]
    NotAGroup(String),
}

impl Error {
    /// A cap, budget or undecided search, as opposed to bad input.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::BudgetExhausted { .. } | Error::Undecided(_)
        )
    }
}
