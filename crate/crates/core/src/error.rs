use thiserror::Error;

use crate::locus::LocusId;
use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("condition (*) fails for {0}: {lhs} > g", lhs = .1)]
    StarViolated(LocusId, Int),

    #[error("component {index} of the chain for {locus} has genus {genus} <= r - 1")]
    EmptyComponent { locus: LocusId, index: usize, genus: Int },

    #[error("no chain decomposition found for {locus} with component rho in {allowed:?} after {candidates} candidates")]
    NoDecompositionFound {
        locus: LocusId,
        allowed: Vec<Int>,
        candidates: u64,
    },

    #[error("oracle scale exceeded: {0}")]
    OracleScale(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Overflow(_) => "overflow",
            Error::StarViolated(..) => "star-violated",
            Error::EmptyComponent { .. } => "empty-component",
            Error::NoDecompositionFound { .. } => "no-decomposition-found",
            Error::OracleScale(_) => "oracle-scale",
            Error::Internal(_) => "internal",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
