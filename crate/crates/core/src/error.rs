use thiserror::Error;

/// Errors raised across the crate.
///
/// The variants split into two families: [`Error::is_numeric`] reports
/// whether a failure came from a numerical procedure (root finding,
/// quadrature, sampling) rather than from invalid input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("not a vertex: ({0}, {1})")]
    NotAVertex(i64, i64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular configuration: {0}")]
    SingularConfiguration(String),
    #[error("ordering violation: {0}")]
    OrderingViolation(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("point lies on the amoeba: {0}")]
    InsideAmoeba(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("mesh disagreement at ({0}, {1}): {2}")]
    MeshDisagreement(i64, i64, String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Numeric(_) | Error::InsideAmoeba(_) | Error::VerificationFailed(_)
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegeneratePolygon(_) => "degenerate_polygon",
            Error::NotAVertex(..) => "not_a_vertex",
            Error::InvalidInput(_) => "invalid_input",
            Error::SingularConfiguration(_) => "singular_configuration",
            Error::OrderingViolation(_) => "ordering_violation",
            Error::CapExceeded(_) => "cap_exceeded",
            Error::VerificationFailed(_) => "verification_failed",
            Error::InsideAmoeba(_) => "inside_amoeba",
            Error::Numeric(_) => "numeric",
            Error::MeshDisagreement(..) => "mesh_disagreement",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
