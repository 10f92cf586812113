use thiserror::Error;

/// Every failure the library can report.
///
/// Variants map onto the CLI exit codes through [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("vector length {0} is not a perfect square")]
    NonSquareDim(usize),
    #[error("dimension {dim} exceeds the configured maximum {max}")]
    DimOverflow { dim: usize, max: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("singular value decomposition did not converge")]
    SvdFailure,
    #[error("eigendecomposition failed: {0}")]
    EigFailure(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown Hamiltonian term `{0}`")]
    UnknownTerm(String),
    #[error("unknown local operator `{0}`")]
    UnknownOperator(String),
    #[error("site {site} outside the chain 1..={l}")]
    SiteOutOfRange { site: usize, l: usize },
    #[error("could not read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    ParseError(String),
    #[error("schema error at {pointer}: {message}")]
    SchemaError { pointer: String, message: String },

    #[error("no decaying mode: the whole spectrum is steady")]
    NoDecayingMode,
    #[error("steady manifold has dimension {0}; a unique steady state is required")]
    DegenerateSteadyManifold(usize),
    #[error("probe state σ0 + c·σ1 is not positive for any c ≥ {0:e}")]
    ProbeInfeasible(f64),
    #[error("trace distance {d_at_tmax:.3e} at t_max = {t_max:.3e} still exceeds η")]
    NotConverged { d_at_tmax: f64, t_max: f64 },
    #[error("Liouvillian gap {0:e} is not positive")]
    NonpositiveGap(f64),

    #[error("dissipators are not supported on the chain boundary")]
    NotBoundaryGeometry,
    #[error("dissipators do not cover every site")]
    NotBulkGeometry,
    #[error("Lindblad operators are not a commuting Hermitian set")]
    NotCommutingKSet,
    #[error("boundary coupling commutes with the dissipators: second-order decay rates vanish")]
    NoFastMixingMechanism,
    #[error("basis is not orthonormal (deviation {0:.3e})")]
    NonOrthonormalBasis(f64),
    #[error("scaling fit needs at least 3 distinct sizes, got {0}")]
    InsufficientPoints(usize),
}

impl Error {
    pub(crate) fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::SchemaError {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Io { .. } | ParseError(_) | SchemaError { .. } | UnknownTerm(_) | UnknownOperator(_)
            | SiteOutOfRange { .. } => 2,
            SvdFailure | EigFailure(_) | NotConverged { .. } => 3,
            _ => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
