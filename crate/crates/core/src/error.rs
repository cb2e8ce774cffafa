use std::path::PathBuf;

/// Everything that can go wrong while building or analysing a lattice model.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("{routine} did not converge for a {dim}x{dim} matrix")]
    NonConvergence { routine: &'static str, dim: usize },

    #[error("non-finite entries in {0}")]
    NonFinite(&'static str),

    #[error("matrix exponential overflowed (norm * |t| = {scaled_norm:e})")]
    ExpmOverflow { scaled_norm: f64 },

    #[error("spectrum is not on the unit circle (max | |lambda| - 1 | = {deviation:e})")]
    NotUnimodular { deviation: f64 },

    #[error("generalized Brillouin zone undefined: w + gamma/2 = 0")]
    SingularGbz,

    #[error("gap closes on the contour (|h| = {magnitude:e} at k = {k})")]
    GapClosing { magnitude: f64, k: f64 },

    #[error("winding {value} is not quantized")]
    NotQuantized { value: f64 },

    #[error("eigenvector matrix columns are not unit-normalized (column {column}, norm {norm})")]
    NotNormalized { column: usize, norm: f64 },

    #[error("singular-vector index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("defective propagator: eigenvalue with modulus {0:e}")]
    DefectivePropagator(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    TomlDe(#[from] toml::de::Error),

    #[error(transparent)]
    TomlSer(#[from] toml::ser::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for filesystem failures, including those surfacing through CSV or JSON.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } => true,
            Error::Csv(e) => e.is_io_error(),
            Error::Json(e) => e.is_io(),
            _ => false,
        }
    }

    /// True for failures of the linear-algebra kernels rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::NonFinite(_)
                | Error::ExpmOverflow { .. }
                | Error::NotUnimodular { .. }
                | Error::GapClosing { .. }
                | Error::NotQuantized { .. }
                | Error::DefectivePropagator(_)
        )
    }
}
