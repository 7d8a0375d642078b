use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("fit failure: residual norm {residual:.6e} exceeds ceiling {ceiling:.6e}")]
    FitFailure { residual: f64, ceiling: f64 },

    #[error("layout error: {0}")]
    Layout(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("empty region: {0}")]
    EmptyRegion(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("{} does not exist", .0.display())]
    MissingFile(PathBuf),

    #[error("unknown material `{0}`")]
    UnknownMaterial(String),

    #[error("i/o error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short machine-readable tag, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Degenerate(_) => "degenerate",
            Error::Quadrature(_) => "quadrature",
            Error::FitFailure { .. } => "fit-failure",
            Error::Layout(_) => "layout",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::Range(_) => "range",
            Error::EmptyRegion(_) => "empty-region",
            Error::Schema(_) => "schema",
            Error::MissingFile(_) => "missing-file",
            Error::UnknownMaterial(_) => "unknown-material",
            Error::Io { .. } => "io",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
