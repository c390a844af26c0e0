use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("unsupported coefficient: the integral {integral} leaves the time-function algebra")]
    UnsupportedCoefficient { integral: String },
    #[error("generators belong to different algebras ({0} vs {1})")]
    FlavorMismatch(String, String),
    #[error("zero generator")]
    ZeroGenerator,
    #[error("not a basis element: {0}")]
    NotBasis(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("linearly dependent generators")]
    Dependent,
    #[error("insufficient grid: {0}")]
    Grid(String),
    #[error("poisson solve did not converge: {0}")]
    Poisson(String),
    #[error("degenerate projection: amplitude {0:e} below threshold")]
    DegenerateProjection(f64),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
