use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("angle {0} rad is outside the canonical range [-2pi, 2pi]")]
    AngleOutOfRange(f64),

    #[error("invalid lattice [{x_min}, {x_max}]: need x_min <= 0 <= x_max")]
    InvalidLattice { x_min: i64, x_max: i64 },

    #[error("amplitude would leave the open lattice at site {site}")]
    BoundaryOverflow { site: i64 },

    #[error("dense operator dimension {dim} exceeds the limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },

    #[error("initial coin state is not normalized: |alpha|^2 + |beta|^2 = {0}")]
    NotNormalized(f64),

    #[error("noise strength P = {0} is outside [0, 0.5]")]
    InvalidNoiseStrength(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("negative determinant {0:e} in reduced coin matrix")]
    NegativeDeterminant(f64),

    #[error("operation requires uniform coin profiles")]
    NonUniformProfile,

    #[error("ring size {0} must be even and at least 32")]
    InvalidRingSize(usize),

    #[error("density operator invalid: {0}")]
    InvalidDensity(String),

    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("config error in {field}: {message}")]
    Config { field: String, message: String },

    #[error("cell ({axis1} = {v1}, {axis2} = {v2}) failed: {source}")]
    Cell {
        axis1: String,
        v1: f64,
        axis2: String,
        v2: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for failures of the numerical kernels, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NoConvergence { .. }
            | Error::NotHermitian(_)
            | Error::NegativeDeterminant(_)
            | Error::InvalidDensity(_)
            | Error::BoundaryOverflow { .. } => true,
            Error::Cell { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
