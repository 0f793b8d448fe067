use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot convert {from} to {to}: incompatible dimensions")]
    DimensionMismatch { from: String, to: String },

    #[error("resonant lossless evaluation at omega = {omega} (zero damping on a real pole)")]
    ResonantLossless { omega: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sum-over-states model has no transitions")]
    EmptyTransitions,

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("bare Green function vanishes at omega = {omega}; dressing is not invertible")]
    NonInvertibleBare { omega: f64 },

    #[error("singular local-field factor: 2ε + 1 = 0 at omega = {omega}")]
    SingularLocalField { omega: f64 },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions: \
         estimate {estimate_re} + {estimate_im}i, error {error}"
    )]
    QuadratureNotConverged {
        estimate_re: f64,
        estimate_im: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("root search failed: {0}")]
    RootNotFound(String),

    #[error("{stage} failed at omega = {omega}: {source}")]
    Stage {
        stage: &'static str,
        omega: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn at_stage(self, stage: &'static str, omega: f64) -> Error {
        Error::Stage {
            stage,
            omega,
            source: Box::new(self),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Error {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
