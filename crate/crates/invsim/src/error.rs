use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{quantity} = {value} is outside the supported range {range}")]
    Domain {
        quantity: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("singularity: {0}")]
    Singular(String),

    #[error("vertical flight at t = {t} s: horizontal speed {speed} m/s is below the guard")]
    VerticalFlight { t: f64, speed: f64 },

    #[error("series of length {got} is too short, at least {needed} samples are required")]
    TooShort { needed: usize, got: usize },

    #[error("integration failed at t = {t} s (stage {stage}): {source}")]
    Integration {
        t: f64,
        stage: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input data: {0}")]
    Data(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Numerical failures map to exit code 2, everything else is an input problem.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::Singular(_)
                | Error::VerticalFlight { .. }
                | Error::Integration { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
