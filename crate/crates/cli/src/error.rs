use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// 2 for configuration errors, 3 for everything that aborts a valid run.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Resource(_) | CliError::Io(_) | CliError::Numerical(_) => 3,
        }
    }
}

impl From<geonet::Error> for CliError {
    fn from(e: geonet::Error) -> Self {
        use geonet::Error as E;
        match e {
            E::InvalidDomain(_)
            | E::InvalidParameter { .. }
            | E::DimensionMismatch { .. }
            | E::Unsupported(_) => CliError::Config(e.to_string()),
            E::ResourceLimit(_) => CliError::Resource(e.to_string()),
            E::Quadrature { .. } | E::Bracket(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
