use tailbound_core::Error;

/// Failures of a command, each with a fixed process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Range(String),
    #[error("{0}")]
    Class(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Oracle(String),
    #[error("{0}")]
    NoWitness(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Range(_) => 3,
            CliError::Class(_) => 4,
            CliError::Data(_) => 5,
            CliError::Oracle(_) => 6,
            CliError::NoWitness(_) => 7,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidInterval(_)
            | Error::InvalidMoment(_)
            | Error::InvalidParameter(_)
            | Error::InvalidCount(_) => CliError::Input(msg),
            Error::OutOfTheoremRange(_) => CliError::Range(msg),
            Error::InvalidClassQuery(_) => CliError::Class(msg),
            Error::InvalidMixture(_) => CliError::Data(msg),
            Error::OracleInconclusive(_) => CliError::Oracle(msg),
            Error::NoWitness(_) => CliError::NoWitness(msg),
        }
    }
}
