use thiserror::Error;

/// Failures of a CLI run, each mapped to a process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unparseable or out-of-domain configuration (exit 2).
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical procedure missed its tolerance, or an oracle check failed (exit 3).
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) | Self::Io { .. } => 2,
            Self::Numerical(_) => 3,
        }
    }
}

impl From<sgcell::Error> for CliError {
    fn from(e: sgcell::Error) -> Self {
        match e {
            sgcell::Error::Accuracy { .. } => Self::Numerical(e.to_string()),
            other => Self::Config(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_error_kind() {
        let accuracy = sgcell::Error::Accuracy {
            context: "Gil-Pelaez integral".into(),
            estimate: 0.5,
            error_bound: 1e-3,
        };
        let e = CliError::from(accuracy);
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains("Gil-Pelaez integral"));
        assert_eq!(CliError::from(sgcell::Error::Domain("eta".into())).exit_code(), 2);
    }
}
