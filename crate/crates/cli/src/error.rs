use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] brouwer::Error),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 config, 3 guard, 4 verification, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) if e.is_guard() => 3,
            CliError::Verification(_) => 4,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        let guard = brouwer::Error::CriticalInclination {
            distance: 0.0,
            guard: 1e-3,
        };
        assert_eq!(CliError::from(guard).exit_code(), 3);
        assert_eq!(CliError::Verification("H03/beta4".into()).exit_code(), 4);
        assert_eq!(CliError::from(brouwer::Error::Integration("x".into())).exit_code(), 1);
    }
}
