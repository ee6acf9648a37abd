use discord_core::DiscordError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] DiscordError),
}

impl CliError {
    /// Internal consistency failures count as check failures; everything
    /// else is an input problem.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(DiscordError::Consistency(_)) => 1,
            _ => 2,
        }
    }
}
