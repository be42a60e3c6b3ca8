use std::fmt;

/// Failure reported on stderr as `error kind=<kind> message=<message>`.
#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    /// 2 for configuration and input problems, 3 for numerical failures.
    pub exit_code: u8,
}

impl CliError {
    pub fn config(kind: &str, message: impl Into<String>) -> Self {
        Self { kind: kind.into(), message: message.into(), exit_code: 2 }
    }

    pub fn numeric(kind: &str, message: impl Into<String>) -> Self {
        Self { kind: kind.into(), message: message.into(), exit_code: 3 }
    }
}

impl From<optomech::Error> for CliError {
    fn from(e: optomech::Error) -> Self {
        let code = if e.is_input_error() { 2 } else { 3 };
        Self { kind: e.kind().into(), message: e.to_string(), exit_code: code }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // One line, so newlines in messages are flattened.
        write!(f, "error kind={} message={}", self.kind, self.message.replace('\n', " "))
    }
}

pub type CliResult<T> = Result<T, CliError>;
