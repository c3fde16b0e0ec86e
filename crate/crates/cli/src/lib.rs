//! Command implementations behind the `arrlab` binary.

pub mod case;
pub mod commands;
pub mod selftest;

/// Errors surfaced to the user, mapped to process exit codes: input problems
/// exit with 2, verification failures with 1.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Verification(msg) => write!(f, "verification failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<arrlab::Error> for CliError {
    fn from(e: arrlab::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// What a subcommand hands back to `main`: a human rendering, a JSON value,
/// and whether the run counts as a verification failure (exit code 1).
pub struct CommandOutput {
    pub human: String,
    pub json: serde_json::Value,
    pub verification_failed: bool,
}

impl CommandOutput {
    pub fn ok(human: String, json: serde_json::Value) -> Self {
        CommandOutput {
            human,
            json,
            verification_failed: false,
        }
    }
}
