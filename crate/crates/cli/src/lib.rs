//! Orchestration for the `adapt` and `eval-qs` binaries: configuration
//! layering, the full adaptation pipeline, report writing, and the
//! structural-quality metric.

pub mod config;
pub mod qs;
pub mod report;
pub mod run;

/// Errors carry the process exit code: 2 for input/validation problems,
/// 3 for a donor test that does not replay (or whose assertions fail) on the
/// donor app.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    DonorReplay(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::DonorReplay(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::DonorReplay(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

impl std::error::Error for CliError {}

impl From<testadapt::Error> for CliError {
    fn from(e: testadapt::Error) -> Self {
        match e {
            testadapt::Error::DonorNotReplayable { .. }
            | testadapt::Error::DonorAssertionFailed { .. } => CliError::DonorReplay(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
