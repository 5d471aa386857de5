use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("budget exceeded: {needed} evaluations needed, cap is {cap}")]
    Budget { needed: u64, cap: u64 },
    #[error("{0} verification check(s) failed")]
    Verify(usize),
    #[error(transparent)]
    Core(mbqc_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl From<mbqc_core::Error> for CliError {
    fn from(e: mbqc_core::Error) -> Self {
        use mbqc_core::Error as E;
        match e {
            E::BudgetExceeded { needed, cap } => CliError::Budget { needed, cap },
            E::InvalidArgument(m) => CliError::Config(m),
            E::BadChainLength(n) => CliError::Config(format!("field `n`: bad chain length {n}")),
            E::InputCount { expected, got } => CliError::Config(format!("expected {expected} input amplitudes, got {got}")),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget { .. } => 3,
            _ => 1,
        }
    }
}
