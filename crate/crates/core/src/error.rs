use thiserror::Error;

pub type Result<T> = std::result::Result<T, MixError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MixError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid time control: {0}")]
    InvalidTimeControl(String),

    #[error("invalid species table: {0}")]
    InvalidSpecies(String),

    #[error("invalid regime parameters: {0}")]
    InvalidRegime(String),

    #[error("non-positive density {value:e} for species {species} at node {node}")]
    NonPositiveDensity { species: usize, node: usize, value: f64 },

    #[error("non-positive temperature {0:e}")]
    NonPositiveTemperature(f64),

    #[error("zero collision frequency with positive lambda for pair ({s}, {k}) at node {node}")]
    ZeroFrequencyDivision { s: usize, k: usize, node: usize },

    #[error("negative mixing temperature {value:e} for pair ({s}, {k}) at node {node}")]
    NegativeMixingTemperature { s: usize, k: usize, node: usize, value: f64 },

    #[error("singular linear system (pivot {0:e})")]
    SingularSystem(f64),

    #[error("negative temperature {value:e} for species {species} at node {node}")]
    NegativeTemperature { species: usize, node: usize, value: f64 },

    #[error("unsupported reconstruction degree {0} (expected 2 or 4)")]
    UnsupportedDegree(usize),

    #[error("BDF history mismatch: {0}")]
    HistoryMismatch(String),

    #[error("vacuum or non-physical hydrodynamic state at node {node}")]
    VacuumState { node: usize },

    #[error("time step {dt:e} exceeds the stability limit {limit:e}")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("non-finite state after step {step}")]
    NonFinite { step: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("reference row has zero L1 norm")]
    ZeroReference,

    #[error("configuration error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl MixError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        MixError::Config { path: path.into(), message: message.into() }
    }

    /// True for errors caused by user input rather than by the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            MixError::Config { .. }
                | MixError::InvalidGrid(_)
                | MixError::InvalidTimeControl(_)
                | MixError::InvalidSpecies(_)
                | MixError::InvalidRegime(_)
                | MixError::UnsupportedDegree(_)
        )
    }
}

impl From<std::io::Error> for MixError {
    fn from(e: std::io::Error) -> Self {
        MixError::Io(e.to_string())
    }
}
