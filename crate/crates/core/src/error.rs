use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    /// Population has reached the guard band at the top of the Fock ladder;
    /// results past this point would be truncation artifacts.
    #[error("Fock truncation overflow: population {population:.3e} in the top two levels (n_max = {n_max})")]
    TruncationOverflow { population: f64, n_max: usize },

    #[error("time step too coarse: {0}")]
    StepTooCoarse(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
