use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Fock cutoff {n_max} too small: truncated tail mass {tail:.3e} (limit 1e-10)")]
    CutoffTooSmall { n_max: usize, tail: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystem(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("time step {dt:.3e} too large: {reason}")]
    StepTooLarge { dt: f64, reason: String },

    #[error("unphysical coherence factor |x| = {0} > 1")]
    UnphysicalCoherence(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
