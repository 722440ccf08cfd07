use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The trial state has (numerically) zero norm.
    #[error("degenerate ansatz: normalization {norm:e} is not positive")]
    DegenerateState { norm: f64 },

    #[error("basis dimension {dim} exceeds the cap of {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("symmetric eigensolver did not converge (dimension {dim})")]
    EigenFailure { dim: usize },

    #[error("ground energy not converged before the dimension cap (n_max = {n_max}, last change {last_change:e})")]
    NoConvergence { n_max: usize, last_change: f64 },

    #[error("Fock truncation n_max = {n_max} too small for the trial state (tail mass {tail:e})")]
    TruncationTooSmall { n_max: usize, tail: f64 },

    #[error("oracle self-check failed: energy {eigenvalue} vs reassembled {reassembled}")]
    SelfCheck { eigenvalue: f64, reassembled: f64 },

    #[error("every start collapsed into the degenerate corner of the ansatz")]
    AllStartsDegenerate,
}
