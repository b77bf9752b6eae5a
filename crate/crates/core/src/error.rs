use thiserror::Error;

/// Errors produced by validation and numeric routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar field failed its domain check (finite, sign, range).
    #[error("{field} must be {expected}, got {value}")]
    InvalidValue {
        field: &'static str,
        expected: &'static str,
        value: f64,
    },

    /// Normalized timing mismatch outside `[0, 1)`.
    #[error("timing mismatch must lie in [0, 1), got {0}")]
    TauOutOfRange(f64),

    /// Frame length of zero symbols.
    #[error("frame length must be at least 1 symbol")]
    EmptyFrame,

    /// The sampled-matrix path needs `tau` away from 0 and 1, where the
    /// two sample streams coincide and the Gram matrix is singular.
    #[error("tau = {tau} is outside the well-conditioned window [{min}, {max}] of the sampled-matrix path")]
    IllConditionedTau { tau: f64, min: f64, max: f64 },

    /// The sampled-matrix path caps the frame length; closed forms cover
    /// larger frames.
    #[error("frame length {n} exceeds the sampled-matrix cap of {cap} symbols")]
    FrameTooLarge { n: u32, cap: u32 },

    /// A triangular factorization hit a non-positive pivot, so the input
    /// was not positive definite.
    #[error("matrix is not positive definite (pivot {pivot:.3e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    /// Characteristic-root computation requires strictly positive SNRs.
    #[error("SNR must be strictly positive, got {0}")]
    NonPositiveSnr(f64),

    /// `Q = 2 tau (1 - tau)` argument outside `[0, 0.5]`.
    #[error("Q must lie in [0, 0.5], got {0}")]
    QOutOfRange(f64),

    /// The power solver divides by these gains; zero is unusable.
    #[error("channel gain {field} must be strictly positive for the power solver")]
    DegenerateChannel { field: &'static str },

    /// Scenario weights must form a convex combination.
    #[error("weights must satisfy omega_s + omega_r = 1 (within 1e-12), got {0}")]
    WeightSum(f64),

    /// Brute-force grid step too coarse to be a meaningful oracle.
    #[error("p2 grid step {step} exceeds 1e-3 * ps_max = {limit}")]
    StepTooCoarse { step: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
