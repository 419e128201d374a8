use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("record too short: {len} samples, need at least {min}")]
    TooShort { len: usize, min: usize },

    #[error("phase undefined: zero amplitude at sample {index}")]
    PhaseUndefined { index: usize },

    #[error("phase under-sampled: jump of {jump:.3} rad at sample {index} exceeds pi/2")]
    UnderSampledPhase { index: usize, jump: f64 },

    #[error(
        "intensity correlation is not Gaussian-consistent at lag {lag} s (radicand {radicand})"
    )]
    NotGaussianConsistent { lag: f64, radicand: f64 },

    #[error("phase-noise integral diverges at the low-frequency end (log-log slope {slope:.2})")]
    DivergentPhaseIntegral { slope: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("Fock truncation overflow: tail mass {tail:e} beyond n = {cutoff}")]
    TruncationOverflow { tail: f64, cutoff: usize },

    #[error("phase-space axes too narrow: grid integrates to {integral}")]
    AxesTooNarrow { integral: f64 },

    #[error("grid not normalized: integrates to {integral}")]
    Unnormalized { integral: f64 },

    #[error("photon distribution tail too heavy: {tail:e} mass beyond the stored range")]
    HeavyTail { tail: f64 },

    #[error("negative marginal {value:e} at x = {x}: grid too coarse")]
    NegativeMarginal { x: f64, value: f64 },

    #[error("g2(0) is undefined for the vacuum state")]
    UndefinedForVacuum,

    #[error("mean photon number is zero")]
    ZeroMeanPhotonNumber,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no arm length satisfies both phase conditions (residual {residual:e} rad)")]
    IncompatiblePhaseConditions { residual: f64 },

    #[error("invalid beam splitter: {0}")]
    InvalidBeamSplitter(String),

    #[error("invalid Bogoliubov map: {0}")]
    InvalidMap(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
