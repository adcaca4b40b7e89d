use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("log-likelihood is -inf at theta = {theta}: outcome {outcome} was observed but has zero probability")]
    NonFiniteLikelihood { theta: f64, outcome: usize },

    #[error("model is degenerate at theta = {theta}: only {support} outcome(s) carry probability")]
    DegenerateModel { theta: f64, support: usize },

    #[error("likelihood is flat (spread {spread:e} over the scan)")]
    FlatLikelihood { spread: f64 },

    #[error("theta = {theta} lies outside the parameter domain [{lo}, {hi}]")]
    OutOfDomain { theta: f64, lo: f64, hi: f64 },

    #[error("data has {got} outcome counts but the model has {expected} outcomes")]
    DataMismatch { expected: usize, got: usize },

    #[error("data set is empty or has invalid counts")]
    InvalidData,

    #[error("invalid grid [{start}, {end}] with {len} points")]
    InvalidGrid { start: f64, end: f64, len: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid slit geometry: {0}")]
    InvalidGeometry(String),

    #[error("phase jumps by {jump:.3} rad between grid points {index} and {next}", next = index + 1)]
    PhaseUnwrapFailure { index: usize, jump: f64 },

    #[error("invalid Fock input: {0}")]
    InvalidInput(String),

    #[error("representation dimension {dim} exceeds the cap of {cap}")]
    SizeLimit { dim: usize, cap: usize },

    #[error("posterior vanished after update (integral {integral:e})")]
    ZeroPosterior { integral: f64 },

    #[error("{failures} of {trials} trials failed (limit 1%): {first}")]
    TooManyFailures { failures: usize, trials: usize, first: String },

    #[error("invalid trial configuration: {0}")]
    InvalidConfig(String),
}
