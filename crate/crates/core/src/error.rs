use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("no equilibria exist for |E| = {energy} > 1")]
    NoEquilibria { energy: f64 },

    #[error("step size underflow at tau = {tau} (h = {step:e})")]
    StepSizeUnderflow { tau: f64, step: f64 },

    #[error("orbit truncated near theta = {theta} while still moving (target {target})")]
    IndeterminateTerminal { theta: f64, target: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("gamma function pole at {0}")]
    PoleError(f64),

    #[error("gamma = {gamma} is within tolerance of a barrier threshold")]
    DegenerateThreshold { gamma: f64 },

    #[error("expected {expected} roots, found {found}")]
    CountMismatch { expected: usize, found: usize },

    #[error("{family} entry {index}: tridiagonal value {ikebe} disagrees with bisection value {bisection}")]
    ValidationFailure { family: &'static str, index: usize, ikebe: f64, bisection: f64 },

    #[error("energy {energy} is within 1e-6 of the continuum")]
    EnergyTooCloseToContinuum { energy: f64 },

    #[error("no bracket for winding {winding}: both ends classified as {classification}")]
    BracketFailure { winding: u32, classification: &'static str },

    #[error("gamma = {gamma} sits on threshold value {threshold}")]
    ThresholdDegenerate { gamma: f64, threshold: f64 },

    #[error("density is not normalizable: {0}")]
    NonNormalizable(String),

    #[error("root tables end at {limit}, too short for gamma = {gamma}")]
    TableTooShort { gamma: f64, limit: f64 },

    #[error("energies not strictly increasing at winding {winding}")]
    OrderingViolation { winding: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
