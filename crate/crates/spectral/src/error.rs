use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("QR iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("winding number {value} on |u| = {radius} is not an integer after refinement")]
    NonIntegralWinding { radius: f64, value: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resonant poles: {0}")]
    Resonance(String),
    #[error(transparent)]
    Function(#[from] qspecial::QError),
}
