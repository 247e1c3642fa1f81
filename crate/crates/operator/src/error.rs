use thiserror::Error;
use zeta::ZetaError;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("outside the convergence domain: {0}")]
    Domain(String),
    #[error("invalid kernel: {0}")]
    InvalidSpec(String),
    #[error("unmarked pole at z = {0} inside the disk |z| <= {1}")]
    UnmarkedPole(String, f64),
    #[error("marked pole at z = {0} outside the disk |z| < {1}")]
    MarkedTooFar(String, f64),
    #[error("pole of order >= 2 at z = {0}")]
    MultiplePole(String),
    #[error("marked-pole count {found} differs from the expected {expected}")]
    MarkedCount { expected: usize, found: usize },
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Padic(#[from] padic_core::PadicError),
}
