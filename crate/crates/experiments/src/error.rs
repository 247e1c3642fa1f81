use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Operator(#[from] operator::OperatorError),
    #[error(transparent)]
    Spectral(#[from] spectral::SpectralError),
    #[error(transparent)]
    Zeta(#[from] zeta::ZetaError),
    #[error(transparent)]
    Padic(#[from] padic_core::PadicError),
    #[error(transparent)]
    Function(#[from] qspecial::QError),
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("config: {0}")]
    Config(String),
}

impl ExperimentError {
    /// Parameters outside the domain rather than a numerical failure.
    pub fn is_domain(&self) -> bool {
        use operator::OperatorError as O;
        match self {
            ExperimentError::Invalid(_) | ExperimentError::Config(_) => true,
            ExperimentError::Operator(e) => matches!(e, O::Domain(_) | O::InvalidSpec(_)),
            _ => false,
        }
    }
}
