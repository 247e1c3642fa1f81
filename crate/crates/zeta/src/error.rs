use padic_core::PadicError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZetaError {
    #[error("constant term of Q must be 1")]
    ConstantTerm,
    #[error("cell subdivision exceeded depth {0}; Q has a multiple root on the units")]
    MultipleRoot(u32),
    #[error("s = {0} outside the convergence half-plane Re(s) > {1}")]
    Domain(String, f64),
    #[error("exact mode needs the trivial character")]
    ExactNeedsTrivial,
    #[error("Q is constant; no stabilization bounds")]
    Degenerate,
    #[error(transparent)]
    Padic(#[from] PadicError),
}
