//! Dense eigenvalues in double-double precision, truncated Fredholm
//! determinants, the q-Wronskian and M-matrix characteristic functions of
//! `B_R`, argument-principle zero finding and spectrum matching.

mod charfn;
pub use operator::dd;
mod eigen;
mod error;
mod fredholm;
mod matching;
mod scalar;
mod zeros;

pub use charfn::{m_matrix, m_matrix_char_fn, small_det, wronski_char_fn, CharFnResult, PoleData};
pub use eigen::{eigenvalues, eigenvalues_with, Precision, Spectrum};
pub use error::SpectralError;
pub use fredholm::fredholm_det_truncated;
pub use matching::{match_spectra, MatchReport, MatchedPair};
pub use scalar::Scalar;
pub use zeros::{find_zeros, FoundZero, ZeroSet};
