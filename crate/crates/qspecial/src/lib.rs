//! q-special functions: q-Pochhammer symbols, the Jacobi theta product,
//! basic hypergeometric series and their cleared (entire) forms, the
//! Hahn-Exton function `J`, and the confluent functions `E` and `K`.
//!
//! Everything is evaluated in binary64 and returned as an [`Approx`] with
//! an error estimate.

mod base;
mod confluent;
mod handle;
mod hyper;
mod poch;
mod series;
mod solutions;

pub use base::{Approx, QBase, QError, C64, DEFAULT_EPS};
pub use confluent::{e_func, e_func_series, e_func_theta, k_mahler, k_mahler_terms};
pub use handle::EntireFunctionHandle;
pub use hyper::{
    basic_phi, basic_phi_terms, cleared_bailey, hahn_exton_j, phi_tilde_2_1, poly_coeffs, watson_rhs,
    Variant,
};
pub use poch::{qpoch, qpoch_inf, qpochhammer, theta, PochLen};
pub use series::{sum_series, SeriesControl};
pub use solutions::{phi_solution, PhiSolution};
