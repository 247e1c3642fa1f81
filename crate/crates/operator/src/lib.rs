//! Finite matrix realizations of the operators `A_{P,s,chi}` and `B_R`:
//! the sequence matrix built from shifted zeta values, the Taylor-coefficient
//! matrix of `B_R`, the non-homogeneous example, and the level-`K`
//! residue-class discretization used as a brute-force oracle.

pub mod dd;
mod br;
mod discretize;
mod error;
mod kernel;
mod nonhomog;
mod posi;
mod rational;
mod sequence;
mod truncated;

pub use br::build_br_matrix;
pub use discretize::{discretize_kernel, isotypic_basis, BivariatePoly};
pub use error::OperatorError;
pub use kernel::KernelSpec;
pub use nonhomog::build_nonhomog_matrix;
pub use posi::{det_exact, min_power_matrix};
pub use rational::{build_r_from_profile, poly_roots, PoleTerm, PrincipalPart, ProductForm, RationalR};
pub use sequence::{build_sequence_matrix, ShiftedZetas};
pub use truncated::{Provenance, TruncatedOperator};
