//! Exact p-adic arithmetic over `Q`: valuations, absolute values, polynomial
//! behaviour on residue classes, and Dirichlet-type characters of `Z_p^x`.

mod character;
mod error;
mod poly;
mod prime;
mod valuation;

pub use character::{enumerate_characters, primitive_root, root_of_unity, CharacterDescriptor, UnitCharacter};
pub use error::PadicError;
pub use poly::{
    derivative, eval_poly, normalize_integral, poly_abs_on_cell, rational_poly, CellOutcome,
    RootCell,
};
pub use prime::Prime;
pub use valuation::{abs_p, valuation, valuation_int, ExtInt, PAdicRational};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
