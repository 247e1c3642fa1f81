//! Igusa-type local zeta integrals `zeta(Q, chi, s)` over `Z_p^x`, their
//! shifts `Q_m(x) = Q(x p^{-m})`, and the Laurent part of the generating
//! series in `z`.

mod brute;
mod cells;
mod error;
mod profile;
mod ratfunc;

pub use brute::{zeta_bruteforce, BruteForce, BruteForceTable};
pub use cells::{
    decompose, shift_poly, zeta, zeta_exact, zeta_numeric, zeta_shift, Cell, CellKind,
    Decomposition, ZetaMode, ZetaValue,
};
pub use error::ZetaError;
pub use profile::{stabilization_bounds, z0_profile, ZetaProfile};
pub use ratfunc::{QPoly, RatFunc};
