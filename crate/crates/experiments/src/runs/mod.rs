mod mahler;
mod noroots;
mod rank1;

pub use mahler::{run_mahler, MahlerParams};
pub use noroots::{run_noroots, NorootsParams};
pub use rank1::{rank_one_perturbation_matrix, run_rank1_perturbation, Rank1Params};
mod z0const;
pub use z0const::{
    beta_closed_form, degenerate_r, fourier_abs_power, little_jacobi_zeros, run_z0_constant, run_z0_degenerate,
    DegenerateParams, Z0ConstantParams,
};
mod chi;
pub use chi::{run_chi_nontrivial, ChiParams};
mod generic;
pub use generic::{run_generic_r, GenericParams, GENERIC_SHAPES};
mod union;
pub use union::{run_union_over_chi, UnionParams};
mod posi;
pub use posi::{min_power_det_closed_form, run_posi, PosiParams};
mod zeta_grid;
pub use zeta_grid::{grid_polys, run_zeta_agreement, ZetaGridParams};
