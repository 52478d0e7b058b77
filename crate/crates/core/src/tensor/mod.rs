//! Dense matrices and order-3 tensors over a [`Ring`](crate::ring::Ring),
//! the product operations between them, and witnesses of (border) rank and
//! tightness.

mod decomp;
mod matrix;
pub mod partition;
mod tensor3;
mod tight;

pub use decomp::{
    kruskal, trivial_rank_decomposition, verify_border_decomposition, verify_rank_decomposition,
    BorderDecomposition, RankDecomposition,
};
pub use matrix::{kronecker_mat, rank_over_field, Matrix};
pub use partition::{border_p_factors, border_p_factors_like, build_p, build_p_power, build_q, build_q_power};
pub use tensor3::{flatten, is_concise, kronecker_t3, punch_holes, Axis, Tensor3};
pub use tight::{find_tightness_witness, TightnessWitness, DEFAULT_TIGHTNESS_BOUND};
