//! Exact exponential-time algorithms for k-Set Cover built from tensor
//! decompositions.
//!
//! The crate is layered bottom-up:
//!
//! * [`ring`]: prime fields, extension fields, truncated ε-polynomials and
//!   exact rationals.
//! * [`tensor`]: dense matrices and order-3 tensors, Kronecker and Kruskal
//!   products, flattenings, rank/border-rank witnesses and the three-way
//!   partitioning tensors `P` and `Q`.
//! * [`yates`]: Kronecker-structured matrix-vector products.
//! * [`subsetconv`]: subset convolution and three-way partition counting
//!   through the border decomposition of `P`.
//! * [`broken`]: the block-restricted ("broken") partitioner over
//!   `P^⊗p ⊗ Q^⊗dq` and its random-permutation wrapper.
//! * [`setcover`]: the reduction from k-Set Cover to three-way partitioning,
//!   plus the classic dynamic-programming baseline.

pub mod broken;
pub mod error;
pub mod format;
pub mod numeric;
pub mod ring;
pub mod seed;
pub mod setcover;
pub mod subsetconv;
pub mod tensor;
pub mod yates;

pub use error::{Error, Result};
