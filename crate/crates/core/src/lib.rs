//! Simulation and analysis of quantum noiseless block coding.
//!
//! * [`quantum`]: dense complex states and operators, Hermitian
//!   eigendecomposition and von Neumann entropy.
//! * [`source`]: signal ensembles and two-subspace decomposable sources.
//! * [`split`]: membership strings, the entropy decomposition
//!   `S(ρ) = H(X) + P1 S(ρ1) + P2 S(ρ2)` and the non-orthogonality gap.
//! * [`codec`]: Huffman block coding of membership strings.
//! * [`typical`]: majority-species typical subspaces, their exact
//!   dimensions and block-coding fidelities.
//! * [`search`]: q-ary resource accounting and the zero-waste search
//!   `q^M = D_Λ`.
//! * [`pipeline`] and [`cli`]: the end-to-end hybrid compression run and the
//!   `qnc` command line.

// Negated float comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod codec;
mod error;
pub mod format;
pub mod pipeline;
pub mod quantum;
pub mod search;
pub mod source;
pub mod split;
pub mod typical;

pub use error::{Error, Result};
