//! Exact combinatorial linear algebra on the Boolean lattice `2^[v]`.
//!
//! * [`subset`]: Frankl rank, modified standard tableaux, successor and
//!   predecessor along rank chains.
//! * [`chains`]: the rank-chain and complement-chain decompositions of `2^[v]`.
//! * [`inclusion`]: `W_tk`, `W_t̄k`, `W_tk̲` and their diagonal companions.
//! * [`snf`]: Smith normal form with unimodular transforms, p-rank, and the
//!   Wilson diagonal form.
//! * [`solver`]: integral solutions of `W_tk x = b` and signed t-designs.
//! * [`suite`]: the identity checks behind `incmat verify`.

pub mod binom;
pub mod chains;
pub mod error;
pub mod inclusion;
pub mod matrix;
pub mod snf;
pub mod solver;
pub mod subset;
pub mod suite;
pub mod vector;

pub use chains::{Chain, Decomposition, DecompositionKind};
pub use error::{Error, Result};
pub use matrix::ExactMatrix;
pub use snf::SnfDecomposition;
pub use solver::SolveReport;
pub use subset::{Cell, SubsetWord, Tableau};
pub use vector::{IntegerVector, RationalVector};
