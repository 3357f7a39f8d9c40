//! Compositional distributional semantics for relative clauses.
//!
//! The library couples a pregroup grammar engine (types with iterated
//! adjoints and planar cup reductions) to a tensor semantics in which
//! every structural map is a spider of a basis Frobenius algebra.
//! Relative pronouns — including possessive `whose` in subject and
//! object roles — are wired from spiders and an ownership map rather
//! than stored as giant tensors, and clause meanings come out of either
//! closed-form composers or explicit contraction networks.
//!
//! The crate also ships two concrete instantiations (a truth-theoretic
//! model over a universe of individuals and its set-theoretic shadow)
//! and a small corpus pipeline with an evaluation harness for
//! term/description classification.

pub mod error;
pub mod eval;
pub mod functor;
pub mod pipeline;
pub mod predicate;
pub mod pregroup;
pub mod tensor;
pub mod truth;

pub use error::{Error, Result};
