//! Zero-sum combinatorics over the metacyclic groups `C_n ⋊_s C_2`.
//!
//! - [`group`]: parameter validation and Cayley tables for `C_n ⋊_s C_2` and `C_m`.
//! - [`sequence`], [`notation`]: multisets of group elements and their text form.
//! - [`product`]: exact product sets `π(S)`, `Π(S)` and product-one freeness.
//! - [`search`]: pruned depth-first search over product-one free multisets.
//! - [`davenport`]: the small Davenport constant.
//! - [`classifier`]: the extremal families and their exhaustive verification.
//! - [`factorization`]: the splitting `n = n₁n₂` or `2n₁n₂` and its CRT projection.
//! - [`cyclic_lemma`]: certificate checks for long zero-sum free sequences in `C_m`.

pub mod classifier;
pub mod cyclic_lemma;
pub mod davenport;
pub mod error;
pub mod factorization;
pub mod group;
pub mod notation;
pub mod product;
pub mod search;
pub mod sequence;

pub use error::{ClassifierError, GroupError, LemmaError, ProductError, SequenceError};
pub use group::{Group, GroupClass, GroupElement, GroupSpec, MetacyclicKind, MetacyclicParams};
pub use product::{ElementSet, ProductReport, DEFAULT_STATE_BUDGET};
pub use search::SearchOptions;
pub use sequence::Sequence;
