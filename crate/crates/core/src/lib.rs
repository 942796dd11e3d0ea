//! Algebraic entropy of group endomorphisms on concretely represented groups.
//!
//! Groups are oracles over canonical integer codes ([`group::GroupOracle`]).
//! Finite subsets, products and subgroup closures live in [`set`]; trajectories
//! and endomorphisms in [`dynamics`]; the entropy estimators in [`entropy`].

pub mod at;
pub mod dynamics;
pub mod element;
pub mod entropy;
pub mod error;
pub mod group;
pub mod groups;
pub mod kernel;
pub mod permutability;
pub mod set;
pub mod span;

pub use element::{Code, Element, GroupTag};
pub use error::{Error, Result};
pub use group::{AmbientGroup, GroupOracle};
pub use set::{FiniteSubgroup, FiniteSubset};
