//! Finite algebras with a designated binary `wedge` and ternary `d`: terms and
//! identities, congruences and commutators, recognition of semilattices of
//! Mal'cev blocks, and the term constructions around weak near-unanimity
//! operations.
//!
//! Everything here is `no_std` with `alloc`; the universe of an algebra of
//! size `n` is always `{0, .., n-1}`.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod chains;
pub mod classify;
pub mod commutator;
pub mod congruence;
pub mod constructions;
pub mod criteria;
pub mod error;
pub mod identity;
pub mod partition;
pub mod polynomial;
pub mod regular;
pub mod relation;
pub mod smb;
pub mod subpower;
pub mod term;
pub mod transform;
pub mod wnu;

pub use algebra::{FiniteAlgebra, OperationTable, Tuples};
pub use error::{Error, Result};
pub use identity::{Identity, Quasiidentity, Verdict};
pub use partition::Partition;
pub use relation::Relation;
pub use smb::{MALCEV, WEDGE};
pub use subpower::GeneratedSet;
pub use term::{Node, Term};
