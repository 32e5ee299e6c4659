//! Monodromy groups of composite covers of the projective line.
//!
//! Given concrete permutation data for a tower of covers — a cyclic
//! unramified cover of prime degree `q` over a totally ramified cover of
//! odd prime degree `p` — this crate computes and classifies the Galois
//! group of the composite cover's Galois closure: exact orders, the
//! elementary abelian core and its rank, the block action of degree `p`,
//! the semidirect decomposition, the solvable/Galois criteria, and the
//! identification of the block image within the classification of simple
//! transitive groups of prime degree. Riemann–Hurwitz genus arithmetic is
//! done exactly, and a bounded search enumerates further towers sharing a
//! given local monodromy element.

pub mod arith;
pub mod classify;
pub mod cover;
pub mod format;
pub mod group;
pub mod perm;
pub mod pipeline;
pub mod report;
pub mod search;
pub mod structure;

pub use group::{GroupError, PermutationGroup, Subgroup};
pub use perm::{parse_cycles, CycleType, PermError, Permutation};
