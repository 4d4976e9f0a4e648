//! Computational toolkit for permutation groups, permutational wreath
//! products, and finite-state automorphisms of rooted trees.
//!
//! The crate has three layers:
//!
//! * [`perm`], [`wreath`] — finite permutation groups with brute-force
//!   enumeration, and arithmetic in `(A, X) ≀ H` with a finite base group.
//! * [`pscert`], [`construct`] — a decision procedure for the PS condition
//!   on finite permutation groups, certificate verification, and the
//!   element constructions (generating set `S`, the `t`/`u` elements,
//!   commutator and k-th-power tails) that witness generation of the
//!   wreath product, each checked by exact multiplication.
//! * [`automaton`], [`portrait`] — invertible Mealy machines as
//!   finite-state tree automorphisms (sections, activity counts, growth
//!   classification) and depth-truncated portraits with the level parity
//!   functional and the square obstruction.
//!
//! [`suite`] bundles the deterministic verification battery exposed by
//! the CLI's `suite` subcommand.

pub mod automaton;
pub mod construct;
pub mod perm;
pub mod portrait;
pub mod pscert;
pub mod suite;
pub mod wreath;

pub use automaton::MealyAutomorphism;
pub use construct::{Instance, LConditionData};
pub use perm::{Permutation, PermutationGroup};
pub use portrait::Portrait;
pub use pscert::{PsWitness, SteeringElement};
pub use wreath::{FiniteGroup, WreathElement, WreathProduct};
