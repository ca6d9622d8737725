//! Exact monomial integrals over the Haar measure of `U(n)` and over the unit
//! hypersphere.
//!
//! Two independent evaluators are provided for unitary moments
//! `∫ dU  U*_{I J} U_{K L}`:
//!
//! * [`weingarten`] evaluates any moment by the character sum over the
//!   symmetry groups of the index sets, either symbolically in `n` or at a
//!   fixed matrix size;
//! * [`invariant`] gives closed forms (fan, Z, exchange, degree-3 and X
//!   integrals) obtained from Haar invariance and unitarity alone, plus a
//!   library of the relations between them.
//!
//! [`sphere`] handles monomials over the unit sphere, [`montecarlo`] checks
//! exact values by sampling, and [`cli`] is the command-line front end.

pub mod arith;
pub mod cli;
pub mod combinat;
pub mod error;
pub mod invariant;
pub mod montecarlo;
pub mod query;
pub mod sphere;
pub mod suites;
pub mod weingarten;

pub use arith::{BigRational, Poly, RatFun};
pub use combinat::{CycleType, Partition, Permutation};
pub use error::{Error, Result};
pub use query::{CanonicalMoment, IndexSet, MomentQuery};
pub use weingarten::{MomentValue, NMode};
