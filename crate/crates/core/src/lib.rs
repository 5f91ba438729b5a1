//! Decision procedures for clean and *-clean group rings `O_p[G]`, where `O_p`
//! is the localization of the ring of integers of a cyclotomic field
//! `Q(zeta_n)` or a quadratic field `Q(sqrt d)` at a prime ideal, and `G` is a
//! finite abelian group.
//!
//! Every closed-form verdict produced by [`decide`] can be re-derived from
//! first principles by the [`oracle`] module, which only uses field degrees,
//! multiplicative orders and finite-field factorization degrees.

pub mod arith;
pub mod cli;
pub mod decide;
pub mod error;
pub mod numberfield;
pub mod oracle;

pub use decide::{decide, Clause, Decision, Derived, GroupSpec, StarClean};
pub use error::{Error, Result};
pub use numberfield::{FieldSpec, PrimeLocalization};
pub use oracle::DegreeMultiset;
