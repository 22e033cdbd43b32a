//! Congruence computations on finite algebras: principal congruences with
//! Mal'cev chain witnesses, syntactic congruences, and checks of whether a
//! finite set of one-variable terms determines them.

pub mod algebra;
pub mod analysis;
pub mod congruence;
pub mod corpus;
mod error;
pub mod partition;
pub mod qomega;
pub mod relation;
pub mod suites;
pub mod terms;
pub mod translations;

pub use algebra::{FiniteAlgebra, Signature, Symbol};
pub use error::{Error, Result};
pub use partition::Partition;
pub use relation::Relation;
pub use terms::{TermSet, TermX};
