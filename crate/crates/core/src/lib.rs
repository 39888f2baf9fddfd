//! Exact combinatorics, quiver representations and constructible sheaves on
//! arboreal singularities.

pub mod error;
pub mod field;
pub mod arbspace;
pub mod atlas;
pub mod cellsheaf;
pub mod linalg;
pub mod quiverrep;
pub mod report;
pub mod treecat;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Field, FieldChoice, PrimeField, Rational, Rationals};
