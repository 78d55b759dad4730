//! Exact lattice and finite-group computations for symplectic finite group
//! actions on rational surfaces CP²#N(CP̄²).

pub mod acceptance;
pub mod cli;
pub mod cone;
pub mod error;
pub mod exceptional;
pub mod exec;
pub mod gconic;
pub mod hexagon;
pub mod lattice;
pub mod weyl;

mod diophantine;

pub use error::{Error, Result};
pub use exec::Exec;
pub use lattice::{canonical_class, pairing, CohClass, PicardLattice, Rational, SymplecticClass};
pub use weyl::{FiniteIsometryGroup, Isometry};
