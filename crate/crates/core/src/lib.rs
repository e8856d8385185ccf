//! Exact computations for quadratic algebras with an anti-symmetric relation
//! and their Ore extensions: superpotentials, Koszul duals, Yoneda algebras,
//! minimal resolutions, normal forms and Hilbert series.

pub mod derivation;
pub mod error;
pub mod fixtures;
pub mod homology;
pub mod normalform;
pub mod quadratic;
pub mod superpotential;
pub mod tensoralg;

pub use error::{Error, Result};
