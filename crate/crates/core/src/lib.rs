pub mod bounds;
pub mod commutator;
pub mod error;
pub mod family;
pub mod group;
pub mod multiplier;
pub mod report;
pub mod residue;
pub mod suite;

pub use error::{Error, Result};
