//! Basic commutators, Witt numbers and collection in free nilpotent groups.

mod basic;
mod collect;
mod magnus;
pub mod naive;
mod verify;
mod witt;

pub use basic::{enumerate_basic_commutators, BasicCommutator, HallBasis, Shape, ENUMERATION_CAP};
pub use collect::{FreeNilpotentContext, FreeNilpotentElement, BASIS_CAP, MAX_CLASS, MAX_LETTERS};
pub use verify::{
    verify_free_nilpotent_basis, verify_struik_instance, BasisCheck, StruikCheck, StruikTerm,
};
pub use witt::{mobius, witt, witt_chi};
