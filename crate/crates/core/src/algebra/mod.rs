//! Exact arithmetic substrate.

pub mod expr;
pub mod group;
pub mod perm;
pub mod pl;
pub mod rational;
pub mod ring;

pub use expr::{free_assignment, ring_eval, Expr};
pub use group::{Group, PermGroup, PlGroup};
pub use perm::FinPerm;
pub use pl::PlHomeo;
pub use rational::Rational;
pub use ring::{RingDescriptor, RingElem};
