//! Canonical topologies induced by group actions, made checkable.
//!
//! The crate provides exact arithmetic (rationals, rings, PL homeomorphisms
//! of [0,1], finite-support permutations), finite topological groups and
//! their orbit topologies, restricted direct sums `H(X)`, neighbourhood sets
//! of finest group and semigroup topologies, the matrix identities behind the
//! finest ring topology, and constructive non-Hausdorffness witnesses.

pub mod actions;
pub mod algebra;
pub mod bergman;
pub mod error;
pub mod formal;
pub mod ring_embed;
pub mod witnesses;

pub use actions::{ElemSet, FiniteAction, FiniteGroup, FiniteTopGroup};
pub use algebra::{
    free_assignment, ring_eval, Expr, FinPerm, Group, PermGroup, PlGroup, PlHomeo, Rational,
    RingDescriptor, RingElem,
};
pub use bergman::{QTuple, SetSpec};
pub use error::{Error, Result};
pub use formal::{Coeff, CoeffGroup, FormalSum, Index, IndexSort};
pub use ring_embed::{verify_embedding_identities, RingReport};
pub use witnesses::{CantorInstance, NbhdSpec, Report, SeparationBundle};
