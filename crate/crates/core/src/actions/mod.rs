//! Finite groups, finite topological groups, and their actions.

pub mod action;
pub mod fixtures;
pub mod group;
pub mod tau;

pub use action::{ActionFixture, FiniteAction, FiniteTopGroup, DEFAULT_TUPLE_BUDGET};
pub use fixtures::{small_groups, tau_fixtures};
pub use group::{klein_four, named_group, perm_groups, ElemSet, FiniteGroup, GroupTable};
pub use tau::{check_tau_remark, lambda_is_open, tau_is_open, TauReport};
