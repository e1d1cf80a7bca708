//! Neighbourhood sets of finest group and semigroup topologies.

pub mod search;
pub mod spec;
pub mod thg;

pub use search::{
    minimal_nbhd_finite, u_set, u_set_member, verify_word_witness, WitnessStep, WordWitness,
};
pub use spec::{closed_member, resolve, set_member, Mode, QTuple, SetSpec, StepMode};
pub use thg::{thg_element, verify_thg_witness, SumContext, ThgCheck, ThgTerm};
