//! Constructive witnesses with independent verifiers.

pub mod cantor;
pub mod separation;

use serde::{Deserialize, Serialize};

pub use cantor::{
    cantor_claim_witness, eta_difference, random_instance, verify_cantor_witness, CantorInstance,
    CantorWitness, TailShiftPerm, Triple,
};
pub use separation::{
    build_separation_witness, build_separation_witness_with_budget, least_grid_n,
    verify_separation_witness, NbhdRadius, NbhdSpec, SeparationBundle, MAX_GRID_N,
};

/// One named check in a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub pass: bool,
    pub clauses: Vec<Clause>,
}

impl Report {
    pub(crate) fn check(&mut self, name: &str, pass: bool, detail: impl FnOnce() -> String) {
        self.clauses.push(Clause {
            name: name.to_string(),
            pass,
            detail: if pass { None } else { Some(detail()) },
        });
    }

    pub(crate) fn finish(mut self) -> Self {
        self.pass = self.clauses.iter().all(|c| c.pass);
        self
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.clauses
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}
