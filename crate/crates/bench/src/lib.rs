//! Fixed inputs shared by the criterion benches, kept here so they can be unit tested.

use std::sync::Arc;

use canontop::actions::{small_groups, tau_fixtures};
use canontop::bergman::QTuple;
use canontop::witnesses::CantorInstance;
use canontop::{CoeffGroup, FiniteAction, FiniteGroup, NbhdSpec, Rational, SetSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn fixture_group(name: &str) -> FiniteGroup {
    small_groups()
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, g)| g)
        .unwrap_or_else(|| panic!("no group fixture {name}"))
}

pub fn fixture_action(name: &str) -> FiniteAction {
    tau_fixtures()
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, a)| a)
        .unwrap_or_else(|| panic!("no action fixture {name}"))
}

/// A three-slot tuple over `g` whose sets are single elements.
pub fn staircase_tuple(g: &FiniteGroup) -> QTuple<usize> {
    let last = g.order() - 1;
    QTuple::constant(SetSpec::explicit([]))
        .with(Rational::from(-1), SetSpec::explicit([1]))
        .with(Rational::from(0), SetSpec::explicit([last / 2]))
        .with(Rational::from(1), SetSpec::explicit([last]))
}

pub fn separation_input(epsilon: Rational) -> (Arc<CoeffGroup>, NbhdSpec) {
    (Arc::new(CoeffGroup::Integers), NbhdSpec::uniform(epsilon))
}

pub fn cantor_instances(count: usize) -> Vec<CantorInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    (0..count)
        .map(|_| canontop::witnesses::random_instance(&mut rng, 8, 8))
        .collect()
}
