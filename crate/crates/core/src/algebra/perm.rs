//! Finite-support permutations of ω.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of the natural numbers moving finitely many points.
/// Only moved points are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<u64, u64>", into = "BTreeMap<u64, u64>")]
pub struct FinPerm {
    moved: BTreeMap<u64, u64>,
}

impl FinPerm {
    pub fn identity() -> Self {
        FinPerm::default()
    }

    /// Builds from a map; fixed points in the input are dropped.
    pub fn new(map: BTreeMap<u64, u64>) -> Result<Self> {
        let moved: BTreeMap<u64, u64> = map.into_iter().filter(|(a, b)| a != b).collect();
        let domain: BTreeSet<u64> = moved.keys().copied().collect();
        let range: BTreeSet<u64> = moved.values().copied().collect();
        if range.len() != moved.len() {
            return Err(Error::InvalidPerm("map is not injective".into()));
        }
        if domain != range {
            return Err(Error::InvalidPerm(
                "domain and range of moved points differ".into(),
            ));
        }
        Ok(FinPerm { moved })
    }

    pub fn transposition(a: u64, b: u64) -> Self {
        let mut m = BTreeMap::new();
        m.insert(a, b);
        m.insert(b, a);
        FinPerm::new(m).expect("transposition")
    }

    /// Cycle `c[0] ↦ c[1] ↦ … ↦ c[0]`.
    pub fn cycle(c: &[u64]) -> Result<Self> {
        let mut m = BTreeMap::new();
        for (i, &a) in c.iter().enumerate() {
            if m.insert(a, c[(i + 1) % c.len()]).is_some() {
                return Err(Error::InvalidPerm("repeated point in cycle".into()));
            }
        }
        FinPerm::new(m)
    }

    pub fn apply(&self, n: u64) -> u64 {
        self.moved.get(&n).copied().unwrap_or(n)
    }

    pub fn moved(&self) -> &BTreeMap<u64, u64> {
        &self.moved
    }

    pub fn support(&self) -> BTreeSet<u64> {
        self.moved.keys().copied().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FinPerm) -> FinPerm {
        let points: BTreeSet<u64> = self
            .moved
            .keys()
            .chain(other.moved.keys())
            .copied()
            .collect();
        let moved = points
            .into_iter()
            .map(|p| (p, self.apply(other.apply(p))))
            .filter(|(a, b)| a != b)
            .collect();
        FinPerm { moved }
    }

    pub fn invert(&self) -> FinPerm {
        FinPerm {
            moved: self.moved.iter().map(|(&a, &b)| (b, a)).collect(),
        }
    }

    /// Random permutation supported inside `0..bound`, moving at most `max_moved` points.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, bound: u64, max_moved: usize) -> FinPerm {
        let k = rng.gen_range(0..=max_moved.min(bound as usize));
        let pts: Vec<u64> = rand::seq::index::sample(rng, bound as usize, k)
            .into_iter()
            .map(|i| i as u64)
            .collect();
        let mut img = pts.clone();
        img.shuffle(rng);
        FinPerm::new(pts.into_iter().zip(img).collect()).expect("shuffle is a bijection")
    }
}

impl TryFrom<BTreeMap<u64, u64>> for FinPerm {
    type Error = Error;
    fn try_from(m: BTreeMap<u64, u64>) -> Result<Self> {
        FinPerm::new(m)
    }
}

impl From<FinPerm> for BTreeMap<u64, u64> {
    fn from(p: FinPerm) -> Self {
        p.moved
    }
}
