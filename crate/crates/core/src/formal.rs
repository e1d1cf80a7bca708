//! The restricted direct sum `H(X) = ⊕ₓ Hₓ` with `G` permuting indices.
//!
//! Distinct indices commute, so a finite map `index → non-identity element`
//! represents every element faithfully even when `H` is non-abelian.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::actions::{FiniteAction, FiniteGroup};
use crate::algebra::{FinPerm, PlHomeo, Rational};
use crate::error::{Error, Result};

/// The coefficient group `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoeffGroup {
    Integers,
    Finite { table: FiniteGroup },
}

/// An element of a [`CoeffGroup`]: an integer, or an index into a finite table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coeff {
    Int(BigInt),
    Elem(usize),
}

impl Coeff {
    pub fn int(n: i64) -> Self {
        Coeff::Int(BigInt::from(n))
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Int(n) => write!(f, "{n}"),
            Coeff::Elem(i) => write!(f, "g{i}"),
        }
    }
}

// Integers travel as decimal strings (arbitrary size), table elements as numbers.
impl Serialize for Coeff {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Coeff::Int(n) => s.serialize_str(&n.to_string()),
            Coeff::Elem(i) => s.serialize_u64(*i as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(i) => Ok(Coeff::Elem(i as usize)),
            Raw::Str(s) => s.parse().map(Coeff::Int).map_err(serde::de::Error::custom),
        }
    }
}

impl CoeffGroup {
    pub fn finite(table: FiniteGroup) -> Self {
        CoeffGroup::Finite { table }
    }

    /// `Z`, or any name known to [`crate::actions::named_group`].
    pub fn named(name: &str) -> Option<Self> {
        if name == "Z" {
            return Some(CoeffGroup::Integers);
        }
        crate::actions::named_group(name).map(CoeffGroup::finite)
    }

    pub fn identity(&self) -> Coeff {
        match self {
            CoeffGroup::Integers => Coeff::Int(BigInt::zero()),
            CoeffGroup::Finite { table } => Coeff::Elem(table.identity()),
        }
    }

    pub fn contains(&self, c: &Coeff) -> bool {
        match (self, c) {
            (CoeffGroup::Integers, Coeff::Int(_)) => true,
            (CoeffGroup::Finite { table }, Coeff::Elem(i)) => *i < table.order(),
            _ => false,
        }
    }

    pub fn check(&self, c: &Coeff) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::CoeffMismatch)
        }
    }

    pub fn is_identity(&self, c: &Coeff) -> bool {
        *c == self.identity()
    }

    /// Group operation; panics if either argument is foreign.
    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffGroup::Integers, Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x + y),
            (CoeffGroup::Finite { table }, Coeff::Elem(x), Coeff::Elem(y)) => {
                Coeff::Elem(table.mul(*x, *y))
            }
            _ => panic!("coefficient {a:?} or {b:?} not in {self:?}"),
        }
    }

    pub fn inv(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (CoeffGroup::Integers, Coeff::Int(x)) => Coeff::Int(-x),
            (CoeffGroup::Finite { table }, Coeff::Elem(x)) => Coeff::Elem(table.inv(*x)),
            _ => panic!("coefficient {a:?} not in {self:?}"),
        }
    }

    /// A random non-identity element; for ℤ one of ±1, ±2, ±3.
    pub fn sample_nonidentity<R: Rng + ?Sized>(&self, rng: &mut R) -> Coeff {
        match self {
            CoeffGroup::Integers => {
                let v: i64 = rng.gen_range(1..=3);
                Coeff::int(if rng.gen() { v } else { -v })
            }
            CoeffGroup::Finite { table } => {
                assert!(
                    table.order() > 1,
                    "trivial group has no non-identity element"
                );
                let e = table.identity();
                loop {
                    let x = rng.gen_range(0..table.order());
                    if x != e {
                        return Coeff::Elem(x);
                    }
                }
            }
        }
    }

    /// Every non-identity element, if the group is finite.
    pub fn nonidentity_elements(&self) -> Option<Vec<Coeff>> {
        match self {
            CoeffGroup::Integers => None,
            CoeffGroup::Finite { table } => Some(
                table
                    .elements()
                    .filter(|&x| x != table.identity())
                    .map(Coeff::Elem)
                    .collect(),
            ),
        }
    }

    pub fn name(&self) -> String {
        match self {
            CoeffGroup::Integers => "Z".into(),
            CoeffGroup::Finite { table } => format!("finite group of order {}", table.order()),
        }
    }
}

/// Which index set `X` a sum lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexSort {
    /// ω, or a finite set `0..m` of points.
    Nat,
    /// ℚ ∩ [0,1].
    Unit,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Index {
    Nat(u64),
    Rat(Rational),
}

impl Index {
    pub fn rat(p: i64, q: i64) -> Self {
        Index::Rat(Rational::frac(p, q))
    }

    pub fn sort(&self) -> IndexSort {
        match self {
            Index::Nat(_) => IndexSort::Nat,
            Index::Rat(_) => IndexSort::Unit,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Nat(n) => write!(f, "{n}"),
            Index::Rat(r) => write!(f, "{r}"),
        }
    }
}

/// Something that permutes indices: a PL map on ℚ∩[0,1], a permutation of
/// ω, or an element of a finite action.
pub trait IndexAction {
    fn sort(&self) -> IndexSort;
    fn map_index(&self, i: &Index) -> Result<Index>;
}

impl IndexAction for PlHomeo {
    fn sort(&self) -> IndexSort {
        IndexSort::Unit
    }

    fn map_index(&self, i: &Index) -> Result<Index> {
        match i {
            Index::Rat(x) => self
                .eval(x)
                .map(Index::Rat)
                .ok_or_else(|| Error::IndexOutOfDomain(x.to_string())),
            Index::Nat(_) => Err(Error::SortMismatch),
        }
    }
}

impl IndexAction for FinPerm {
    fn sort(&self) -> IndexSort {
        IndexSort::Nat
    }

    fn map_index(&self, i: &Index) -> Result<Index> {
        match i {
            Index::Nat(n) => Ok(Index::Nat(self.apply(*n))),
            Index::Rat(_) => Err(Error::SortMismatch),
        }
    }
}

/// Group element `g` of a finite action, acting on indices `0..points`.
#[derive(Clone, Copy, Debug)]
pub struct ActionElem<'a> {
    pub action: &'a FiniteAction,
    pub g: usize,
}

impl IndexAction for ActionElem<'_> {
    fn sort(&self) -> IndexSort {
        IndexSort::Nat
    }

    fn map_index(&self, i: &Index) -> Result<Index> {
        match i {
            Index::Nat(n) if (*n as usize) < self.action.points() => {
                Ok(Index::Nat(self.action.act(self.g, *n as usize) as u64))
            }
            Index::Nat(n) => Err(Error::IndexOutOfDomain(n.to_string())),
            Index::Rat(_) => Err(Error::SortMismatch),
        }
    }
}

/// An element of `H(X)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FormalSumJson", into = "FormalSumJson")]
pub struct FormalSum {
    group: Arc<CoeffGroup>,
    sort: IndexSort,
    terms: BTreeMap<Index, Coeff>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormalSumJson {
    group: CoeffGroup,
    sort: IndexSort,
    terms: Vec<(Index, Coeff)>,
}

impl TryFrom<FormalSumJson> for FormalSum {
    type Error = Error;
    fn try_from(j: FormalSumJson) -> Result<Self> {
        let mut y = FormalSum::zero(Arc::new(j.group), j.sort);
        for (i, c) in j.terms {
            if y.terms.contains_key(&i) {
                return Err(Error::InvalidInput(format!("index {i} repeated")));
            }
            y = y.combine(&FormalSum::single(y.group.clone(), i, c)?)?;
        }
        Ok(y)
    }
}

impl From<FormalSum> for FormalSumJson {
    fn from(y: FormalSum) -> Self {
        FormalSumJson {
            group: (*y.group).clone(),
            sort: y.sort,
            terms: y.terms.into_iter().collect(),
        }
    }
}

impl FormalSum {
    pub fn zero(group: Arc<CoeffGroup>, sort: IndexSort) -> Self {
        FormalSum {
            group,
            sort,
            terms: BTreeMap::new(),
        }
    }

    /// `(c)_i`; rational indices must lie in [0,1].
    pub fn single(group: Arc<CoeffGroup>, index: Index, c: Coeff) -> Result<Self> {
        group.check(&c)?;
        if let Index::Rat(r) = &index {
            if !r.in_unit_interval() {
                return Err(Error::IndexOutOfDomain(r.to_string()));
            }
        }
        let sort = index.sort();
        let mut terms = BTreeMap::new();
        if !group.is_identity(&c) {
            terms.insert(index, c);
        }
        Ok(FormalSum { group, sort, terms })
    }

    /// Sum of the given terms, combined left to right.
    pub fn from_terms(
        group: Arc<CoeffGroup>,
        sort: IndexSort,
        terms: impl IntoIterator<Item = (Index, Coeff)>,
    ) -> Result<Self> {
        let mut y = FormalSum::zero(group.clone(), sort);
        for (i, c) in terms {
            y = y.combine(&FormalSum::single(group.clone(), i, c)?)?;
        }
        Ok(y)
    }

    pub fn group(&self) -> &Arc<CoeffGroup> {
        &self.group
    }

    pub fn sort(&self) -> IndexSort {
        self.sort
    }

    pub fn terms(&self) -> &BTreeMap<Index, Coeff> {
        &self.terms
    }

    pub fn coeff(&self, i: &Index) -> Coeff {
        self.terms
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.group.identity())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> BTreeSet<Index> {
        self.terms.keys().cloned().collect()
    }

    fn compatible(&self, other: &FormalSum) -> Result<()> {
        if self.group != other.group {
            return Err(Error::CoeffMismatch);
        }
        if self.sort != other.sort {
            return Err(Error::SortMismatch);
        }
        Ok(())
    }

    /// Pointwise product `self + other`.
    pub fn combine(&self, other: &FormalSum) -> Result<FormalSum> {
        self.compatible(other)?;
        let mut terms = self.terms.clone();
        for (i, c) in &other.terms {
            if i.sort() != self.sort {
                return Err(Error::SortMismatch);
            }
            let prod = self.group.mul(&self.coeff(i), c);
            if self.group.is_identity(&prod) {
                terms.remove(i);
            } else {
                terms.insert(i.clone(), prod);
            }
        }
        Ok(FormalSum {
            group: self.group.clone(),
            sort: self.sort,
            terms,
        })
    }

    pub fn negate(&self) -> FormalSum {
        let terms = self
            .terms
            .iter()
            .map(|(i, c)| (i.clone(), self.group.inv(c)))
            .collect();
        FormalSum {
            group: self.group.clone(),
            sort: self.sort,
            terms,
        }
    }

    /// `self − other`, i.e. `self + (−other)`.
    pub fn minus(&self, other: &FormalSum) -> Result<FormalSum> {
        self.combine(&other.negate())
    }

    /// `g·y`: moves each index, keeps coefficients.
    pub fn act<A: IndexAction + ?Sized>(&self, g: &A) -> Result<FormalSum> {
        if g.sort() != self.sort {
            return Err(Error::SortMismatch);
        }
        let mut terms = BTreeMap::new();
        for (i, c) in &self.terms {
            terms.insert(g.map_index(i)?, c.clone());
        }
        Ok(FormalSum {
            group: self.group.clone(),
            sort: self.sort,
            terms,
        })
    }

    /// Indices whose coefficient is exactly `h`.
    pub fn level_set(&self, h: &Coeff) -> Result<BTreeSet<Index>> {
        self.group.check(h)?;
        if self.group.is_identity(h) {
            return Err(Error::IdentityLevelSet);
        }
        Ok(self
            .terms
            .iter()
            .filter(|(_, c)| *c == h)
            .map(|(i, _)| i.clone())
            .collect())
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (i, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})_{{{i}}}")?;
        }
        Ok(())
    }
}

/// Free functions matching the operation names used elsewhere in the crate.
pub fn fs_combine(y1: &FormalSum, y2: &FormalSum) -> Result<FormalSum> {
    y1.combine(y2)
}

pub fn fs_act<A: IndexAction + ?Sized>(g: &A, y: &FormalSum) -> Result<FormalSum> {
    y.act(g)
}

pub fn fs_level_set(y: &FormalSum, h: &Coeff) -> Result<BTreeSet<Index>> {
    y.level_set(h)
}

/// Shorthand for a sum over ℚ∩[0,1] from `(p, q, coeff)` triples.
pub fn unit_sum(group: &Arc<CoeffGroup>, terms: &[(i64, i64, Coeff)]) -> Result<FormalSum> {
    FormalSum::from_terms(
        group.clone(),
        IndexSort::Unit,
        terms
            .iter()
            .map(|(p, q, c)| (Index::rat(*p, *q), c.clone())),
    )
}

/// Integers as a shared coefficient group.
pub fn integers() -> Arc<CoeffGroup> {
    Arc::new(CoeffGroup::Integers)
}

/// `1 ∈ ℤ`, handy in tests and examples.
pub fn one() -> Coeff {
    Coeff::Int(BigInt::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::named_group;

    fn s3() -> Arc<CoeffGroup> {
        Arc::new(CoeffGroup::finite(named_group("S3").unwrap()))
    }

    #[test]
    fn adding_zero_and_cancelling() {
        let z = integers();
        let y = unit_sum(&z, &[(1, 3, Coeff::int(2))]).unwrap();
        let zero = FormalSum::zero(z.clone(), IndexSort::Unit);
        assert_eq!(y.combine(&zero).unwrap(), y);
        assert!(y.combine(&y.negate()).unwrap().is_zero());

        let g = s3();
        let a = FormalSum::single(g.clone(), Index::rat(1, 3), Coeff::Elem(3)).unwrap();
        assert!(a.combine(&a.negate()).unwrap().is_zero());
    }

    #[test]
    fn integer_sum_matches_pointwise_addition() {
        let z = integers();
        let y = unit_sum(
            &z,
            &[
                (1, 2, Coeff::int(2)),
                (1, 2, Coeff::int(3)),
                (1, 4, Coeff::int(1)),
            ],
        )
        .unwrap();
        let expect: BTreeMap<Index, Coeff> = [
            (Index::rat(1, 4), Coeff::int(1)),
            (Index::rat(1, 2), Coeff::int(5)),
        ]
        .into();
        assert_eq!(y.terms(), &expect);
    }

    #[test]
    fn sort_and_group_mismatch() {
        let z = integers();
        let u = unit_sum(&z, &[(1, 2, Coeff::int(1))]).unwrap();
        let n = FormalSum::single(z.clone(), Index::Nat(3), Coeff::int(1)).unwrap();
        assert_eq!(u.combine(&n), Err(Error::SortMismatch));
        let s = FormalSum::single(s3(), Index::rat(1, 2), Coeff::Elem(1)).unwrap();
        assert_eq!(u.combine(&s), Err(Error::CoeffMismatch));
        assert!(FormalSum::single(z, Index::rat(3, 2), Coeff::int(1)).is_err());
    }

    #[test]
    fn pl_action_relocates_indices() {
        let u =
            PlHomeo::from_fracs(&[((0, 1), (0, 1)), ((1, 2), (1, 4)), ((1, 1), (1, 1))]).unwrap();
        let z = integers();
        let y = unit_sum(&z, &[(1, 2, Coeff::int(7))]).unwrap();
        assert_eq!(
            y.act(&u).unwrap(),
            unit_sum(&z, &[(1, 4, Coeff::int(7))]).unwrap()
        );
        assert_eq!(y.act(&PlHomeo::identity()).unwrap(), y);
        assert_eq!(y.act(&u.invert()).unwrap().act(&u).unwrap(), y);
        let n = FormalSum::single(z, Index::Nat(3), Coeff::int(1)).unwrap();
        assert_eq!(n.act(&u), Err(Error::SortMismatch));
    }

    #[test]
    fn perm_and_finite_action() {
        let z = integers();
        let y = FormalSum::single(z.clone(), Index::Nat(5), Coeff::int(1)).unwrap();
        let moved = y.act(&FinPerm::transposition(5, 8)).unwrap();
        assert_eq!(moved.support(), [Index::Nat(8)].into());

        let action =
            FiniteAction::from_permutations(&crate::actions::perm_groups::symmetric(3)).unwrap();
        let g = (0..6).find(|&g| action.act(g, 0) == 1).unwrap();
        let y = FormalSum::single(z.clone(), Index::Nat(0), Coeff::int(4)).unwrap();
        let img = y.act(&ActionElem { action: &action, g }).unwrap();
        assert_eq!(img.support(), [Index::Nat(1)].into());
        let far = FormalSum::single(z, Index::Nat(9), Coeff::int(1)).unwrap();
        assert!(matches!(
            far.act(&ActionElem { action: &action, g }),
            Err(Error::IndexOutOfDomain(_))
        ));
    }

    #[test]
    fn level_sets() {
        let g = s3();
        let (a, b) = (Coeff::Elem(1), Coeff::Elem(3));
        let y = FormalSum::from_terms(
            g.clone(),
            IndexSort::Unit,
            [
                (Index::rat(1, 3), a.clone()),
                (Index::rat(2, 3), a.clone()),
                (Index::rat(1, 2), b.clone()),
            ],
        )
        .unwrap();
        assert_eq!(
            y.level_set(&a).unwrap(),
            [Index::rat(1, 3), Index::rat(2, 3)].into()
        );
        assert_eq!(y.level_set(&b).unwrap(), [Index::rat(1, 2)].into());
        assert!(FormalSum::zero(g.clone(), IndexSort::Unit)
            .level_set(&a)
            .unwrap()
            .is_empty());
        assert_eq!(y.level_set(&Coeff::Elem(0)), Err(Error::IdentityLevelSet));
    }

    #[test]
    fn nonabelian_components_combine_in_order() {
        let g = s3();
        let CoeffGroup::Finite { table } = &*g else {
            unreachable!()
        };
        let (a, b) = (1, 3);
        assert_ne!(table.mul(a, b), table.mul(b, a));
        let ya = FormalSum::single(g.clone(), Index::rat(1, 2), Coeff::Elem(a)).unwrap();
        let yb = FormalSum::single(g.clone(), Index::rat(1, 2), Coeff::Elem(b)).unwrap();
        assert_eq!(
            ya.combine(&yb).unwrap().coeff(&Index::rat(1, 2)),
            Coeff::Elem(table.mul(a, b))
        );
    }

    #[test]
    fn json_round_trip() {
        let z = integers();
        let y = unit_sum(&z, &[(1, 3, Coeff::int(1)), (2, 3, Coeff::int(-1))]).unwrap();
        let j = serde_json::to_string(&y).unwrap();
        assert_eq!(
            j,
            r#"{"group":{"kind":"integers"},"sort":"unit","terms":[["1/3","1"],["2/3","-1"]]}"#
        );
        assert_eq!(serde_json::from_str::<FormalSum>(&j).unwrap(), y);
        let n = FormalSum::single(
            Arc::new(CoeffGroup::finite(FiniteGroup::cyclic(2))),
            Index::Nat(4),
            Coeff::Elem(1),
        )
        .unwrap();
        let j = serde_json::to_string(&n).unwrap();
        assert_eq!(serde_json::from_str::<FormalSum>(&j).unwrap(), n);
        assert_eq!(y.to_string(), "(1)_{1/3} + (-1)_{2/3}");
    }
}
