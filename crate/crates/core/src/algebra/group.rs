//! A minimal group interface shared by finite tables, Homeo([0,1]) and S_ω.

use std::fmt::Debug;

use super::perm::FinPerm;
use super::pl::PlHomeo;
use super::rational::Rational;

pub trait Group {
    type Elem: Clone + Ord + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// All elements, for finite groups.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// Distance from the identity, for metric groups.
    fn dist_from_identity(&self, _a: &Self::Elem) -> Option<Rational> {
        None
    }

    /// Whether `a` is a well-formed element of this group.
    fn contains(&self, _a: &Self::Elem) -> bool {
        true
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn product<'a, I>(&self, elems: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        elems
            .into_iter()
            .fold(self.identity(), |acc, x| self.mul(&acc, x))
    }

    /// g·s·g⁻¹
    fn conjugate(&self, g: &Self::Elem, s: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(g, s), &self.inv(g))
    }
}

/// Homeo([0,1]) restricted to PL maps, with the supremum metric.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PlGroup;

impl Group for PlGroup {
    type Elem = PlHomeo;

    fn identity(&self) -> PlHomeo {
        PlHomeo::identity()
    }

    fn mul(&self, a: &PlHomeo, b: &PlHomeo) -> PlHomeo {
        a.compose(b)
    }

    fn inv(&self, a: &PlHomeo) -> PlHomeo {
        a.invert()
    }

    fn dist_from_identity(&self, a: &PlHomeo) -> Option<Rational> {
        Some(a.dist_from_identity())
    }

    fn is_identity(&self, a: &PlHomeo) -> bool {
        a.is_identity()
    }
}

/// Finite-support permutations of ω.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PermGroup;

impl Group for PermGroup {
    type Elem = FinPerm;

    fn identity(&self) -> FinPerm {
        FinPerm::identity()
    }

    fn mul(&self, a: &FinPerm, b: &FinPerm) -> FinPerm {
        a.compose(b)
    }

    fn inv(&self, a: &FinPerm) -> FinPerm {
        a.invert()
    }
}
