//! Elements of the basic neighbourhoods of `T(H,G)` for `H = H(X)`.
//!
//! For terms `(h_i, u_i)` with `u₁⋯u_n = e` the element is
//! `∏ᵢ (u₁⋯u_{i−1})·(h_i · u_i(h_i⁻¹))`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::spec::{set_member, SetSpec};
use crate::algebra::{Group, Rational};
use crate::error::{Error, Result};
use crate::formal::{CoeffGroup, FormalSum, IndexAction, IndexSort};

/// Coefficient group and index sort of the sums being combined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumContext {
    pub coeffs: Arc<CoeffGroup>,
    pub sort: IndexSort,
}

impl SumContext {
    pub fn new(coeffs: Arc<CoeffGroup>, sort: IndexSort) -> Self {
        SumContext { coeffs, sort }
    }

    pub fn zero(&self) -> FormalSum {
        FormalSum::zero(self.coeffs.clone(), self.sort)
    }
}

/// Evaluates the product; fails unless `u₁⋯u_n` is the identity.
pub fn thg_element<G>(
    group: &G,
    ctx: &SumContext,
    terms: &[(FormalSum, G::Elem)],
) -> Result<FormalSum>
where
    G: Group,
    G::Elem: IndexAction,
{
    if !group.is_identity(&group.product(terms.iter().map(|(_, u)| u))) {
        return Err(Error::ProductNotIdentity);
    }
    let mut prefix = group.identity();
    let mut acc = ctx.zero();
    for (h, u) in terms {
        let local = h.combine(&h.negate().act(u)?)?;
        acc = acc.combine(&local.act(&prefix)?)?;
        prefix = group.mul(&prefix, u);
    }
    Ok(acc)
}

/// A term `(q_i, h_i, u_i)` of a chain in the neighbourhood formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "E: Serialize", deserialize = "E: Deserialize<'de>"))]
pub struct ThgTerm<E> {
    pub q: Rational,
    pub h: FormalSum,
    pub u: E,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThgCheck {
    pub pass: bool,
    pub chain_increasing: bool,
    pub factors_in_sets: bool,
    pub product_identity: bool,
    pub value_matches: bool,
}

/// Checks that `claimed` is the element produced by `terms` and that the
/// terms are admissible for the family `nbhd(h, q)` of neighbourhoods of `e`.
pub fn verify_thg_witness<G, F>(
    group: &G,
    ctx: &SumContext,
    nbhd: F,
    terms: &[ThgTerm<G::Elem>],
    claimed: &FormalSum,
) -> ThgCheck
where
    G: Group,
    G::Elem: IndexAction,
    F: Fn(&FormalSum, &Rational) -> SetSpec<G::Elem>,
{
    let chain_increasing = terms.windows(2).all(|w| w[0].q < w[1].q);
    let factors_in_sets = terms
        .iter()
        .all(|t| set_member(group, &nbhd(&t.h, &t.q), &t.u) == Ok(true));
    let product_identity = group.is_identity(&group.product(terms.iter().map(|t| &t.u)));
    let pairs: Vec<(FormalSum, G::Elem)> =
        terms.iter().map(|t| (t.h.clone(), t.u.clone())).collect();
    let value_matches = thg_element(group, ctx, &pairs).is_ok_and(|v| v == *claimed);
    ThgCheck {
        pass: chain_increasing && factors_in_sets && product_identity && value_matches,
        chain_increasing,
        factors_in_sets,
        product_identity,
        value_matches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FinPerm, PermGroup, PlGroup, PlHomeo};
    use crate::formal::{integers, unit_sum, Coeff, Index};

    fn u() -> PlHomeo {
        PlHomeo::from_fracs(&[((0, 1), (0, 1)), ((1, 2), (1, 4)), ((1, 1), (1, 1))]).unwrap()
    }

    fn ctx() -> SumContext {
        SumContext::new(integers(), IndexSort::Unit)
    }

    #[test]
    fn single_identity_term_vanishes() {
        let h = unit_sum(
            &integers(),
            &[(1, 3, Coeff::int(2)), (1, 2, Coeff::int(-1))],
        )
        .unwrap();
        let v = thg_element(&PlGroup, &ctx(), &[(h, PlHomeo::identity())]).unwrap();
        assert!(v.is_zero());
        let zero = ctx().zero();
        let v = thg_element(
            &PlGroup,
            &ctx(),
            &[(zero.clone(), u()), (zero, u().invert())],
        )
        .unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn two_term_chain() {
        let z = integers();
        let a = unit_sum(&z, &[(1, 2, Coeff::int(1))]).unwrap();
        let v = thg_element(&PlGroup, &ctx(), &[(a, u()), (ctx().zero(), u().invert())]).unwrap();
        // oracle: h − u(h) with u(1/2) = 1/4
        let expect = unit_sum(&z, &[(1, 2, Coeff::int(1)), (1, 4, Coeff::int(-1))]).unwrap();
        assert_eq!(v, expect);
    }

    #[test]
    fn product_must_be_identity() {
        let a = unit_sum(&integers(), &[(1, 2, Coeff::int(1))]).unwrap();
        assert_eq!(
            thg_element(&PlGroup, &ctx(), &[(a, u())]),
            Err(Error::ProductNotIdentity)
        );
    }

    #[test]
    fn prefix_products_act_on_later_terms() {
        let ctx = SumContext::new(integers(), IndexSort::Nat);
        let s = FinPerm::transposition(1, 2);
        let t = FinPerm::transposition(2, 3);
        let h = |i| FormalSum::single(integers(), Index::Nat(i), Coeff::int(1)).unwrap();
        let third = s.compose(&t).invert();
        let terms = [(h(1), s.clone()), (h(2), t.clone()), (h(3), third.clone())];
        let v = thg_element(&PermGroup, &ctx, &terms).unwrap();
        // oracle: sum the three terms by hand
        let mut expect = ctx.zero();
        let mut prefix = FinPerm::identity();
        for (hi, ui) in &terms {
            let local = hi.minus(&hi.act(ui).unwrap()).unwrap();
            expect = expect.combine(&local.act(&prefix).unwrap()).unwrap();
            prefix = prefix.compose(ui);
        }
        assert_eq!(v, expect);
        assert!(!v.is_zero());
    }

    #[test]
    fn verification_clauses() {
        let z = integers();
        let a = unit_sum(&z, &[(1, 2, Coeff::int(1))]).unwrap();
        let terms = vec![
            ThgTerm {
                q: Rational::zero(),
                h: a.clone(),
                u: u(),
            },
            ThgTerm {
                q: Rational::one(),
                h: ctx().zero(),
                u: u().invert(),
            },
        ];
        let claimed = unit_sum(&z, &[(1, 2, Coeff::int(1)), (1, 4, Coeff::int(-1))]).unwrap();
        let wide = |_: &FormalSum, _: &Rational| SetSpec::ball(Rational::one()).unwrap();
        assert!(verify_thg_witness(&PlGroup, &ctx(), wide, &terms, &claimed).pass);
        let narrow = |_: &FormalSum, _: &Rational| SetSpec::ball(Rational::frac(1, 5)).unwrap();
        let c = verify_thg_witness(&PlGroup, &ctx(), narrow, &terms, &claimed);
        assert!(!c.factors_in_sets && c.value_matches);
        let mut swapped = terms.clone();
        swapped.swap(0, 1);
        assert!(!verify_thg_witness(&PlGroup, &ctx(), wide, &swapped, &claimed).chain_increasing);
    }
}
