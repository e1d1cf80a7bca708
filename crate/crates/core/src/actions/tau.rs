//! The orbit topology τ(X,G) and the λ(H,G) openness test.
//!
//! With open sets of G the unions of N-cosets, a basic set U·x is a union of
//! N-orbits `N·y` inside the G-orbit of x (since gN·x = N·gx for N normal),
//! and the τ-open sets are exactly the unions of N-orbits.

use std::collections::BTreeSet;

use serde::Serialize;

use super::action::FiniteAction;
use super::group::ElemSet;
use crate::error::{Error, Result};

/// Largest number of N-orbits for which [`check_tau_remark`] enumerates all open sets.
pub const MAX_EXHAUSTIVE_BLOCKS: usize = 16;

type Mask = u64;

fn mask_of<'a>(it: impl IntoIterator<Item = &'a usize>) -> Mask {
    it.into_iter().fold(0, |m, &x| m | (1 << x))
}

fn members(m: Mask) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&i| m & (1 << i) != 0)
}

/// `N·x` for every x.
pub fn kernel_orbits(action: &FiniteAction) -> Vec<BTreeSet<usize>> {
    (0..action.points())
        .map(|x| action.kernel().iter().map(|&n| action.act(n, x)).collect())
        .collect()
}

/// Whether S is τ-open: for each s ∈ S the minimal neighbourhood N·s lies in S.
pub fn tau_is_open(action: &FiniteAction, set: &BTreeSet<usize>) -> bool {
    set.iter().all(|&s| {
        action
            .kernel()
            .iter()
            .all(|&n| set.contains(&action.act(n, s)))
    })
}

/// Whether S ⊆ H is λ-open: every h₁Sh₂ and h₁S⁻¹h₂ is τ-open.
pub fn lambda_is_open(action: &FiniteAction, set: &BTreeSet<usize>) -> Result<bool> {
    let h = action
        .point_group()
        .ok_or_else(|| Error::InvalidAction("points carry no group structure".into()))?;
    let inverse: BTreeSet<usize> = set.iter().map(|&s| h.inv(s)).collect();
    for h1 in h.elements() {
        for h2 in h.elements() {
            for s in [set, &inverse] {
                let translate: BTreeSet<usize> =
                    s.iter().map(|&x| h.mul(h.mul(h1, x), h2)).collect();
                if !tau_is_open(action, &translate) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisClause {
    pub pass: bool,
    pub family_size: usize,
    pub covers: bool,
    /// Two basic sets and a point of their intersection with no basic set
    /// between them.
    pub violation: Option<(Vec<usize>, Vec<usize>, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuityClause {
    pub pass: bool,
    pub open_sets_checked: usize,
    /// An open set whose preimage under the action map is not open.
    pub violation: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitClause {
    pub pass: bool,
    pub orbits: Vec<Vec<usize>>,
    pub orbits_clopen: bool,
    pub coset_map_bijective: bool,
    pub coset_map_homeomorphic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationClause {
    /// The three conditions agree.
    pub pass: bool,
    pub stabilizers_closed: bool,
    pub t1: bool,
    pub hausdorff: bool,
    /// Points whose stabilizer is not closed.
    pub non_closed_stabilizers: Vec<usize>,
}

/// Exhaustive check of the four properties of τ(X,G).
#[derive(Clone, Debug, Serialize)]
pub struct TauReport {
    pub pass: bool,
    pub discrete: bool,
    pub basis: BasisClause,
    pub continuity: ContinuityClause,
    pub orbits: OrbitClause,
    pub separation: SeparationClause,
}

/// Runs all four clauses by enumeration of the topology.
///
/// Fails with [`Error::BudgetExceeded`] when X has more than 64 points or
/// more than [`MAX_EXHAUSTIVE_BLOCKS`] N-orbits.
pub fn check_tau_remark(action: &FiniteAction) -> Result<TauReport> {
    let m = action.points();
    if m > 64 {
        return Err(Error::BudgetExceeded {
            needed: m as u128,
            budget: 64,
        });
    }
    let blocks: Vec<Mask> = {
        let set: BTreeSet<Mask> = kernel_orbits(action).iter().map(mask_of).collect();
        set.into_iter().collect()
    };
    if blocks.len() > MAX_EXHAUSTIVE_BLOCKS {
        return Err(Error::BudgetExceeded {
            needed: blocks.len() as u128,
            budget: MAX_EXHAUSTIVE_BLOCKS as u128,
        });
    }
    let opens: Vec<Mask> = (0u64..1 << blocks.len())
        .map(|sel| members(sel).fold(0, |acc, i| acc | blocks[i]))
        .collect();
    let is_open = |s: Mask| {
        members(s).all(|x| {
            action
                .kernel()
                .iter()
                .all(|&n| s & (1 << action.act(n, x)) != 0)
        })
    };

    let basis = basis_clause(action);
    let continuity = continuity_clause(action, &opens);
    let orbits = orbit_clause(action, &is_open)?;
    let separation = separation_clause(action, &opens);
    Ok(TauReport {
        pass: basis.pass && continuity.pass && orbits.pass && separation.pass,
        discrete: blocks.len() == m,
        basis,
        continuity,
        orbits,
        separation,
    })
}

/// The family {U·x : U open in G, x ∈ X}. U ranges over unions of cosets; U·x
/// only depends on which sets C·x (C a coset) it collects.
fn basic_family(action: &FiniteAction) -> BTreeSet<Mask> {
    let g = action.group();
    let cosets = g.left_cosets(action.kernel());
    let mut family = BTreeSet::new();
    for x in 0..action.points() {
        let images: BTreeSet<Mask> = cosets
            .iter()
            .map(|c| c.iter().fold(0, |m, &a| m | (1 << action.act(a, x))))
            .collect();
        let images: Vec<Mask> = images.into_iter().collect();
        for sel in 0u64..1 << images.len() {
            family.insert(members(sel).fold(0, |acc, i| acc | images[i]));
        }
    }
    family
}

fn basis_clause(action: &FiniteAction) -> BasisClause {
    let family: Vec<Mask> = basic_family(action).into_iter().collect();
    let all: Mask = if action.points() == 64 {
        !0
    } else {
        (1 << action.points()) - 1
    };
    let covers = family.iter().fold(0, |acc, &b| acc | b) == all;
    let mut violation = None;
    'outer: for &b1 in &family {
        for &b2 in &family {
            let inter = b1 & b2;
            for y in members(inter) {
                let ok = family
                    .iter()
                    .any(|&b3| b3 & (1 << y) != 0 && b3 & !inter == 0);
                if !ok {
                    violation = Some((members(b1).collect(), members(b2).collect(), y));
                    break 'outer;
                }
            }
        }
    }
    BasisClause {
        pass: covers && violation.is_none(),
        family_size: family.len(),
        covers,
        violation,
    }
}

/// The preimage of every open V under (g,x) ↦ g·x must be open in the
/// product topology, i.e. contain gN × N·x around each of its points.
fn continuity_clause(action: &FiniteAction, opens: &[Mask]) -> ContinuityClause {
    let g = action.group();
    let kernel = action.kernel();
    let mut violation = None;
    'outer: for &v in opens {
        for a in g.elements() {
            for x in 0..action.points() {
                if v & (1 << action.act(a, x)) == 0 {
                    continue;
                }
                for &n in kernel {
                    let a2 = g.mul(a, n);
                    for &n2 in kernel {
                        let x2 = action.act(n2, x);
                        if v & (1 << action.act(a2, x2)) == 0 {
                            violation = Some(members(v).collect());
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    ContinuityClause {
        pass: violation.is_none(),
        open_sets_checked: opens.len(),
        violation,
    }
}

fn orbit_clause(action: &FiniteAction, is_open: &dyn Fn(Mask) -> bool) -> Result<OrbitClause> {
    let g = action.group();
    let m = action.points();
    let orbits = action.orbits(&BTreeSet::new())?;
    let all: Mask = if m == 64 { !0 } else { (1 << m) - 1 };
    let orbits_clopen = orbits.iter().all(|o| {
        let om = mask_of(o);
        is_open(om) && is_open(all & !om)
    });

    let mut bijective = true;
    let mut homeomorphic = true;
    for x in 0..m {
        let stab = action.stabilizer(&[x])?;
        let cosets = g.left_cosets(&stab);
        let orbit = action.orbit_of(x);
        // well defined and injective
        let images: Vec<Option<usize>> = cosets
            .iter()
            .map(|c| {
                let pts: BTreeSet<usize> = c.iter().map(|&a| action.act(a, x)).collect();
                (pts.len() == 1).then(|| *pts.iter().next().expect("nonempty"))
            })
            .collect();
        let distinct: BTreeSet<usize> = images.iter().flatten().copied().collect();
        if images.iter().any(Option::is_none) || distinct.len() != cosets.len() || distinct != orbit
        {
            bijective = false;
            continue;
        }
        if cosets.len() > MAX_EXHAUSTIVE_BLOCKS {
            return Err(Error::BudgetExceeded {
                needed: cosets.len() as u128,
                budget: MAX_EXHAUSTIVE_BLOCKS as u128,
            });
        }
        // quotient open ⟺ union of chosen cosets open in G
        for sel in 0u64..1 << cosets.len() {
            let union: ElemSet = members(sel)
                .flat_map(|i| cosets[i].iter().copied())
                .collect();
            let image: Mask = members(sel).fold(0, |acc, i| acc | (1 << images[i].unwrap()));
            if action.top().is_open(&union) != is_open(image) {
                homeomorphic = false;
            }
        }
    }
    Ok(OrbitClause {
        pass: orbits_clopen && bijective && homeomorphic,
        orbits,
        orbits_clopen,
        coset_map_bijective: bijective,
        coset_map_homeomorphic: homeomorphic,
    })
}

fn separation_clause(action: &FiniteAction, opens: &[Mask]) -> SeparationClause {
    let m = action.points();
    let non_closed_stabilizers: Vec<usize> = (0..m)
        .filter(|&x| {
            let stab = action.stabilizer(&[x]).expect("point in range");
            !action.top().is_closed(&stab)
        })
        .collect();

    let mut t1_sep = vec![vec![false; m]; m];
    for &u in opens {
        for x in members(u) {
            for y in (0..m).filter(|&y| u & (1 << y) == 0) {
                t1_sep[x][y] = true;
            }
        }
    }
    let mut haus_sep = vec![vec![false; m]; m];
    for &u in opens {
        for &v in opens {
            if u & v != 0 {
                continue;
            }
            for x in members(u) {
                for y in members(v) {
                    haus_sep[x][y] = true;
                }
            }
        }
    }
    let distinct_pairs = || {
        (0..m)
            .flat_map(|x| (0..m).map(move |y| (x, y)))
            .filter(|(x, y)| x != y)
    };
    let t1 = distinct_pairs().all(|(x, y)| t1_sep[x][y]);
    let hausdorff = distinct_pairs().all(|(x, y)| haus_sep[x][y]);
    let stabilizers_closed = non_closed_stabilizers.is_empty();
    SeparationClause {
        pass: stabilizers_closed == t1 && t1 == hausdorff,
        stabilizers_closed,
        t1,
        hausdorff,
        non_closed_stabilizers,
    }
}
