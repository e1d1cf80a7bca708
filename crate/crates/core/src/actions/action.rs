//! Finite topological groups and their actions on finite sets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::group::{ElemSet, FiniteGroup};
use crate::error::{Error, Result};

/// Default bound on the number of tuples visited by [`FiniteAction::orbit_count_power`].
pub const DEFAULT_TUPLE_BUDGET: u128 = 1_000_000;

/// A finite group with topology: open sets are the unions of cosets of
/// the normal subgroup `kernel` (the closure of the identity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopGroup {
    group: FiniteGroup,
    kernel: ElemSet,
}

impl FiniteTopGroup {
    pub fn new(group: FiniteGroup, kernel: ElemSet) -> Result<Self> {
        if kernel.iter().any(|&k| k >= group.order()) || !group.is_normal_subgroup(&kernel) {
            return Err(Error::NotNormal(format!("{kernel:?}")));
        }
        Ok(FiniteTopGroup { group, kernel })
    }

    pub fn discrete(group: FiniteGroup) -> Self {
        let kernel = [group.identity()].into();
        FiniteTopGroup { group, kernel }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn kernel(&self) -> &ElemSet {
        &self.kernel
    }

    /// Open iff a union of kernel cosets.
    pub fn is_open(&self, set: &ElemSet) -> bool {
        set.iter().all(|&a| {
            self.kernel
                .iter()
                .all(|&n| set.contains(&self.group.mul(a, n)))
        })
    }

    pub fn is_closed(&self, set: &ElemSet) -> bool {
        let complement: ElemSet = self.group.elements().filter(|a| !set.contains(a)).collect();
        self.is_open(&complement)
    }
}

/// A left action of a finite topological group on `0..points`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ActionFixture", into = "ActionFixture")]
pub struct FiniteAction {
    top: FiniteTopGroup,
    points: usize,
    table: Vec<Vec<usize>>,
    point_group: Option<FiniteGroup>,
}

/// JSON fixture: multiplication table, kernel subset, action table, and
/// optionally a group structure on the points.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFixture {
    pub group: FiniteGroup,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<ElemSet>,
    pub action: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_group: Option<FiniteGroup>,
}

impl TryFrom<ActionFixture> for FiniteAction {
    type Error = Error;
    fn try_from(f: ActionFixture) -> Result<Self> {
        let points = f.action.first().map_or(0, Vec::len);
        let mut a = match f.point_group {
            Some(h) => FiniteAction::by_automorphisms(f.group, h, f.action)?,
            None => FiniteAction::new(f.group, points, f.action)?,
        };
        if let Some(k) = f.kernel {
            a = a.with_kernel(k)?;
        }
        Ok(a)
    }
}

impl From<FiniteAction> for ActionFixture {
    fn from(a: FiniteAction) -> Self {
        ActionFixture {
            kernel: Some(a.top.kernel),
            group: a.top.group,
            action: a.table,
            point_group: a.point_group,
        }
    }
}

impl FiniteAction {
    /// `table[g][x]` is `g·x`. The group starts with the discrete topology.
    pub fn new(group: FiniteGroup, points: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        if table.len() != group.order() {
            return Err(Error::InvalidAction(
                "one row per group element required".into(),
            ));
        }
        if table
            .iter()
            .any(|row| row.len() != points || row.iter().any(|&y| y >= points))
        {
            return Err(Error::InvalidAction(
                "rows must map 0..points into 0..points".into(),
            ));
        }
        let e = group.identity();
        if (0..points).any(|x| table[e][x] != x) {
            return Err(Error::InvalidAction(
                "identity does not act trivially".into(),
            ));
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                if (0..points).any(|x| table[gh][x] != table[g][table[h][x]]) {
                    return Err(Error::InvalidAction(format!(
                        "(g·h)x ≠ g(hx) for g={g}, h={h}"
                    )));
                }
            }
        }
        Ok(FiniteAction {
            top: FiniteTopGroup::discrete(group),
            points,
            table,
            point_group: None,
        })
    }

    /// An action on the elements of a group `h` by automorphisms.
    pub fn by_automorphisms(
        group: FiniteGroup,
        h: FiniteGroup,
        table: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let mut a = FiniteAction::new(group, h.order(), table)?;
        for row in &a.table {
            for x in h.elements() {
                for y in h.elements() {
                    if row[h.mul(x, y)] != h.mul(row[x], row[y]) {
                        return Err(Error::InvalidAction(
                            "not an action by automorphisms".into(),
                        ));
                    }
                }
            }
        }
        a.point_group = Some(h);
        Ok(a)
    }

    /// The natural action of a permutation group; element `i` is `perms[i]`.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Self> {
        let group = FiniteGroup::from_permutations(perms)?;
        let points = perms.first().map_or(0, Vec::len);
        FiniteAction::new(group, points, perms.to_vec())
    }

    /// Left multiplication of a group on itself.
    pub fn regular(group: FiniteGroup) -> Self {
        let table: Vec<Vec<usize>> = group
            .elements()
            .map(|g| group.elements().map(|x| group.mul(g, x)).collect())
            .collect();
        let n = group.order();
        FiniteAction::new(group, n, table).expect("regular action")
    }

    /// Conjugation of a group on itself, an action by automorphisms.
    pub fn conjugation(group: FiniteGroup) -> Self {
        let table: Vec<Vec<usize>> = group
            .elements()
            .map(|g| group.elements().map(|x| group.conjugate(g, x)).collect())
            .collect();
        FiniteAction::by_automorphisms(group.clone(), group, table).expect("conjugation action")
    }

    /// Same action with the group topology given by the normal subgroup `kernel`.
    pub fn with_kernel(&self, kernel: ElemSet) -> Result<Self> {
        let top = FiniteTopGroup::new(self.top.group.clone(), kernel)?;
        Ok(FiniteAction {
            top,
            ..self.clone()
        })
    }

    pub fn top(&self) -> &FiniteTopGroup {
        &self.top
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.top.group
    }

    pub fn kernel(&self) -> &ElemSet {
        &self.top.kernel
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn point_group(&self) -> Option<&FiniteGroup> {
        self.point_group.as_ref()
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g][x]
    }

    fn check_points<'a>(&self, pts: impl IntoIterator<Item = &'a usize>) -> Result<()> {
        for &p in pts {
            if p >= self.points {
                return Err(Error::InvalidAction(format!(
                    "point {p} outside 0..{}",
                    self.points
                )));
            }
        }
        Ok(())
    }

    /// Pointwise stabilizer of `tuple`.
    pub fn stabilizer(&self, tuple: &[usize]) -> Result<ElemSet> {
        self.check_points(tuple)?;
        Ok(self
            .group()
            .elements()
            .filter(|&g| tuple.iter().all(|&x| self.act(g, x) == x))
            .collect())
    }

    pub fn orbit_of(&self, x: usize) -> BTreeSet<usize> {
        self.group().elements().map(|g| self.act(g, x)).collect()
    }

    /// Orbits of the pointwise stabilizer of `fixed`, ordered by least element.
    pub fn orbits(&self, fixed: &BTreeSet<usize>) -> Result<Vec<Vec<usize>>> {
        let fixed: Vec<usize> = fixed.iter().copied().collect();
        let stab = self.stabilizer(&fixed)?;
        let mut seen = vec![false; self.points];
        let mut out = Vec::new();
        for x in 0..self.points {
            if seen[x] {
                continue;
            }
            let orbit: BTreeSet<usize> = stab.iter().map(|&g| self.act(g, x)).collect();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit.into_iter().collect());
        }
        Ok(out)
    }

    /// Number of orbits of the diagonal action on n-tuples.
    pub fn orbit_count_power(&self, n: u32, budget: u128) -> Result<u128> {
        let needed = (self.points as u128)
            .checked_pow(n)
            .ok_or(Error::BudgetExceeded {
                needed: u128::MAX,
                budget,
            })?;
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let total = needed as usize;
        let m = self.points;
        let mut seen = vec![false; total];
        let mut digits = vec![0usize; n as usize];
        let mut count = 0u128;
        for code in 0..total {
            if seen[code] {
                continue;
            }
            count += 1;
            decode(code, m, &mut digits);
            for g in self.group().elements() {
                let image = digits
                    .iter()
                    .rev()
                    .fold(0usize, |acc, &x| acc * m + self.act(g, x));
                seen[image] = true;
            }
        }
        Ok(count)
    }
}

/// Little-endian base-m digits of `code`.
fn decode(mut code: usize, m: usize, digits: &mut [usize]) {
    for d in digits.iter_mut() {
        *d = code % m;
        code /= m;
    }
}
