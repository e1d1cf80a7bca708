//! Finite groups given by multiplication tables.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::algebra::Group;
use crate::error::{Error, Result};

/// A subset of group elements, by index.
pub type ElemSet = BTreeSet<usize>;

/// A finite group as a verified Cayley table. Element indices are `0..order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupTable", into = "GroupTable")]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// Wire form of a [`FiniteGroup`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupTable {
    pub table: Vec<Vec<usize>>,
}

impl TryFrom<GroupTable> for FiniteGroup {
    type Error = Error;
    fn try_from(t: GroupTable) -> Result<Self> {
        FiniteGroup::from_table(t.table)
    }
}

impl From<FiniteGroup> for GroupTable {
    fn from(g: FiniteGroup) -> Self {
        GroupTable { table: g.table }
    }
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table
            .iter()
            .any(|row| row.len() != n || row.iter().any(|&v| v >= n))
        {
            return Err(Error::InvalidGroup(
                "table is not an n×n table over 0..n".into(),
            ));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "({a}·{b})·{c} ≠ {a}·({b}·{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverse,
        })
    }

    /// The group of the given permutations of `0..k`, which must be closed
    /// under composition. Product is composition `(p·q)(i) = p(q(i))`.
    /// Element `i` is `perms[i]`.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Self> {
        let index: BTreeMap<&[usize], usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        if index.len() != perms.len() {
            return Err(Error::InvalidGroup("repeated permutation".into()));
        }
        let mut table = vec![vec![0; perms.len()]; perms.len()];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                table[i][j] = *index
                    .get(pq.as_slice())
                    .ok_or_else(|| Error::InvalidGroup("permutations not closed".into()))?;
            }
        }
        FiniteGroup::from_table(table)
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_table(vec![vec![0]]).expect("trivial group")
    }

    /// ℤ/n with element `i` the residue `i`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        FiniteGroup::from_table(table).expect("cyclic group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn conjugate(&self, g: usize, s: usize) -> usize {
        self.mul(self.mul(g, s), self.inv(g))
    }

    pub fn is_subgroup(&self, set: &ElemSet) -> bool {
        set.contains(&self.identity)
            && set.iter().all(|&a| {
                set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b)))
            })
    }

    pub fn is_normal_subgroup(&self, set: &ElemSet) -> bool {
        self.is_subgroup(set)
            && set
                .iter()
                .all(|&s| self.elements().all(|g| set.contains(&self.conjugate(g, s))))
    }

    /// Smallest subgroup containing `gens`.
    pub fn subgroup_generated(&self, gens: &ElemSet) -> ElemSet {
        let mut out: ElemSet = [self.identity].into();
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                for b in [self.mul(a, g), self.mul(a, self.inv(g))] {
                    if out.insert(b) {
                        queue.push_back(b);
                    }
                }
            }
        }
        out
    }

    /// Smallest normal subgroup containing `set`.
    pub fn normal_closure(&self, set: &ElemSet) -> ElemSet {
        let conjugates: ElemSet = set
            .iter()
            .flat_map(|&s| self.elements().map(move |g| (g, s)))
            .map(|(g, s)| self.conjugate(g, s))
            .collect();
        self.subgroup_generated(&conjugates)
    }

    pub fn conjugacy_classes(&self) -> Vec<ElemSet> {
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for a in self.elements() {
            if seen[a] {
                continue;
            }
            let class: ElemSet = self.elements().map(|g| self.conjugate(g, a)).collect();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Every normal subgroup, sorted by (order, elements).
    pub fn normal_subgroups(&self) -> Vec<ElemSet> {
        let classes = self.conjugacy_classes();
        let mut found: BTreeSet<ElemSet> = BTreeSet::new();
        let start: ElemSet = [self.identity].into();
        let mut queue = VecDeque::from([start.clone()]);
        found.insert(start);
        // every normal subgroup is a join of normal closures of classes
        while let Some(n) = queue.pop_front() {
            for c in &classes {
                let joined: ElemSet = n.union(c).copied().collect();
                let m = self.normal_closure(&joined);
                if found.insert(m.clone()) {
                    queue.push_back(m);
                }
            }
        }
        let mut out: Vec<ElemSet> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Left cosets `a·K` of a subgroup `K`, each sorted, in order of least element.
    pub fn left_cosets(&self, subgroup: &ElemSet) -> Vec<ElemSet> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for a in self.elements() {
            if seen[a] {
                continue;
            }
            let coset: ElemSet = subgroup.iter().map(|&k| self.mul(a, k)).collect();
            for &c in &coset {
                seen[c] = true;
            }
            out.push(coset);
        }
        out
    }
}

impl Group for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }

    fn inv(&self, a: &usize) -> usize {
        self.inverse[*a]
    }

    fn elements(&self) -> Option<Vec<usize>> {
        Some((0..self.order()).collect())
    }

    fn contains(&self, a: &usize) -> bool {
        *a < self.order()
    }
}

/// All elements of the permutation group generated by `gens` on `0..k`,
/// sorted lexicographically (so the identity comes first).
pub fn permutation_closure(k: usize, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..k).collect();
    let mut out: BTreeSet<Vec<usize>> = [id.clone()].into();
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let gp: Vec<usize> = p.iter().map(|&x| g[x]).collect();
            if out.insert(gp.clone()) {
                queue.push_back(gp);
            }
        }
    }
    out.into_iter().collect()
}

/// Named permutation representations used as fixtures.
pub mod perm_groups {
    use super::permutation_closure;

    pub fn symmetric(k: usize) -> Vec<Vec<usize>> {
        if k <= 1 {
            return vec![(0..k).collect()];
        }
        let mut swap: Vec<usize> = (0..k).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        permutation_closure(k, &[swap, cycle])
    }

    pub fn alternating(k: usize) -> Vec<Vec<usize>> {
        symmetric(k).into_iter().filter(|p| is_even(p)).collect()
    }

    pub fn cyclic(n: usize) -> Vec<Vec<usize>> {
        permutation_closure(n, &[(0..n).map(|i| (i + 1) % n).collect()])
    }

    /// Symmetries of the regular n-gon (order 2n) acting on its vertices.
    pub fn dihedral(n: usize) -> Vec<Vec<usize>> {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        permutation_closure(n, &[rot, refl])
    }

    /// Q₈ in its left regular representation on 8 points.
    pub fn quaternion() -> Vec<Vec<usize>> {
        // index = 2*unit + sign, units 1,i,j,k; sign 0 = +, 1 = -
        let mul = |a: usize, b: usize| -> usize {
            let (ua, sa) = (a / 2, a % 2);
            let (ub, sb) = (b / 2, b % 2);
            // unit products: (result unit, extra sign)
            const T: [[(usize, usize); 4]; 4] = [
                [(0, 0), (1, 0), (2, 0), (3, 0)],
                [(1, 0), (0, 1), (3, 0), (2, 1)],
                [(2, 0), (3, 1), (0, 1), (1, 0)],
                [(3, 0), (2, 0), (1, 1), (0, 1)],
            ];
            let (u, s) = T[ua][ub];
            2 * u + (sa + sb + s) % 2
        };
        let left = |a: usize| (0..8).map(|b| mul(a, b)).collect::<Vec<_>>();
        permutation_closure(8, &[left(2), left(4)])
    }

    pub fn is_even(p: &[usize]) -> bool {
        let mut inversions = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 0
    }
}

/// Named finite groups.
pub fn named_group(name: &str) -> Option<FiniteGroup> {
    let perms = match name {
        "S3" => perm_groups::symmetric(3),
        "S4" => perm_groups::symmetric(4),
        "A4" => perm_groups::alternating(4),
        "Q8" => perm_groups::quaternion(),
        "V4" => return Some(klein_four()),
        _ => {
            if let Some(n) = name.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
                return (n >= 1).then(|| FiniteGroup::cyclic(n));
            }
            if let Some(n) = name.strip_prefix('D').and_then(|s| s.parse::<usize>().ok()) {
                if n < 3 {
                    return None;
                }
                perm_groups::dihedral(n)
            } else {
                return None;
            }
        }
    };
    FiniteGroup::from_permutations(&perms).ok()
}

/// ℤ/2 × ℤ/2 with elements as bit pairs and XOR as product.
pub fn klein_four() -> FiniteGroup {
    FiniteGroup::from_table((0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect())
        .expect("klein four")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_groups() {
        assert!(FiniteGroup::from_table(vec![]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 2], vec![1, 0]]).is_err());
        // a non-associative loop of order 5
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_table(loop5).is_err());
    }

    #[test]
    fn named_orders() {
        for (name, order) in [
            ("S3", 6),
            ("S4", 24),
            ("A4", 12),
            ("Q8", 8),
            ("V4", 4),
            ("Z5", 5),
            ("D4", 8),
            ("D8", 16),
        ] {
            assert_eq!(named_group(name).unwrap().order(), order, "{name}");
        }
        assert!(named_group("D2").is_none());
        assert!(named_group("X").is_none());
    }

    #[test]
    fn normal_subgroup_counts() {
        let count = |name| named_group(name).unwrap().normal_subgroups().len();
        assert_eq!(count("S3"), 3);
        assert_eq!(count("S4"), 4);
        assert_eq!(count("A4"), 3);
        assert_eq!(count("Q8"), 6);
        assert_eq!(count("D4"), 6);
        assert_eq!(count("Z6"), 4);
    }

    #[test]
    fn normal_closure_of_transposition_is_s3() {
        let g = named_group("S3").unwrap();
        // perms sorted lexicographically: index 1 is [0,2,1], a transposition
        let closure = g.normal_closure(&[1].into());
        assert_eq!(closure.len(), 6);
        let a3 = g.normal_closure(&[3].into());
        assert_eq!(a3.len(), 3);
        assert!(g.is_normal_subgroup(&a3));
    }
}
