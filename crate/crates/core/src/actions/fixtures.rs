//! Named groups and actions used by tests, benches and the CLI.

use std::collections::BTreeMap;

use super::action::FiniteAction;
use super::group::{klein_four, named_group, perm_groups, FiniteGroup};

/// S₃ ≅ Aut(V₄) permuting the three non-identity elements of V₄.
pub fn s3_on_klein_four() -> FiniteAction {
    let perms = perm_groups::symmetric(3);
    let g = FiniteGroup::from_permutations(&perms).expect("S3");
    let table = perms
        .iter()
        .map(|p| {
            (0..4)
                .map(|x| if x == 0 { 0 } else { p[x - 1] + 1 })
                .collect()
        })
        .collect();
    FiniteAction::by_automorphisms(g, klein_four(), table).expect("automorphisms of V4")
}

/// S₄ on the six 2-element subsets of {0,1,2,3}.
pub fn s4_on_pairs() -> FiniteAction {
    let perms = perm_groups::symmetric(4);
    let pairs: Vec<(usize, usize)> = (0..4)
        .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
        .collect();
    let index: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let table = perms
        .iter()
        .map(|p| {
            pairs
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
                    index[&(x, y)]
                })
                .collect()
        })
        .collect();
    let g = FiniteGroup::from_permutations(&perms).expect("S4");
    FiniteAction::new(g, pairs.len(), table).expect("action on pairs")
}

/// Actions with |G| ≤ 24 and |X| ≤ 8.
pub fn tau_fixtures() -> Vec<(String, FiniteAction)> {
    let natural =
        |perms: Vec<Vec<usize>>| FiniteAction::from_permutations(&perms).expect("perm group");
    let named = |n: &str| named_group(n).expect("named group");
    vec![
        (
            "trivial on 3 points".into(),
            FiniteAction::new(FiniteGroup::trivial(), 3, vec![vec![0, 1, 2]]).expect("trivial"),
        ),
        (
            "Z3 on 1 point".into(),
            FiniteAction::new(FiniteGroup::cyclic(3), 1, vec![vec![0]; 3]).expect("one point"),
        ),
        ("S3 natural".into(), natural(perm_groups::symmetric(3))),
        ("S3 regular".into(), FiniteAction::regular(named("S3"))),
        (
            "S3 conjugation".into(),
            FiniteAction::conjugation(named("S3")),
        ),
        ("S3 on V4".into(), s3_on_klein_four()),
        ("Z4 rotation".into(), natural(perm_groups::cyclic(4))),
        ("Z6 rotation".into(), natural(perm_groups::cyclic(6))),
        ("D4 on square".into(), natural(perm_groups::dihedral(4))),
        ("D5 on pentagon".into(), natural(perm_groups::dihedral(5))),
        ("Q8 regular".into(), natural(perm_groups::quaternion())),
        ("A4 natural".into(), natural(perm_groups::alternating(4))),
        ("S4 natural".into(), natural(perm_groups::symmetric(4))),
        ("S4 on pairs".into(), s4_on_pairs()),
        (
            "D4 conjugation".into(),
            FiniteAction::conjugation(named("D4")),
        ),
    ]
}

/// Groups of order ≤ 16: cyclic, dihedral, S₃, Q₈, A₄ and V₄.
pub fn small_groups() -> Vec<(String, FiniteGroup)> {
    [
        "Z2", "Z4", "Z5", "Z6", "Z8", "V4", "S3", "D4", "D5", "D6", "D8", "Q8", "A4",
    ]
    .iter()
    .map(|n| (n.to_string(), named_group(n).expect("named group")))
    .collect()
}
