//! Witnesses for the claim about `T(2^ω, S_ω)`: for the basic neighbourhood
//! built from eight partial injections `α_{ijk}`, every `x` vanishing on the
//! points they touch is reached as `η·h_{ijk} − h_{ijk}` with `η ⊇ α_{ijk}`.
//!
//! `ω` is split into residue classes mod 3 and `h_{ijk}` is `i` on class 0,
//! `j` on class 1 and `k` on class 2. When `x` flips more points of one value
//! than of the other, no finitely supported `η` can do the job: it would have
//! to change the size of a level set inside a finite window. The witness is
//! therefore a [`TailShiftPerm`], finite below a bound and a shift by a
//! multiple of 3 within each residue class above it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Report;
use crate::actions::FiniteGroup;
use crate::algebra::FinPerm;
use crate::error::{Error, Result};
use crate::formal::{Coeff, CoeffGroup, FormalSum, Index, IndexSort};

/// A pattern `(i, j, k) ∈ {0,1}³`, written `"ijk"` in JSON.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple(pub [u8; 3]);

impl Triple {
    /// All eight patterns in lexicographic order.
    pub fn all() -> impl Iterator<Item = Triple> {
        (0..8u8).map(|b| Triple([b >> 2 & 1, b >> 1 & 1, b & 1]))
    }

    pub fn is_constant(&self) -> bool {
        self.0[0] == self.0[1] && self.0[1] == self.0[2]
    }

    /// Value of `h_{ijk}` at `p`.
    pub fn level(&self, p: u64) -> u8 {
        self.0[(p % 3) as usize]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.0[0], self.0[1], self.0[2])
    }
}

impl std::str::FromStr for Triple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let b = s.as_bytes();
        if b.len() != 3 || !b.iter().all(|c| matches!(c, b'0' | b'1')) {
            return Err(Error::InvalidInput(format!(
                "triple must be three bits, got {s:?}"
            )));
        }
        Ok(Triple([b[0] - b'0', b[1] - b'0', b[2] - b'0']))
    }
}

impl Serialize for Triple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Triple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Eight partial injections and an element `x ∈ H(ω)` over ℤ/2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorInstance {
    /// Missing patterns stand for the empty map.
    #[serde(default)]
    pub alphas: BTreeMap<Triple, BTreeMap<u64, u64>>,
    pub x: FormalSum,
}

impl CantorInstance {
    pub fn alpha(&self, t: Triple) -> Option<&BTreeMap<u64, u64>> {
        self.alphas.get(&t)
    }

    /// Every point in a domain or range of some `α`.
    pub fn touched(&self) -> BTreeSet<u64> {
        self.alphas
            .values()
            .flat_map(|a| a.iter().flat_map(|(&d, &r)| [d, r]))
            .collect()
    }

    /// Points where `x` is the non-identity element.
    pub fn x_support(&self) -> BTreeSet<u64> {
        self.x
            .support()
            .into_iter()
            .filter_map(|i| match i {
                Index::Nat(p) => Some(p),
                Index::Rat(_) => None,
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        match &**self.x.group() {
            CoeffGroup::Finite { table } if table.order() == 2 => {}
            _ => return Err(Error::InvalidInput("x must have coefficients in Z2".into())),
        }
        if self.x.sort() != IndexSort::Nat {
            return Err(Error::SortMismatch);
        }
        for (t, a) in &self.alphas {
            let image: BTreeSet<u64> = a.values().copied().collect();
            if image.len() != a.len() {
                return Err(Error::InvalidInput(format!("alpha_{t} is not injective")));
            }
            if let Some((d, r)) = a.iter().find(|(&d, &r)| t.level(d) != t.level(r)) {
                return Err(Error::InvalidInput(format!(
                    "alpha_{t} sends {d} to {r} across levels of h_{t}"
                )));
            }
        }
        let touched = self.touched();
        if let Some(p) = self.x_support().intersection(&touched).next() {
            return Err(Error::InvalidInput(format!(
                "x is nonzero at {p}, which alpha touches"
            )));
        }
        Ok(())
    }

    fn x_at(&self, p: u64) -> u8 {
        u8::from(self.x.coeff(&Index::Nat(p)) != Coeff::Elem(0))
    }
}

/// A permutation of ω given by a finite map below `bound` and, from `bound`
/// on, `p ↦ p + 3·shifts[p mod 3]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TailShiftJson", into = "TailShiftJson")]
pub struct TailShiftPerm {
    bound: u64,
    /// Points below `bound` that are not fixed.
    moves: BTreeMap<u64, u64>,
    shifts: [i64; 3],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TailShiftJson {
    bound: u64,
    moves: BTreeMap<u64, u64>,
    shifts: [i64; 3],
}

impl TryFrom<TailShiftJson> for TailShiftPerm {
    type Error = Error;

    fn try_from(j: TailShiftJson) -> Result<Self> {
        TailShiftPerm::new(j.bound, j.moves, j.shifts)
    }
}

impl From<TailShiftPerm> for TailShiftJson {
    fn from(p: TailShiftPerm) -> Self {
        TailShiftJson {
            bound: p.bound,
            moves: p.moves,
            shifts: p.shifts,
        }
    }
}

impl TailShiftPerm {
    /// Checks that the data describe a bijection of ω.
    pub fn new(bound: u64, mut moves: BTreeMap<u64, u64>, shifts: [i64; 3]) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidPerm(m.to_string()));
        moves.retain(|a, b| a != b);
        if !bound.is_multiple_of(3) {
            return bad("bound must be a multiple of 3");
        }
        if shifts.iter().sum::<i64>() != 0 {
            return bad("shifts must sum to zero");
        }
        let widest = shifts.iter().map(|s| s.unsigned_abs()).max().unwrap_or(0);
        if widest.checked_mul(3).is_none_or(|w| w > bound) {
            return bad("bound must be at least three times every shift");
        }
        if moves.keys().any(|&a| a >= bound) {
            return bad("moved points must lie below the bound");
        }
        let perm = TailShiftPerm {
            bound,
            moves,
            shifts,
        };
        // The tail covers {p ≡ r : p ≥ bound + 3 s_r}; the core must cover the rest.
        let image: BTreeSet<u64> = (0..bound).map(|p| perm.apply(p)).collect();
        if image.len() as u64 != bound || image.iter().any(|&q| !perm.core_range_contains(q)) {
            return bad("core does not map onto the complement of the tail image");
        }
        Ok(perm)
    }

    fn core_range_contains(&self, q: u64) -> bool {
        let lim = self.bound as i64 + 3 * self.shifts[(q % 3) as usize];
        (q as i64) < lim
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn moves(&self) -> &BTreeMap<u64, u64> {
        &self.moves
    }

    pub fn shifts(&self) -> [i64; 3] {
        self.shifts
    }

    pub fn apply(&self, p: u64) -> u64 {
        if p < self.bound {
            self.moves.get(&p).copied().unwrap_or(p)
        } else {
            p.checked_add_signed(3 * self.shifts[(p % 3) as usize])
                .expect("bound covers shifts")
        }
    }

    pub fn apply_inverse(&self, q: u64) -> u64 {
        if self.core_range_contains(q) {
            if let Some((&p, _)) = self.moves.iter().find(|(_, &v)| v == q) {
                return p;
            }
            // q is fixed by the core unless it is moved away
            debug_assert!(q < self.bound && !self.moves.contains_key(&q));
            q
        } else {
            q.checked_add_signed(-3 * self.shifts[(q % 3) as usize])
                .expect("tail image")
        }
    }

    /// The finite-support permutation, when every shift is zero.
    pub fn to_finperm(&self) -> Option<FinPerm> {
        if self.shifts != [0; 3] {
            return None;
        }
        FinPerm::new(self.moves.clone()).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CantorWitness {
    pub triple: Triple,
    pub eta: TailShiftPerm,
}

fn z2() -> Arc<CoeffGroup> {
    Arc::new(CoeffGroup::finite(FiniteGroup::cyclic(2)))
}

/// Lexicographically first non-constant pattern whose `α` respects its levels.
fn choose_triple(inst: &CantorInstance) -> Option<Triple> {
    Triple::all().find(|t| {
        !t.is_constant()
            && inst
                .alpha(*t)
                .is_none_or(|a| a.iter().all(|(&d, &r)| t.level(d) == t.level(r)))
    })
}

pub fn cantor_claim_witness(inst: &CantorInstance) -> Result<CantorWitness> {
    inst.validate()?;
    let t = choose_triple(inst).ok_or_else(|| Error::Invariant("no admissible triple".into()))?;
    let empty = BTreeMap::new();
    let alpha = inst.alpha(t).unwrap_or(&empty);
    let support = inst.x_support();

    // flips[v] = number of points where x turns value v into 1 − v
    let mut flips = [0i64; 2];
    for &m in &support {
        flips[t.level(m) as usize] += 1;
    }
    let mut shifts = [0i64; 3];
    for v in 0..2u8 {
        let r = (0..3)
            .find(|&r| t.0[r] == v)
            .expect("triple is not constant");
        shifts[r] = flips[v as usize] - flips[1 - v as usize];
    }
    let widest = shifts.iter().map(|s| s.unsigned_abs()).max().unwrap_or(0);
    let top = inst.touched().union(&support).max().map_or(0, |&p| p + 1);
    let bound = 3 * (top.div_ceil(3) + widest + 1);

    let f = |p: u64| t.level(p) ^ inst.x_at(p);
    let core_range = |q: u64| (q as i64) < bound as i64 + 3 * shifts[(q % 3) as usize];
    let range_top = bound + 3 * widest;

    let mut moves: BTreeMap<u64, u64> = alpha.clone();
    let used: BTreeSet<u64> = alpha.values().copied().collect();
    let mut dom = [Vec::new(), Vec::new()];
    let mut rng = [Vec::new(), Vec::new()];
    for p in 0..range_top {
        let in_dom = p < bound && !alpha.contains_key(&p);
        let in_rng = core_range(p) && !used.contains(&p);
        match (in_dom, in_rng) {
            (true, true) if t.level(p) == f(p) => {}
            _ => {
                if in_dom {
                    dom[t.level(p) as usize].push(p);
                }
                if in_rng {
                    rng[f(p) as usize].push(p);
                }
            }
        }
    }
    for v in 0..2 {
        if dom[v].len() != rng[v].len() {
            return Err(Error::Invariant(format!("level {v} cannot be matched")));
        }
        moves.extend(dom[v].iter().copied().zip(rng[v].iter().copied()));
    }
    let eta = TailShiftPerm::new(bound, moves, shifts)?;
    Ok(CantorWitness { triple: t, eta })
}

pub fn verify_cantor_witness(inst: &CantorInstance, w: &CantorWitness) -> Report {
    let mut r = Report::default();
    let t = w.triple;
    let eta = &w.eta;
    r.check("instance-valid", inst.validate().is_ok(), || {
        format!("{:?}", inst.validate())
    });
    r.check("triple-nonconstant", !t.is_constant(), || {
        format!("triple {t} is constant")
    });

    let missing = inst
        .alpha(t)
        .into_iter()
        .flatten()
        .find(|(&d, &v)| eta.apply(d) != v);
    r.check("alpha-contained", missing.is_none(), || {
        let (d, v) = missing.unwrap();
        format!(
            "alpha_{t} sends {d} to {v} but eta sends it to {}",
            eta.apply(*d)
        )
    });

    // TailShiftPerm::new already checked bijectivity; re-check on deserialized data.
    let bij = TailShiftPerm::new(eta.bound, eta.moves.clone(), eta.shifts);
    r.check("bijective", bij.is_ok(), || format!("{bij:?}"));

    let widest = eta
        .shifts
        .iter()
        .map(|s| s.unsigned_abs())
        .max()
        .unwrap_or(0);
    let far = inst.touched().union(&inst.x_support()).max().copied();
    let clear = far.is_none_or(|m| eta.bound >= 3 * widest && eta.bound - 3 * widest > m);
    r.check("tail-clear", clear, || {
        format!("tail from {} reaches the support (max {far:?})", eta.bound)
    });

    let window = eta.bound + 3 * widest + 3;
    let bad = (0..window).find(|&p| {
        let q = eta.apply(p);
        t.level(q) ^ inst.x_at(q) != t.level(p)
    });
    r.check("equation", bad.is_none(), || {
        let p = bad.unwrap();
        let q = eta.apply(p);
        format!("(eta·h)({q}) differs from (h + x)({q})")
    });
    r.finish()
}

/// `η·h − h` on the indices below `limit`; equals `x` there for a valid witness.
pub fn eta_difference(w: &CantorWitness, limit: u64) -> Result<FormalSum> {
    let terms = (0..limit)
        .filter(|&q| w.triple.level(w.eta.apply_inverse(q)) != w.triple.level(q))
        .map(|q| (Index::Nat(q), Coeff::Elem(1)));
    FormalSum::from_terms(z2(), IndexSort::Nat, terms)
}

/// A random instance whose partial injections respect their own patterns.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    max_dom: usize,
    max_support: usize,
) -> CantorInstance {
    const SPAN: u64 = 48;
    let mut alphas = BTreeMap::new();
    for t in Triple::all() {
        let size = rng.gen_range(0..=max_dom);
        let mut pts: Vec<u64> = (0..SPAN).collect();
        pts.shuffle(rng);
        let mut a = BTreeMap::new();
        let mut used = BTreeSet::new();
        for &d in pts.iter().take(size) {
            let options: Vec<u64> = (0..SPAN)
                .filter(|&q| t.level(q) == t.level(d) && !used.contains(&q))
                .collect();
            if let Some(&q) = options.choose(rng) {
                used.insert(q);
                a.insert(d, q);
            }
        }
        if !a.is_empty() {
            alphas.insert(t, a);
        }
    }
    let touched: BTreeSet<u64> = alphas
        .values()
        .flat_map(|a: &BTreeMap<u64, u64>| a.iter().flat_map(|(&d, &r)| [d, r]))
        .collect();
    let free: Vec<u64> = (0..2 * SPAN).filter(|p| !touched.contains(p)).collect();
    let k = rng.gen_range(0..=max_support.min(free.len()));
    let terms = free
        .choose_multiple(rng, k)
        .map(|&p| (Index::Nat(p), Coeff::Elem(1)));
    let x = FormalSum::from_terms(z2(), IndexSort::Nat, terms).expect("Z2 terms");
    CantorInstance { alphas, x }
}
