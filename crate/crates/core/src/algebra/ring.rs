//! Ring descriptors and their elements.
//!
//! A [`RingDescriptor`] acts as the ring object: elements are plain payloads
//! and every operation goes through the descriptor that owns them. All
//! payloads are kept in a canonical normal form so that `==` decides equality
//! in the ring.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Word in the generators of a free ring, as generator indices.
pub type Word = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", try_from = "RawDescriptor")]
pub enum RingDescriptor {
    /// ℤ/nℤ with n ≥ 2.
    IntegersMod { modulus: u64 },
    /// ℤ⟨generators⟩, noncommuting variables with integer coefficients.
    FreeNoncommutative { generators: Vec<String> },
    /// dim × dim matrices over `base`.
    SquareMatrix {
        base: Box<RingDescriptor>,
        dim: usize,
    },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum RawDescriptor {
    IntegersMod {
        modulus: u64,
    },
    FreeNoncommutative {
        generators: Vec<String>,
    },
    SquareMatrix {
        base: Box<RingDescriptor>,
        dim: usize,
    },
}

impl TryFrom<RawDescriptor> for RingDescriptor {
    type Error = Error;

    fn try_from(raw: RawDescriptor) -> Result<Self> {
        match raw {
            RawDescriptor::IntegersMod { modulus } => RingDescriptor::zmod(modulus),
            RawDescriptor::FreeNoncommutative { generators } => RingDescriptor::free(generators),
            RawDescriptor::SquareMatrix { base, dim } => RingDescriptor::matrix(*base, dim),
        }
    }
}

/// Canonical payload of a ring element. Its meaning depends on the
/// descriptor it is used with.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingElem {
    Residue(u64),
    /// Word → nonzero coefficient. `BTreeMap` order is the lexicographic
    /// order on generator sequences.
    Poly(BTreeMap<Word, BigInt>),
    /// Row-major entries.
    Grid(Vec<RingElem>),
}

impl RingDescriptor {
    pub fn zmod(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidRing(format!("modulus {modulus} < 2")));
        }
        Ok(RingDescriptor::IntegersMod { modulus })
    }

    pub fn free<S: Into<String>>(generators: impl IntoIterator<Item = S>) -> Result<Self> {
        let generators: Vec<String> = generators.into_iter().map(Into::into).collect();
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() || !g.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidRing(format!("bad generator name `{g}`")));
            }
            if g.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                return Err(Error::InvalidRing(format!(
                    "generator `{g}` starts with a digit"
                )));
            }
            if generators[..i].contains(g) {
                return Err(Error::InvalidRing(format!("duplicate generator `{g}`")));
            }
        }
        Ok(RingDescriptor::FreeNoncommutative { generators })
    }

    pub fn matrix(base: RingDescriptor, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidRing("matrix dimension 0".into()));
        }
        Ok(RingDescriptor::SquareMatrix {
            base: Box::new(base),
            dim,
        })
    }

    /// Short human name, e.g. `Z/6`, `Z<x,y>`, `M2(Z/3)`.
    pub fn name(&self) -> String {
        match self {
            RingDescriptor::IntegersMod { modulus } => format!("Z/{modulus}"),
            RingDescriptor::FreeNoncommutative { generators } => {
                format!("Z<{}>", generators.join(","))
            }
            RingDescriptor::SquareMatrix { base, dim } => format!("M{dim}({})", base.name()),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            RingDescriptor::IntegersMod { .. } => true,
            RingDescriptor::FreeNoncommutative { .. } => false,
            RingDescriptor::SquareMatrix { base, .. } => base.is_finite(),
        }
    }

    /// Whether `a` is a canonical element of this ring.
    pub fn contains(&self, a: &RingElem) -> bool {
        match (self, a) {
            (RingDescriptor::IntegersMod { modulus }, RingElem::Residue(r)) => r < modulus,
            (RingDescriptor::FreeNoncommutative { generators }, RingElem::Poly(p)) => p
                .iter()
                .all(|(w, c)| !c.is_zero() && w.iter().all(|&g| (g as usize) < generators.len())),
            (RingDescriptor::SquareMatrix { base, dim }, RingElem::Grid(entries)) => {
                entries.len() == dim * dim && entries.iter().all(|e| base.contains(e))
            }
            _ => false,
        }
    }

    pub fn check(&self, a: &RingElem) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch(self.name()))
        }
    }

    pub fn zero(&self) -> RingElem {
        match self {
            RingDescriptor::IntegersMod { .. } => RingElem::Residue(0),
            RingDescriptor::FreeNoncommutative { .. } => RingElem::Poly(BTreeMap::new()),
            RingDescriptor::SquareMatrix { base, dim } => {
                RingElem::Grid(vec![base.zero(); dim * dim])
            }
        }
    }

    pub fn one(&self) -> RingElem {
        self.from_int(&BigInt::one())
    }

    /// Image of an integer under the unique unital map ℤ → R.
    pub fn from_int(&self, n: &BigInt) -> RingElem {
        match self {
            RingDescriptor::IntegersMod { modulus } => {
                let r = n.mod_floor(&BigInt::from(*modulus));
                RingElem::Residue(r.to_u64().expect("residue fits"))
            }
            RingDescriptor::FreeNoncommutative { .. } => {
                let mut p = BTreeMap::new();
                if !n.is_zero() {
                    p.insert(Vec::new(), n.clone());
                }
                RingElem::Poly(p)
            }
            RingDescriptor::SquareMatrix { base, dim } => {
                let mut entries = vec![base.zero(); dim * dim];
                let d = base.from_int(n);
                for i in 0..*dim {
                    entries[i * dim + i] = d.clone();
                }
                RingElem::Grid(entries)
            }
        }
    }

    /// The free generator with the given name.
    pub fn generator(&self, name: &str) -> Result<RingElem> {
        match self {
            RingDescriptor::FreeNoncommutative { generators } => {
                let i = generators
                    .iter()
                    .position(|g| g == name)
                    .ok_or_else(|| Error::UnboundGenerator(name.to_string()))?;
                let mut p = BTreeMap::new();
                p.insert(vec![i as u32], BigInt::one());
                Ok(RingElem::Poly(p))
            }
            _ => Err(Error::UnboundGenerator(name.to_string())),
        }
    }

    pub fn is_zero(&self, a: &RingElem) -> bool {
        *a == self.zero()
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (self, a, b) {
            (
                RingDescriptor::IntegersMod { modulus },
                RingElem::Residue(x),
                RingElem::Residue(y),
            ) => RingElem::Residue(((*x as u128 + *y as u128) % *modulus as u128) as u64),
            (RingDescriptor::FreeNoncommutative { .. }, RingElem::Poly(p), RingElem::Poly(q)) => {
                let mut out = p.clone();
                for (w, c) in q {
                    accumulate(&mut out, w.clone(), c.clone());
                }
                RingElem::Poly(out)
            }
            (RingDescriptor::SquareMatrix { base, .. }, RingElem::Grid(p), RingElem::Grid(q)) => {
                RingElem::Grid(p.iter().zip(q).map(|(x, y)| base.add(x, y)).collect())
            }
            _ => panic!("ring element shape does not match {}", self.name()),
        }
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        match (self, a) {
            (RingDescriptor::IntegersMod { modulus }, RingElem::Residue(x)) => {
                RingElem::Residue(if *x == 0 { 0 } else { modulus - x })
            }
            (RingDescriptor::FreeNoncommutative { .. }, RingElem::Poly(p)) => {
                RingElem::Poly(p.iter().map(|(w, c)| (w.clone(), -c)).collect())
            }
            (RingDescriptor::SquareMatrix { base, .. }, RingElem::Grid(p)) => {
                RingElem::Grid(p.iter().map(|x| base.neg(x)).collect())
            }
            _ => panic!("ring element shape does not match {}", self.name()),
        }
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (self, a, b) {
            (
                RingDescriptor::IntegersMod { modulus },
                RingElem::Residue(x),
                RingElem::Residue(y),
            ) => RingElem::Residue(((*x as u128 * *y as u128) % *modulus as u128) as u64),
            (RingDescriptor::FreeNoncommutative { .. }, RingElem::Poly(p), RingElem::Poly(q)) => {
                let mut out = BTreeMap::new();
                for (w1, c1) in p {
                    for (w2, c2) in q {
                        let mut w = w1.clone();
                        w.extend_from_slice(w2);
                        accumulate(&mut out, w, c1 * c2);
                    }
                }
                RingElem::Poly(out)
            }
            (RingDescriptor::SquareMatrix { base, dim }, RingElem::Grid(p), RingElem::Grid(q)) => {
                let n = *dim;
                let mut out = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = base.zero();
                        for k in 0..n {
                            acc = base.add(&acc, &base.mul(&p[i * n + k], &q[k * n + j]));
                        }
                        out.push(acc);
                    }
                }
                RingElem::Grid(out)
            }
            _ => panic!("ring element shape does not match {}", self.name()),
        }
    }

    /// The integer multiple `k × a` in the additive group, by doubling.
    pub fn times(&self, k: &BigInt, a: &RingElem) -> RingElem {
        let mut m = k.abs();
        let mut base = a.clone();
        let mut acc = self.zero();
        let two = BigInt::from(2);
        while !m.is_zero() {
            if m.is_odd() {
                acc = self.add(&acc, &base);
            }
            m /= &two;
            if !m.is_zero() {
                base = self.add(&base, &base);
            }
        }
        if k.is_negative() {
            self.neg(&acc)
        } else {
            acc
        }
    }

    /// Uniformly random element for finite rings; a small random polynomial
    /// (at most three terms, words of length ≤ 2, coefficients in [-3, 3])
    /// for free rings.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElem {
        match self {
            RingDescriptor::IntegersMod { modulus } => {
                RingElem::Residue(rng.gen_range(0..*modulus))
            }
            RingDescriptor::FreeNoncommutative { generators } => {
                let mut p = BTreeMap::new();
                for _ in 0..rng.gen_range(0..=3) {
                    let len = rng.gen_range(0..=2);
                    let w: Word = (0..len)
                        .map(|_| rng.gen_range(0..generators.len() as u32))
                        .collect();
                    accumulate(&mut p, w, BigInt::from(rng.gen_range(-3..=3)));
                }
                RingElem::Poly(p)
            }
            RingDescriptor::SquareMatrix { base, dim } => {
                RingElem::Grid((0..dim * dim).map(|_| base.sample(rng)).collect())
            }
        }
    }

    /// Human-readable rendering, used in reports.
    pub fn render(&self, a: &RingElem) -> String {
        match (self, a) {
            (RingDescriptor::IntegersMod { .. }, RingElem::Residue(r)) => r.to_string(),
            (RingDescriptor::FreeNoncommutative { generators }, RingElem::Poly(p)) => {
                if p.is_empty() {
                    return "0".into();
                }
                let mut s = String::new();
                for (i, (w, c)) in p.iter().enumerate() {
                    let neg = c.is_negative();
                    if i == 0 {
                        if neg {
                            s.push('-');
                        }
                    } else {
                        s.push_str(if neg { " - " } else { " + " });
                    }
                    let mag = c.abs();
                    let word: Vec<&str> =
                        w.iter().map(|&g| generators[g as usize].as_str()).collect();
                    if w.is_empty() {
                        let _ = write!(s, "{mag}");
                    } else if mag.is_one() {
                        s.push_str(&word.join("*"));
                    } else {
                        let _ = write!(s, "{mag}*{}", word.join("*"));
                    }
                }
                s
            }
            (RingDescriptor::SquareMatrix { base, dim }, RingElem::Grid(entries)) => {
                let rows: Vec<String> = entries
                    .chunks(*dim)
                    .map(|row| {
                        let cells: Vec<String> = row.iter().map(|e| base.render(e)).collect();
                        format!("[{}]", cells.join(", "))
                    })
                    .collect();
                format!("[{}]", rows.join(", "))
            }
            _ => format!("<not in {}>", self.name()),
        }
    }
}

fn accumulate(p: &mut BTreeMap<Word, BigInt>, w: Word, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let entry = p.entry(w);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn descriptor_validation() {
        assert!(RingDescriptor::zmod(1).is_err());
        assert!(RingDescriptor::free(["x", "x"]).is_err());
        assert!(RingDescriptor::free(["1x"]).is_err());
        assert!(RingDescriptor::matrix(RingDescriptor::zmod(3).unwrap(), 0).is_err());
        let bad: std::result::Result<RingDescriptor, _> =
            serde_json::from_str(r#"{"kind":"integers-mod","modulus":1}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn descriptor_json_is_tagged() {
        let r = RingDescriptor::matrix(RingDescriptor::zmod(3).unwrap(), 2).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"kind":"square-matrix","base":{"kind":"integers-mod","modulus":3},"dim":2}"#
        );
        assert_eq!(serde_json::from_str::<RingDescriptor>(&s).unwrap(), r);
    }

    #[test]
    fn free_ring_normal_form_cancels() {
        let r = RingDescriptor::free(["x", "y"]).unwrap();
        let x = r.generator("x").unwrap();
        let y = r.generator("y").unwrap();
        let xy = r.mul(&x, &y);
        let yx = r.mul(&y, &x);
        assert_ne!(xy, yx);
        assert!(r.is_zero(&r.sub(&xy, &xy)));
        assert_eq!(r.render(&r.sub(&xy, &yx)), "x*y - y*x");
    }

    #[test]
    fn times_matches_repeated_addition() {
        let r = RingDescriptor::zmod(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = r.sample(&mut rng);
            let k: i64 = rng.gen_range(-20..20);
            let mut naive = r.zero();
            for _ in 0..k.unsigned_abs() {
                naive = r.add(&naive, &a);
            }
            if k < 0 {
                naive = r.neg(&naive);
            }
            assert_eq!(r.times(&BigInt::from(k), &a), naive);
        }
    }

    #[test]
    fn matrix_identity_and_membership() {
        let r = RingDescriptor::matrix(RingDescriptor::zmod(3).unwrap(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = r.sample(&mut rng);
        assert!(r.contains(&m));
        assert_eq!(r.mul(&m, &r.one()), m);
        assert!(!r.contains(&RingElem::Residue(0)));
    }
}
