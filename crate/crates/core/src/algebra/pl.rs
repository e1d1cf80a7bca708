//! Increasing piecewise-linear homeomorphisms of [0,1] with rational breakpoints.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::{Error, Result};

/// An increasing PL self-homeomorphism of [0,1].
///
/// Breakpoints start at (0,0), end at (1,1), and are strictly increasing in
/// both coordinates. Collinear interior breakpoints are always pruned, so two
/// maps are equal as functions iff they are structurally equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(
    try_from = "Vec<(Rational, Rational)>",
    into = "Vec<(Rational, Rational)>"
)]
pub struct PlHomeo {
    points: Vec<(Rational, Rational)>,
}

impl PlHomeo {
    pub fn identity() -> Self {
        PlHomeo {
            points: vec![
                (Rational::zero(), Rational::zero()),
                (Rational::one(), Rational::one()),
            ],
        }
    }

    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        let (first, last) = match (points.first(), points.last()) {
            (Some(f), Some(l)) if points.len() >= 2 => (f, l),
            _ => return Err(Error::InvalidPl("need at least two breakpoints".into())),
        };
        if first.0 != Rational::zero() || first.1 != Rational::zero() {
            return Err(Error::InvalidPl("first breakpoint must be (0,0)".into()));
        }
        if last.0 != Rational::one() || last.1 != Rational::one() {
            return Err(Error::InvalidPl("last breakpoint must be (1,1)".into()));
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(Error::InvalidPl(format!(
                    "breakpoints ({},{}) and ({},{}) are not strictly increasing",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(PlHomeo {
            points: prune(points),
        })
    }

    /// Convenience for literals: `[(num, den), ...]` pairs per coordinate.
    pub fn from_fracs(points: &[((i64, i64), (i64, i64))]) -> Result<Self> {
        Self::new(
            points
                .iter()
                .map(|&((a, b), (c, d))| (Rational::frac(a, b), Rational::frac(c, d)))
                .collect(),
        )
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn is_identity(&self) -> bool {
        self.points.len() == 2
    }

    /// Value at `x`, or `None` outside [0,1].
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        interpolate(&self.points, x, |p| (&p.0, &p.1))
    }

    /// Value of the inverse map at `y`, or `None` outside [0,1].
    pub fn eval_inverse(&self, y: &Rational) -> Option<Rational> {
        interpolate(&self.points, y, |p| (&p.1, &p.0))
    }

    /// `self ∘ other`, i.e. x ↦ self(other(x)).
    pub fn compose(&self, other: &PlHomeo) -> PlHomeo {
        let mut xs: BTreeSet<Rational> = other.points.iter().map(|p| p.0.clone()).collect();
        for (x, _) in &self.points {
            xs.insert(other.eval_inverse(x).expect("breakpoint in [0,1]"));
        }
        let points = xs
            .into_iter()
            .map(|x| {
                let y = self
                    .eval(&other.eval(&x).expect("in range"))
                    .expect("in range");
                (x, y)
            })
            .collect();
        PlHomeo {
            points: prune(points),
        }
    }

    pub fn invert(&self) -> PlHomeo {
        PlHomeo {
            points: self
                .points
                .iter()
                .map(|(x, y)| (y.clone(), x.clone()))
                .collect(),
        }
    }

    /// Supremum distance, attained at a breakpoint of one of the two maps.
    pub fn sup_dist(&self, other: &PlHomeo) -> Rational {
        let xs: BTreeSet<&Rational> = self
            .points
            .iter()
            .chain(&other.points)
            .map(|p| &p.0)
            .collect();
        xs.into_iter()
            .map(|x| (&self.eval(x).expect("in range") - &other.eval(x).expect("in range")).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn dist_from_identity(&self) -> Rational {
        self.sup_dist(&PlHomeo::identity())
    }

    /// Random map with up to `max_interior` interior breakpoints on the grid
    /// of denominator `denom`.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, max_interior: usize, denom: i64) -> PlHomeo {
        assert!(denom >= 2);
        let k = rng.gen_range(0..=max_interior.min(denom as usize - 1));
        let pick = |rng: &mut R| {
            let mut s = BTreeSet::new();
            while s.len() < k {
                s.insert(rng.gen_range(1..denom));
            }
            s.into_iter()
                .map(|v| Rational::frac(v, denom))
                .collect::<Vec<_>>()
        };
        let xs = pick(rng);
        let ys = pick(rng);
        let mut points = vec![(Rational::zero(), Rational::zero())];
        points.extend(xs.into_iter().zip(ys));
        points.push((Rational::one(), Rational::one()));
        PlHomeo::new(points).expect("sampled breakpoints are increasing")
    }
}

fn interpolate(
    points: &[(Rational, Rational)],
    t: &Rational,
    key: fn(&(Rational, Rational)) -> (&Rational, &Rational),
) -> Option<Rational> {
    if !t.in_unit_interval() {
        return None;
    }
    let idx = points.partition_point(|p| key(p).0 < t);
    let (x1, y1) = key(&points[idx]);
    if x1 == t {
        return Some(y1.clone());
    }
    let (x0, y0) = key(&points[idx - 1]);
    let slope = &(y1 - y0) / &(x1 - x0);
    Some(y0 + &(&slope * &(t - x0)))
}

fn prune(points: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
    for p in points {
        while out.len() >= 2 {
            let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
            // b is redundant iff slope(a,b) == slope(b,p)
            let lhs = &(&b.1 - &a.1) * &(&p.0 - &b.0);
            let rhs = &(&p.1 - &b.1) * &(&b.0 - &a.0);
            if lhs == rhs {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

impl TryFrom<Vec<(Rational, Rational)>> for PlHomeo {
    type Error = Error;
    fn try_from(points: Vec<(Rational, Rational)>) -> Result<Self> {
        PlHomeo::new(points)
    }
}

impl From<PlHomeo> for Vec<(Rational, Rational)> {
    fn from(u: PlHomeo) -> Self {
        u.points
    }
}

impl fmt::Debug for PlHomeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Pl[")?;
        for (i, (x, y)) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({x},{y})")?;
        }
        f.write_str("]")
    }
}
