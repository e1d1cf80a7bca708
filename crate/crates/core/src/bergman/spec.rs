//! Finite descriptions of subsets of a group and of ℚ-indexed families of them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{Group, Rational};
use crate::error::{Error, Result};

/// A subset of a group, given so that membership is decidable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[serde(bound(
    serialize = "E: Serialize + Ord",
    deserialize = "E: Deserialize<'de> + Ord"
))]
pub enum SetSpec<E> {
    Explicit {
        elements: BTreeSet<E>,
    },
    /// Open sup-metric ball `{u : d(u, e) < radius}`.
    Ball {
        radius: Rational,
    },
    /// `S ∪ {e} ∪ S⁻¹`.
    Star {
        inner: Box<SetSpec<E>>,
    },
    /// `S ∪ {e}`.
    Sharp {
        inner: Box<SetSpec<E>>,
    },
    /// `⋃_g g·S_g·g⁻¹` where `S_g` is the listed set for `g` and `default`
    /// otherwise.
    Conjugated {
        #[serde(with = "pairs")]
        exceptions: BTreeMap<E, SetSpec<E>>,
        default: Box<SetSpec<E>>,
    },
}

mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<K, V, S>(m: &BTreeMap<K, V>, s: S) -> Result<S::Ok, S::Error>
    where
        K: Serialize,
        V: Serialize,
        S: Serializer,
    {
        s.collect_seq(m.iter())
    }

    pub fn deserialize<'de, K, V, D>(d: D) -> Result<BTreeMap<K, V>, D::Error>
    where
        K: Deserialize<'de> + Ord,
        V: Deserialize<'de>,
        D: Deserializer<'de>,
    {
        let v: Vec<(K, V)> = Vec::deserialize(d)?;
        let n = v.len();
        let m: BTreeMap<K, V> = v.into_iter().collect();
        if m.len() != n {
            return Err(serde::de::Error::custom("conjugator listed twice"));
        }
        Ok(m)
    }
}

impl<E: Clone + Ord + std::fmt::Debug> SetSpec<E> {
    pub fn explicit(elements: impl IntoIterator<Item = E>) -> Self {
        SetSpec::Explicit {
            elements: elements.into_iter().collect(),
        }
    }

    pub fn ball(radius: Rational) -> Result<Self> {
        if radius.is_negative() || radius.is_zero() {
            return Err(Error::InvalidInput(format!(
                "ball radius {radius} is not positive"
            )));
        }
        Ok(SetSpec::Ball { radius })
    }

    pub fn star(self) -> Self {
        SetSpec::Star {
            inner: Box::new(self),
        }
    }

    pub fn sharp(self) -> Self {
        SetSpec::Sharp {
            inner: Box::new(self),
        }
    }

    /// All conjugates of `self`, i.e. the conjugated union with no exceptions.
    pub fn all_conjugates(self) -> Self {
        SetSpec::Conjugated {
            exceptions: BTreeMap::new(),
            default: Box::new(self),
        }
    }

    /// Rejects non-positive radii and elements foreign to `group`.
    pub fn validate<G: Group<Elem = E>>(&self, group: &G) -> Result<()> {
        match self {
            SetSpec::Explicit { elements } => match elements.iter().find(|e| !group.contains(e)) {
                Some(e) => Err(Error::KindMismatch(format!("{e:?} is not a group element"))),
                None => Ok(()),
            },
            SetSpec::Ball { radius } => {
                if radius.is_negative() || radius.is_zero() {
                    Err(Error::InvalidInput(format!(
                        "ball radius {radius} is not positive"
                    )))
                } else {
                    Ok(())
                }
            }
            SetSpec::Star { inner } | SetSpec::Sharp { inner } => inner.validate(group),
            SetSpec::Conjugated {
                exceptions,
                default,
            } => {
                for (g, s) in exceptions {
                    if !group.contains(g) {
                        return Err(Error::KindMismatch(format!("{g:?} is not a group element")));
                    }
                    s.validate(group)?;
                }
                default.validate(group)
            }
        }
    }
}

/// Exact membership test.
///
/// For a conjugated union over a finite group every conjugator is scanned.
/// Over an infinite group only the listed conjugators and the identity (with
/// the default set) are tried, so `false` there means "not witnessed".
pub fn set_member<G: Group>(group: &G, spec: &SetSpec<G::Elem>, x: &G::Elem) -> Result<bool> {
    if !group.contains(x) {
        return Err(Error::KindMismatch(format!("{x:?} is not a group element")));
    }
    member(group, spec, x)
}

fn member<G: Group>(group: &G, spec: &SetSpec<G::Elem>, x: &G::Elem) -> Result<bool> {
    Ok(match spec {
        SetSpec::Explicit { elements } => elements.contains(x),
        SetSpec::Ball { radius } => match group.dist_from_identity(x) {
            Some(d) => d < *radius,
            None => {
                return Err(Error::KindMismatch(
                    "ball in a group without a metric".into(),
                ))
            }
        },
        SetSpec::Star { inner } => {
            group.is_identity(x) || member(group, inner, x)? || member(group, inner, &group.inv(x))?
        }
        SetSpec::Sharp { inner } => group.is_identity(x) || member(group, inner, x)?,
        SetSpec::Conjugated {
            exceptions,
            default,
        } => {
            // x ∈ g·S·g⁻¹  iff  g⁻¹·x·g ∈ S
            let back = |g: &G::Elem| group.conjugate(&group.inv(g), x);
            for (g, s) in exceptions {
                if member(group, s, &back(g))? {
                    return Ok(true);
                }
            }
            match group.elements() {
                Some(all) => {
                    for g in all.iter().filter(|g| !exceptions.contains_key(g)) {
                        if member(group, default, &back(g))? {
                            return Ok(true);
                        }
                    }
                    false
                }
                None => !exceptions.contains_key(&group.identity()) && member(group, default, x)?,
            }
        }
    })
}

/// Whether products over increasing chains use `S*` (group topologies) or
/// `S#` (semigroup topologies).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Group,
    Semigroup,
}

/// How a factor lies in the closed set at its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepMode {
    Plain,
    Inverse,
    Identity,
}

/// Membership of `x` in `S*` (group mode) or `S#` (semigroup mode), reporting
/// which part of the closure it came from.
pub fn closed_member<G: Group>(
    group: &G,
    spec: &SetSpec<G::Elem>,
    mode: Mode,
    x: &G::Elem,
) -> Result<Option<StepMode>> {
    if set_member(group, spec, x)? {
        Ok(Some(StepMode::Plain))
    } else if mode == Mode::Group && member(group, spec, &group.inv(x))? {
        Ok(Some(StepMode::Inverse))
    } else if group.is_identity(x) {
        Ok(Some(StepMode::Identity))
    } else {
        Ok(None)
    }
}

/// A ℚ-indexed family of sets: finitely many exceptions, a default elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "E: Serialize + Ord",
    deserialize = "E: Deserialize<'de> + Ord"
))]
pub struct QTuple<E> {
    #[serde(default = "BTreeMap::new")]
    pub exceptions: BTreeMap<Rational, SetSpec<E>>,
    pub default: SetSpec<E>,
}

impl<E: Clone + Ord + std::fmt::Debug> QTuple<E> {
    pub fn constant(default: SetSpec<E>) -> Self {
        QTuple {
            exceptions: BTreeMap::new(),
            default,
        }
    }

    pub fn with(mut self, q: Rational, spec: SetSpec<E>) -> Self {
        self.exceptions.insert(q, spec);
        self
    }

    pub fn resolve(&self, q: &Rational) -> &SetSpec<E> {
        self.exceptions.get(q).unwrap_or(&self.default)
    }

    pub fn validate<G: Group<Elem = E>>(&self, group: &G) -> Result<()> {
        self.exceptions
            .values()
            .try_for_each(|s| s.validate(group))?;
        self.default.validate(group)
    }
}

pub fn resolve<'a, E: Clone + Ord + std::fmt::Debug>(
    tuple: &'a QTuple<E>,
    q: &Rational,
) -> &'a SetSpec<E> {
    tuple.resolve(q)
}
