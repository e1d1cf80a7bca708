//! Exact membership in `U((S_q))` and `U'((S_q))` over a finite group.
//!
//! Only finitely many indices carry an exceptional set, so ℚ splits into
//! stages: the open gaps between consecutive exceptions (each holding
//! infinitely many indices with the default set) and the exceptions
//! themselves. A chain may use a gap any number of times and each exception
//! at most once, so the accepted set is
//! `M₀·E₁·M₁·E₂ ⋯ E_m·M_m` with `M` the monoid generated by the closed
//! default and `E_i` the closed exceptions. Breadth-first search over
//! `(stage, element)` states decides it exactly.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::spec::{closed_member, set_member, Mode, QTuple, SetSpec, StepMode};
use crate::actions::{ElemSet, FiniteGroup};
use crate::algebra::{Group, Rational};
use crate::error::Result;

/// One factor of a chain product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "E: Serialize", deserialize = "E: Deserialize<'de>"))]
pub struct WitnessStep<E> {
    pub q: Rational,
    pub factor: E,
    pub mode: StepMode,
}

/// A product `f₁⋯f_n` with `f_i ∈ S_{q_i}` closed per mode and `q₁ < … < q_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "E: Serialize", deserialize = "E: Deserialize<'de>"))]
pub struct WordWitness<E> {
    pub steps: Vec<WitnessStep<E>>,
}

impl<E> Default for WordWitness<E> {
    fn default() -> Self {
        WordWitness { steps: Vec::new() }
    }
}

/// Re-checks a witness: strictly increasing indices, each factor in its
/// closed set in the way its step mode claims, and the product.
pub fn verify_word_witness<G: Group>(
    group: &G,
    tuple: &QTuple<G::Elem>,
    mode: Mode,
    witness: &WordWitness<G::Elem>,
    claimed: &G::Elem,
) -> bool {
    if witness.steps.windows(2).any(|w| w[0].q >= w[1].q) {
        return false;
    }
    for step in &witness.steps {
        let spec = tuple.resolve(&step.q);
        let ok = match step.mode {
            StepMode::Plain => set_member(group, spec, &step.factor),
            StepMode::Inverse if mode == Mode::Group => {
                set_member(group, spec, &group.inv(&step.factor))
            }
            StepMode::Inverse => Ok(false),
            StepMode::Identity => Ok(group.is_identity(&step.factor)),
        };
        if ok != Ok(true) {
            return false;
        }
    }
    let product = group.product(witness.steps.iter().map(|s| &s.factor));
    group.contains(claimed) && product == *claimed
}

enum Stage {
    /// Open interval of indices using the default set.
    Gap {
        lo: Option<Rational>,
        hi: Option<Rational>,
    },
    Exception(Rational),
}

struct Search<'a> {
    group: &'a FiniteGroup,
    stages: Vec<Stage>,
    /// Non-identity factors available at each stage.
    factors: Vec<Vec<(usize, StepMode)>>,
    /// `(previous state, factor used)` for each reached state.
    parent: Vec<Option<(usize, Option<(usize, StepMode)>)>>,
}

impl<'a> Search<'a> {
    fn run(group: &'a FiniteGroup, tuple: &QTuple<usize>, mode: Mode) -> Result<Self> {
        tuple.validate(group)?;
        let closed = |spec: &SetSpec<usize>| -> Result<Vec<(usize, StepMode)>> {
            let mut out = Vec::new();
            for x in group.elements().filter(|&x| x != group.identity()) {
                if let Some(m) = closed_member(group, spec, mode, &x)? {
                    out.push((x, m));
                }
            }
            Ok(out)
        };
        let mut stages = Vec::new();
        let mut factors = Vec::new();
        let default = closed(&tuple.default)?;
        let mut lo = None;
        for (q, spec) in &tuple.exceptions {
            stages.push(Stage::Gap {
                lo: lo.clone(),
                hi: Some(q.clone()),
            });
            factors.push(default.clone());
            stages.push(Stage::Exception(q.clone()));
            factors.push(closed(spec)?);
            lo = Some(q.clone());
        }
        stages.push(Stage::Gap { lo, hi: None });
        factors.push(default);

        let n = group.order();
        let mut search = Search {
            group,
            stages,
            factors,
            parent: vec![None; n * (2 * tuple.exceptions.len() + 1)],
        };
        search.bfs();
        Ok(search)
    }

    fn bfs(&mut self) {
        let n = self.group.order();
        let last = self.stages.len() - 1;
        let start = self.group.identity();
        self.parent[start] = Some((start, None));
        let mut queue = VecDeque::from([start]);
        while let Some(state) = queue.pop_front() {
            let (stage, x) = (state / n, state % n);
            let mut push =
                |next: usize, via: Option<(usize, StepMode)>, queue: &mut VecDeque<usize>| {
                    if self.parent[next].is_none() {
                        self.parent[next] = Some((state, via));
                        queue.push_back(next);
                    }
                };
            match self.stages[stage] {
                Stage::Gap { .. } => {
                    for &(f, m) in &self.factors[stage] {
                        push(stage * n + self.group.mul(x, f), Some((f, m)), &mut queue);
                    }
                    if stage < last {
                        push((stage + 1) * n + x, None, &mut queue);
                    }
                }
                Stage::Exception(_) => {
                    push((stage + 1) * n + x, None, &mut queue);
                    for &(f, m) in &self.factors[stage] {
                        push(
                            (stage + 1) * n + self.group.mul(x, f),
                            Some((f, m)),
                            &mut queue,
                        );
                    }
                }
            }
        }
    }

    fn accepted(&self) -> ElemSet {
        let n = self.group.order();
        let base = (self.stages.len() - 1) * n;
        (0..n)
            .filter(|&x| self.parent[base + x].is_some())
            .collect()
    }

    fn witness(&self, g: usize) -> Option<WordWitness<usize>> {
        let n = self.group.order();
        let mut state = (self.stages.len() - 1) * n + g;
        self.parent[state]?;
        // factors per stage, in reverse order
        let mut per_stage: Vec<Vec<(usize, StepMode)>> = vec![Vec::new(); self.stages.len()];
        while state != self.group.identity() {
            let (prev, via) = self.parent[state].expect("reached states have parents");
            if let Some(f) = via {
                // the factor was applied while leaving `prev`'s stage for exceptions
                per_stage[prev / n].push(f);
            }
            state = prev;
        }
        let mut steps = Vec::new();
        for (stage, mut fs) in per_stage.into_iter().enumerate() {
            fs.reverse();
            let qs = match &self.stages[stage] {
                Stage::Exception(q) => vec![q.clone()],
                Stage::Gap { lo, hi } => fresh_indices(lo.as_ref(), hi.as_ref(), fs.len()),
            };
            steps.extend(
                fs.into_iter()
                    .zip(qs)
                    .map(|((factor, mode), q)| WitnessStep { q, factor, mode }),
            );
        }
        Some(WordWitness { steps })
    }
}

/// `k` increasing rationals strictly inside `(lo, hi)`.
fn fresh_indices(lo: Option<&Rational>, hi: Option<&Rational>, k: usize) -> Vec<Rational> {
    let k = k as i64;
    (0..k)
        .map(|j| match (lo, hi) {
            (None, None) => Rational::from(j),
            (Some(a), None) => a + &Rational::from(j + 1),
            (None, Some(b)) => b - &Rational::from(k - j),
            (Some(a), Some(b)) => a + &(&(b - a) * &Rational::frac(j + 1, k + 1)),
        })
        .collect()
}

/// Decides `g ∈ U((S_q))` (group mode) or `g ∈ U'((S_q))` (semigroup mode)
/// and returns a witness chain when it is.
pub fn u_set_member(
    group: &FiniteGroup,
    tuple: &QTuple<usize>,
    mode: Mode,
    g: usize,
) -> Result<Option<WordWitness<usize>>> {
    let search = Search::run(group, tuple, mode)?;
    if !group.contains(&g) {
        return Err(crate::Error::KindMismatch(format!(
            "{g} is not a group element"
        )));
    }
    Ok(search.witness(g))
}

/// The whole set `U((S_q))` or `U'((S_q))`.
pub fn u_set(group: &FiniteGroup, tuple: &QTuple<usize>, mode: Mode) -> Result<ElemSet> {
    Ok(Search::run(group, tuple, mode)?.accepted())
}

/// The smallest U-set for the constant tuple of all conjugates of `s`: the
/// normal closure in group mode, the monoid generated by the conjugates of
/// `s` in semigroup mode.
pub fn minimal_nbhd_finite(group: &FiniteGroup, s: &ElemSet, mode: Mode) -> Result<ElemSet> {
    let tuple = QTuple::constant(SetSpec::explicit(s.iter().copied()).all_conjugates());
    u_set(group, &tuple, mode)
}
