//! One function per subcommand; each returns the JSON report and a summary.

use std::collections::BTreeSet;

use anyhow::{anyhow, bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use canontop::actions::{
    check_tau_remark, ElemSet, FiniteAction, FiniteGroup, DEFAULT_TUPLE_BUDGET,
};
use canontop::bergman::{
    minimal_nbhd_finite, u_set_member, verify_word_witness, Mode, QTuple, WordWitness,
};
use canontop::ring_embed::verify_embedding_identities;
use canontop::witnesses::{
    build_separation_witness_with_budget, cantor_claim_witness, random_instance,
    verify_cantor_witness, verify_separation_witness, CantorInstance, CantorWitness, NbhdSpec,
    SeparationBundle, MAX_GRID_N,
};
use canontop::{Coeff, CoeffGroup, Rational};

use crate::{input, Command};

pub const SCHEMA_VERSION: u32 = 1;

pub struct Output {
    pub json: String,
    pub pass: bool,
    pub summary: String,
}

fn emit(command: &str, pass: bool, payload: impl Serialize, summary: String) -> Result<Output> {
    let mut doc = match serde_json::to_value(payload)? {
        Value::Object(map) => map,
        other => bail!("report payload must be an object, got {other}"),
    };
    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
    doc.insert("command".into(), json!(command));
    doc.insert("pass".into(), json!(pass));
    Ok(Output {
        json: serde_json::to_string_pretty(&doc)?,
        pass,
        summary,
    })
}

fn read_value(path: &str) -> Result<Value> {
    input::read_json(path)
}

pub fn run(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::VerifyRingIdentities {
            ring,
            seed,
            samples,
        } => {
            let ring = input::ring(ring)?;
            let report = verify_embedding_identities(&ring, *seed, *samples)?;
            let failing: Vec<&str> = report
                .identities
                .iter()
                .filter(|r| !r.pass)
                .map(|r| r.name.as_str())
                .collect();
            let mut summary = report.to_string();
            if !failing.is_empty() {
                summary += &format!("; failing: {}", failing.join(", "));
            }
            emit(
                "verify-ring-identities",
                report.pass,
                json!({ "report": report }),
                summary,
            )
        }
        Command::SeparationWitness {
            epsilon,
            coeffs,
            fixture,
            budget,
        } => {
            let fx = match fixture {
                Some(path) => serde_json::from_value::<SeparationFixture>(read_value(path)?)
                    .with_context(|| format!("parsing {path}"))?,
                None => {
                    let eps: Rational = epsilon.as_deref().unwrap_or_default().parse()?;
                    let group = input::coeff_group(&coeffs.group)?;
                    let a = input::coeff(&group, coeffs.element.as_deref())?;
                    SeparationFixture {
                        group: (*group).clone(),
                        a,
                        spec: NbhdSpec::uniform(eps),
                        bundle: None,
                    }
                }
            };
            separation(fx, budget.unwrap_or(MAX_GRID_N))
        }
        Command::CantorClaim {
            fixture,
            seed,
            max_dom,
            max_support,
        } => {
            let fx = match fixture {
                Some(path) => {
                    let v = read_value(path)?;
                    if v.get("instance").is_some() {
                        serde_json::from_value(v)?
                    } else {
                        CantorFixture {
                            instance: serde_json::from_value(v)?,
                            witness: None,
                        }
                    }
                }
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    CantorFixture {
                        instance: random_instance(&mut rng, *max_dom, *max_support),
                        witness: None,
                    }
                }
            };
            cantor(fx)
        }
        Command::BergmanMember {
            group,
            fixture,
            element,
            mode,
        } => {
            let v = read_value(fixture)?;
            let fx: BergmanFixture = if v.get("tuple").is_some() {
                serde_json::from_value(v)?
            } else {
                BergmanFixture {
                    tuple: serde_json::from_value(v)?,
                    group: None,
                    element: None,
                    mode: None,
                    member: None,
                    witness: None,
                }
            };
            let g = match (&group.group, &fx.group) {
                (Some(name), _) => input::finite_group(name)?.1,
                (None, Some(g)) => g.clone(),
                (None, None) => bail!("--group is required"),
            };
            let element = element
                .or(fx.element)
                .ok_or_else(|| anyhow!("--element is required"))?;
            let mode = mode.map(Mode::from).or(fx.mode).unwrap_or(Mode::Group);
            bergman_member(g, fx, element, mode)
        }
        Command::MinimalNbhd { group, set, mode } => {
            let (name, g) = input::finite_group(
                group
                    .group
                    .as_deref()
                    .ok_or_else(|| anyhow!("--group is required"))?,
            )?;
            minimal_nbhd(&name, g, set.iter().copied().collect(), (*mode).into())
        }
        Command::Orbits { action, fixed } => {
            let (name, a) = input::action(action)?;
            orbits(&name, &a, fixed.iter().copied().collect())
        }
        Command::CheckTau {
            action,
            kernel,
            all_kernels,
        } => {
            let (name, a) = input::action(action)?;
            let kernels: Vec<ElemSet> = if *all_kernels {
                a.group().normal_subgroups()
            } else if let Some(k) = kernel {
                vec![k.iter().copied().collect()]
            } else {
                vec![a.kernel().clone()]
            };
            check_tau(&name, &a, kernels)
        }
        Command::CountOrbits {
            action,
            power,
            budget,
        } => {
            let (name, a) = input::action(action)?;
            count_orbits(&name, &a, *power, budget.unwrap_or(DEFAULT_TUPLE_BUDGET))
        }
    }
}

#[derive(Deserialize)]
struct SeparationFixture {
    group: CoeffGroup,
    a: Coeff,
    spec: NbhdSpec,
    #[serde(default)]
    bundle: Option<SeparationBundle>,
}

fn separation(fx: SeparationFixture, budget: u64) -> Result<Output> {
    let group = std::sync::Arc::new(fx.group);
    group.check(&fx.a)?;
    let bundle = match fx.bundle {
        Some(b) => b,
        None => build_separation_witness_with_budget(&group, &fx.a, &fx.spec, budget)?,
    };
    let verification = verify_separation_witness(&bundle, &fx.spec, &fx.a);
    let ok = verification.clauses.iter().filter(|c| c.pass).count();
    let summary = format!(
        "n = {}, total = {}: {}/{} clauses pass",
        bundle.n,
        bundle.total,
        ok,
        verification.clauses.len()
    );
    let payload = json!({
        "group": *group,
        "a": fx.a,
        "spec": fx.spec,
        "bundle": bundle,
        "verification": verification,
    });
    emit("separation-witness", verification.pass, payload, summary)
}

#[derive(Deserialize)]
struct CantorFixture {
    instance: CantorInstance,
    #[serde(default)]
    witness: Option<CantorWitness>,
}

fn cantor(fx: CantorFixture) -> Result<Output> {
    let witness = match fx.witness {
        Some(w) => w,
        None => cantor_claim_witness(&fx.instance)?,
    };
    let verification = verify_cantor_witness(&fx.instance, &witness);
    let eta = &witness.eta;
    let summary = format!(
        "triple {}, eta moves {} core points with tail shifts {:?}: {}",
        witness.triple,
        eta.moves().len(),
        eta.shifts(),
        if verification.pass {
            "verified".to_string()
        } else {
            format!("failed {:?}", verification.failed())
        }
    );
    let payload =
        json!({ "instance": fx.instance, "witness": witness, "verification": verification });
    emit("cantor-claim", verification.pass, payload, summary)
}

#[derive(Deserialize)]
struct BergmanFixture {
    tuple: QTuple<usize>,
    #[serde(default)]
    group: Option<FiniteGroup>,
    #[serde(default)]
    element: Option<usize>,
    #[serde(default)]
    mode: Option<Mode>,
    #[serde(default)]
    member: Option<bool>,
    #[serde(default)]
    witness: Option<WordWitness<usize>>,
}

fn bergman_member(
    g: FiniteGroup,
    fx: BergmanFixture,
    element: usize,
    mode: Mode,
) -> Result<Output> {
    if element >= g.order() {
        bail!("element {element} is not in a group of order {}", g.order());
    }
    fx.tuple.validate(&g)?;
    let found = u_set_member(&g, &fx.tuple, mode, element)?;
    let member = found.is_some();
    let witness_verified = found
        .as_ref()
        .is_none_or(|w| verify_word_witness(&g, &fx.tuple, mode, w, &element));
    let given_verified = fx
        .witness
        .as_ref()
        .map(|w| verify_word_witness(&g, &fx.tuple, mode, w, &element));
    let agrees = fx.member.is_none_or(|m| m == member);
    let pass = witness_verified && given_verified != Some(false) && agrees;
    let summary = format!(
        "{element} {} U ({} mode){}",
        if member { "∈" } else { "∉" },
        match mode {
            Mode::Group => "group",
            Mode::Semigroup => "semigroup",
        },
        if pass {
            String::new()
        } else {
            "; witness check failed".into()
        }
    );
    let payload = json!({
        "group": g,
        "tuple": fx.tuple,
        "mode": mode,
        "element": element,
        "member": member,
        "witness": found,
        "witness_verified": witness_verified,
        "given_witness_verified": given_verified,
    });
    emit("bergman-member", pass, payload, summary)
}

/// Closure of `{e}` under right multiplication by every conjugate of `set`.
fn conjugate_closure(g: &FiniteGroup, set: &ElemSet) -> ElemSet {
    let gens: ElemSet = set
        .iter()
        .flat_map(|&s| g.elements().map(move |c| g.conjugate(c, s)))
        .collect();
    let mut out: ElemSet = [g.identity()].into();
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for &s in &gens {
            let y = g.mul(x, s);
            if out.insert(y) {
                frontier.push(y);
            }
        }
    }
    out
}

fn minimal_nbhd(name: &str, g: FiniteGroup, set: ElemSet, mode: Mode) -> Result<Output> {
    if let Some(bad) = set.iter().find(|&&s| s >= g.order()) {
        bail!("element {bad} is not in {name}");
    }
    let nbhd = minimal_nbhd_finite(&g, &set, mode)?;
    let closure = conjugate_closure(&g, &set);
    let normal = g.normal_closure(&set);
    let pass = nbhd == closure && (mode == Mode::Semigroup || nbhd == normal);
    let summary = format!(
        "minimal neighbourhood in {name} has {} of {} elements",
        nbhd.len(),
        g.order()
    );
    let payload = json!({
        "group": name,
        "set": set,
        "mode": mode,
        "neighbourhood": nbhd,
        "conjugate_closure": closure,
        "normal_closure": normal,
    });
    emit("minimal-nbhd", pass, payload, summary)
}

fn orbits(name: &str, a: &FiniteAction, fixed: BTreeSet<usize>) -> Result<Output> {
    let parts = a.orbits(&fixed)?;
    let fixed_list: Vec<usize> = fixed.iter().copied().collect();
    let stab = a.stabilizer(&fixed_list)?;
    let mut covered = vec![0usize; a.points()];
    for p in parts.iter().flatten() {
        covered[*p] += 1;
    }
    let partition = covered.iter().all(|&c| c == 1);
    let mut orbit_stabilizer = true;
    for orbit in &parts {
        let mut with = fixed_list.clone();
        with.push(orbit[0]);
        orbit_stabilizer &= stab.len() == orbit.len() * a.stabilizer(&with)?.len();
    }
    let pass = partition && orbit_stabilizer;
    let summary = format!(
        "{name}: {} orbits of a stabilizer of order {}",
        parts.len(),
        stab.len()
    );
    let payload = json!({
        "action": name,
        "points": a.points(),
        "fixed": fixed,
        "stabilizer": stab,
        "orbits": parts,
        "checks": { "partition": partition, "orbit_stabilizer": orbit_stabilizer },
    });
    emit("orbits", pass, payload, summary)
}

fn check_tau(name: &str, a: &FiniteAction, kernels: Vec<ElemSet>) -> Result<Output> {
    let mut runs = Vec::new();
    for k in kernels {
        let with = a.with_kernel(k.clone())?;
        runs.push(json!({ "kernel": k, "report": check_tau_remark(&with)? }));
    }
    let passed = runs
        .iter()
        .filter(|r| r["report"]["pass"] == json!(true))
        .count();
    let pass = passed == runs.len();
    let summary = format!(
        "{name}: {passed}/{} kernels pass all four clauses",
        runs.len()
    );
    emit(
        "check-tau",
        pass,
        json!({ "action": name, "runs": runs }),
        summary,
    )
}

fn count_orbits(name: &str, a: &FiniteAction, power: u32, budget: u128) -> Result<Output> {
    let count = a.orbit_count_power(power, budget)?;
    // Burnside: average number of fixed tuples
    let fixed_total: u128 = a
        .group()
        .elements()
        .map(|g| ((0..a.points()).filter(|&x| a.act(g, x) == x).count() as u128).pow(power))
        .sum();
    let burnside = fixed_total / a.group().order() as u128;
    let pass = burnside * a.group().order() as u128 == fixed_total && burnside == count;
    let summary = format!("{name}: {count} orbits on {power}-tuples");
    let payload = json!({ "action": name, "power": power, "count": count, "burnside": burnside });
    emit("count-orbits", pass, payload, summary)
}
