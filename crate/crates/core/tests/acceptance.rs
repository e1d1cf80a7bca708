//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use canontop::actions::{check_tau_remark, small_groups, tau_fixtures, ElemSet, FiniteGroup};
use canontop::bergman::{
    minimal_nbhd_finite, u_set, u_set_member, verify_word_witness, Mode, QTuple, SetSpec,
};
use canontop::formal::integers;
use canontop::ring_embed::verify_embedding_identities;
use canontop::witnesses::{
    build_separation_witness, cantor_claim_witness, random_instance, verify_cantor_witness,
    verify_separation_witness, NbhdSpec,
};
use canontop::{
    Coeff, CoeffGroup, FinPerm, FormalSum, Index, IndexSort, PlHomeo, Rational, RingDescriptor,
};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], summary: String) -> Self {
        if failures.is_empty() {
            Outcome {
                pass: true,
                detail: summary,
            }
        } else {
            let shown: Vec<&str> = failures.iter().take(4).map(String::as_str).collect();
            Outcome {
                pass: false,
                detail: format!(
                    "{summary}; {} failure(s): {}",
                    failures.len(),
                    shown.join("; ")
                ),
            }
        }
    }
}

fn within(failures: &mut Vec<String>, what: &str, took: Duration, limit: Duration) {
    if took >= limit {
        failures.push(format!("{what} took {took:.2?}, limit {limit:.2?}"));
    }
}

// 1 ------------------------------------------------------------------------

const RING_IDENTITIES: [&str; 6] = ["I1", "I2", "I3", "I4", "I5", "I6"];

fn ring_identities() -> Outcome {
    let start = Instant::now();
    let mut rings = vec![RingDescriptor::free(["x", "y"]).unwrap()];
    rings.extend((2..=12).map(|n| RingDescriptor::zmod(n).unwrap()));
    rings.push(RingDescriptor::matrix(RingDescriptor::zmod(3).unwrap(), 2).unwrap());
    let mut failures = Vec::new();
    for (seed, ring) in rings.iter().enumerate() {
        let report = match verify_embedding_identities(ring, seed as u64, 1000) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{}: {e}", ring.name()));
                continue;
            }
        };
        if ring.is_finite() && report.samples != 1000 {
            failures.push(format!("{}: {} samples", ring.name(), report.samples));
        }
        for name in RING_IDENTITIES {
            match report.identities.iter().find(|r| r.name == name) {
                Some(r) if r.pass => {}
                Some(r) => {
                    let cx = r.counterexample.as_ref().map_or(String::new(), |c| {
                        format!(" (lhs {} vs rhs {})", c.lhs, c.rhs)
                    });
                    failures.push(format!("{} {name}{cx}", ring.name()));
                }
                None => failures.push(format!("{} {name} missing", ring.name())),
            }
        }
    }
    let took = start.elapsed();
    within(&mut failures, "suite", took, Duration::from_secs(5));
    Outcome::new(&failures, format!("{} rings in {took:.2?}", rings.len()))
}

// 2 ------------------------------------------------------------------------

fn least_n_by_search(eps: &Rational) -> u64 {
    (1u64..)
        .find(|&n| Rational::new(1, 3 * n).unwrap() < *eps)
        .unwrap()
}

fn separation_witnesses() -> Outcome {
    let s3 = Arc::new(CoeffGroup::named("S3").unwrap());
    let groups: Vec<(&str, Arc<CoeffGroup>, Vec<Coeff>)> = vec![
        ("Z", integers(), [1, -1, 2, -7].map(Coeff::int).to_vec()),
        (
            "Z2",
            Arc::new(CoeffGroup::named("Z2").unwrap()),
            vec![Coeff::Elem(1)],
        ),
        ("S3", s3.clone(), s3.nonidentity_elements().unwrap()),
    ];
    let mut failures = Vec::new();
    let mut cases = 0;
    let mut slowest = Duration::ZERO;
    for eps in [
        Rational::frac(1, 10),
        Rational::frac(1, 100),
        Rational::frac(1, 1000),
    ] {
        let spec = NbhdSpec::uniform(eps.clone());
        for (name, group, elems) in &groups {
            for a in elems {
                cases += 1;
                let tag = format!("eps {eps}, {name}, a = {a}");
                let start = Instant::now();
                let bundle = match build_separation_witness(group, a, &spec) {
                    Ok(b) => b,
                    Err(e) => {
                        failures.push(format!("{tag}: {e}"));
                        continue;
                    }
                };
                let report = verify_separation_witness(&bundle, &spec, a);
                let took = start.elapsed();
                slowest = slowest.max(took);
                if !report.pass {
                    failures.push(format!("{tag}: clauses {:?}", report.failed()));
                }
                let expected: BTreeMap<Index, Coeff> = [
                    (Index::rat(1, 3), a.clone()),
                    (Index::rat(2, 3), group.inv(a)),
                ]
                .into();
                if *bundle.total.terms() != expected {
                    failures.push(format!("{tag}: total {}", bundle.total));
                }
                let n = least_n_by_search(&eps);
                if bundle.n != n {
                    failures.push(format!("{tag}: n = {} but least n is {n}", bundle.n));
                }
                within(&mut failures, &tag, took, Duration::from_secs(1));
            }
        }
    }
    Outcome::new(&failures, format!("{cases} cases, slowest {slowest:.2?}"))
}

// 3 ------------------------------------------------------------------------

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Sum of signed point masses, keyed by reduced fractions.
fn add_mass(acc: &mut BTreeMap<(i64, i64), i64>, p: i64, q: i64, c: i64) {
    let g = gcd(p, q);
    let e = acc.entry((p / g, q / g)).or_insert(0);
    *e += c;
    if *e == 0 {
        acc.remove(&(p / g, q / g));
    }
}

fn telescoping() -> Outcome {
    let mut failures = Vec::new();
    let target: BTreeMap<(i64, i64), i64> = [((1, 3), 1), ((2, 3), -1)].into();
    for n in 1..=50i64 {
        let mut acc = BTreeMap::new();
        for k in n..2 * n {
            add_mass(&mut acc, k, 3 * n, 1);
            add_mass(&mut acc, 2 * k + 1, 6 * n, -1);
        }
        for k in n + 1..=2 * n {
            add_mass(&mut acc, k, 3 * n, -1);
            add_mass(&mut acc, 2 * k - 1, 6 * n, 1);
        }
        if acc != target {
            failures.push(format!("n = {n}: oracle sum {acc:?}"));
        }
        // the library's v1 + v2 at the same n
        let spec = NbhdSpec::uniform(Rational::frac(1, 3 * n - 1));
        match build_separation_witness(&integers(), &Coeff::int(1), &spec) {
            Ok(b) if b.n == n as u64 => {
                let sum = b.v1.combine(&b.v2).unwrap();
                let as_masses: BTreeMap<(i64, i64), i64> = sum
                    .terms()
                    .iter()
                    .map(|(i, c)| match (i, c) {
                        (Index::Rat(r), Coeff::Int(v)) => (
                            (
                                i64::try_from(r.numer()).unwrap(),
                                i64::try_from(r.denom()).unwrap(),
                            ),
                            i64::try_from(v).unwrap(),
                        ),
                        other => panic!("unexpected term {other:?}"),
                    })
                    .collect();
                if as_masses != target {
                    failures.push(format!("n = {n}: library v1 + v2 = {sum}"));
                }
            }
            Ok(b) => failures.push(format!("n = {n}: builder chose n = {}", b.n)),
            Err(e) => failures.push(format!("n = {n}: {e}")),
        }
    }
    Outcome::new(&failures, "n = 1..=50".into())
}

// 4 ------------------------------------------------------------------------

fn eval_spec(g: &FiniteGroup, spec: &SetSpec<usize>) -> ElemSet {
    match spec {
        SetSpec::Explicit { elements } => elements.clone(),
        SetSpec::Star { inner } => {
            let s = eval_spec(g, inner);
            let inv: ElemSet = s.iter().map(|&x| g.inv(x)).collect();
            s.union(&inv).copied().chain([g.identity()]).collect()
        }
        SetSpec::Sharp { inner } => eval_spec(g, inner)
            .into_iter()
            .chain([g.identity()])
            .collect(),
        other => panic!("oracle does not evaluate {other:?}"),
    }
}

fn closed(g: &FiniteGroup, spec: &SetSpec<usize>, mode: Mode) -> ElemSet {
    let s = eval_spec(g, spec);
    let mut out: ElemSet = s.iter().copied().chain([g.identity()]).collect();
    if mode == Mode::Group {
        out.extend(s.iter().map(|&x| g.inv(x)));
    }
    out
}

fn set_product(g: &FiniteGroup, a: &ElemSet, b: &ElemSet) -> ElemSet {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| g.mul(x, y)))
        .collect()
}

/// `M₀E₁M₁…E_mM_m` with every `M` the products of at most |G| default factors.
fn u_set_by_enumeration(g: &FiniteGroup, tuple: &QTuple<usize>, mode: Mode) -> ElemSet {
    let d = closed(g, &tuple.default, mode);
    let mut m: ElemSet = [g.identity()].into();
    for _ in 0..g.order() {
        m = set_product(g, &m, &d);
    }
    let mut u = m.clone();
    for spec in tuple.exceptions.values() {
        u = set_product(g, &set_product(g, &u, &closed(g, spec, mode)), &m);
    }
    u
}

fn random_spec(rng: &mut ChaCha8Rng, g: &FiniteGroup, max: usize) -> SetSpec<usize> {
    let k = rng.gen_range(0..=max);
    let base = SetSpec::explicit((0..k).map(|_| rng.gen_range(0..g.order())));
    match rng.gen_range(0..4) {
        0 => base.star(),
        1 => base.sharp(),
        _ => base,
    }
}

fn random_tuple(rng: &mut ChaCha8Rng, g: &FiniteGroup) -> QTuple<usize> {
    // a sparse default keeps many U-sets proper subsets
    let default = if rng.gen_bool(0.4) {
        SetSpec::explicit([])
    } else {
        random_spec(rng, g, 1)
    };
    let mut t = QTuple::constant(default);
    for _ in 0..rng.gen_range(0..=3) {
        let q = Rational::frac(rng.gen_range(-6..=6), rng.gen_range(1..=4));
        t = t.with(q, random_spec(rng, g, 2));
    }
    t
}

/// Normal closure as the closure of `{e}` under products of conjugates and inverses.
fn normal_closure_oracle(g: &FiniteGroup, s: &ElemSet) -> ElemSet {
    let mut gens = ElemSet::new();
    for &x in s {
        for c in 0..g.order() {
            let y = g.mul(g.mul(c, x), g.inv(c));
            gens.insert(y);
            gens.insert(g.inv(y));
        }
    }
    let mut out: ElemSet = [g.identity()].into();
    loop {
        let next: ElemSet = out.union(&set_product(g, &out, &gens)).copied().collect();
        if next == out {
            return out;
        }
        out = next;
    }
}

fn bergman_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    let mut checks = 0usize;
    let mut proper = 0usize;
    let groups: Vec<_> = small_groups()
        .into_iter()
        .filter(|(_, g)| g.order() <= 16)
        .collect();
    for (name, g) in &groups {
        for t in 0..24 {
            let tuple = random_tuple(&mut rng, g);
            for mode in [Mode::Group, Mode::Semigroup] {
                let oracle = u_set_by_enumeration(g, &tuple, mode);
                proper += usize::from(oracle.len() < g.order());
                match u_set(g, &tuple, mode) {
                    Ok(u) if u == oracle => {}
                    Ok(u) => {
                        failures.push(format!("{name} tuple {t} {mode:?}: {u:?} vs {oracle:?}"))
                    }
                    Err(e) => failures.push(format!("{name} tuple {t}: {e}")),
                }
                for x in 0..g.order() {
                    checks += 1;
                    match u_set_member(g, &tuple, mode, x) {
                        Ok(Some(w)) if oracle.contains(&x) => {
                            if !verify_word_witness(g, &tuple, mode, &w, &x) {
                                failures.push(format!(
                                    "{name} tuple {t} {mode:?}: bad witness for {x}"
                                ));
                            }
                        }
                        Ok(None) if !oracle.contains(&x) => {}
                        Ok(_) => failures
                            .push(format!("{name} tuple {t} {mode:?}: element {x} disagrees")),
                        Err(e) => failures.push(format!("{name} tuple {t}: {e}")),
                    }
                }
            }
        }
        for s in 0..g.order() {
            let set: ElemSet = [s].into();
            let got = minimal_nbhd_finite(g, &set, Mode::Group);
            let want = normal_closure_oracle(g, &set);
            if got.as_ref() != Ok(&want) {
                failures.push(format!(
                    "{name}: minimal neighbourhood of {{{s}}} is {got:?}, want {want:?}"
                ));
            }
        }
    }
    Outcome::new(
        &failures,
        format!(
            "{} groups, {checks} membership checks, {proper} proper U-sets",
            groups.len()
        ),
    )
}

// 5 ------------------------------------------------------------------------

fn conjugacy_classes(g: &FiniteGroup) -> Vec<ElemSet> {
    let mut seen = ElemSet::new();
    let mut out = Vec::new();
    for x in 0..g.order() {
        if seen.contains(&x) {
            continue;
        }
        let class: ElemSet = (0..g.order())
            .map(|c| g.mul(g.mul(c, x), g.inv(c)))
            .collect();
        seen.extend(class.iter().copied());
        out.push(class);
    }
    out
}

/// Unions of conjugacy classes closed under multiplication.
fn normal_subgroups_oracle(g: &FiniteGroup) -> BTreeSet<ElemSet> {
    let classes = conjugacy_classes(g);
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << classes.len() {
        let set: ElemSet = classes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .flat_map(|(_, c)| c.iter().copied())
            .collect();
        if set.contains(&g.identity()) && set_product(g, &set, &set).is_subset(&set) {
            out.insert(set);
        }
    }
    out
}

fn tau_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for (name, action) in tau_fixtures() {
        let g = action.group();
        if g.order() > 24 || action.points() > 8 {
            continue;
        }
        let kernels: BTreeSet<ElemSet> = g.normal_subgroups().into_iter().collect();
        if kernels != normal_subgroups_oracle(g) {
            failures.push(format!("{name}: normal subgroup list is incomplete"));
        }
        for n in kernels {
            runs += 1;
            let a = match action.with_kernel(n.clone()) {
                Ok(a) => a,
                Err(e) => {
                    failures.push(format!("{name} N = {n:?}: {e}"));
                    continue;
                }
            };
            match check_tau_remark(&a) {
                Ok(r) => {
                    let s = &r.separation;
                    let closed_oracle =
                        (0..a.points()).all(|x| n.iter().all(|&k| a.act(k, x) == x));
                    if !r.pass {
                        failures.push(format!("{name} N = {n:?}: report fails"));
                    }
                    if !(s.stabilizers_closed == s.t1 && s.t1 == s.hausdorff) {
                        failures.push(format!("{name} N = {n:?}: separation equivalence splits"));
                    }
                    if s.stabilizers_closed != closed_oracle {
                        failures.push(format!("{name} N = {n:?}: stabilizer closedness disagrees"));
                    }
                }
                Err(e) => failures.push(format!("{name} N = {n:?}: {e}")),
            }
        }
    }
    Outcome::new(&failures, format!("{runs} (action, N) pairs"))
}

// 6 ------------------------------------------------------------------------

fn cantor_claim() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    let mut shifted = 0;
    for i in 0..100 {
        let inst = random_instance(&mut rng, 8, 8);
        let w = match cantor_claim_witness(&inst) {
            Ok(w) => w,
            Err(e) => {
                failures.push(format!("instance {i}: {e}"));
                continue;
            }
        };
        let r = verify_cantor_witness(&inst, &w);
        if !r.pass {
            failures.push(format!("instance {i}: clauses {:?}", r.failed()));
        }
        // pointwise: x + h at η(p) equals h at p, far past every touched point
        let support = inst.x_support();
        let t = w.triple;
        let bad = (0..w.eta.bound() + 500).find(|&p| {
            let q = w.eta.apply(p);
            t.level(q) ^ u8::from(support.contains(&q)) != t.level(p)
        });
        if let Some(p) = bad {
            failures.push(format!("instance {i}: equation fails at {p}"));
        }
        let alpha_kept = inst
            .alpha(t)
            .into_iter()
            .flatten()
            .all(|(&d, &v)| w.eta.apply(d) == v);
        if !alpha_kept || t.is_constant() {
            failures.push(format!("instance {i}: alpha or triple"));
        }
        shifted += usize::from(w.eta.to_finperm().is_none());
    }
    let took = start.elapsed();
    within(&mut failures, "100 instances", took, Duration::from_secs(1));
    Outcome::new(
        &failures,
        format!("100 instances in {took:.2?}, {shifted} needed a tail shift"),
    )
}

// 7 ------------------------------------------------------------------------

fn runner() -> TestRunner {
    let config = Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn pl(rng: &mut ChaCha8Rng) -> PlHomeo {
    PlHomeo::sample(rng, 4, 12)
}

fn formal_sum(rng: &mut ChaCha8Rng, group: &Arc<CoeffGroup>, sort: IndexSort) -> FormalSum {
    let k = rng.gen_range(0..5);
    let terms: Vec<(Index, Coeff)> = (0..k)
        .map(|_| {
            let i = match sort {
                IndexSort::Unit => {
                    let q = rng.gen_range(1..=12);
                    Index::rat(rng.gen_range(0..=q), q)
                }
                IndexSort::Nat => Index::Nat(rng.gen_range(0..20)),
            };
            (i, group.sample_nonidentity(rng))
        })
        .collect();
    // repeated indices are combined in order, which is itself a group product
    terms
        .into_iter()
        .fold(FormalSum::zero(group.clone(), sort), |acc, (i, c)| {
            acc.combine(&FormalSum::single(group.clone(), i, c).unwrap())
                .unwrap()
        })
}

fn coefficient_groups() -> Vec<Arc<CoeffGroup>> {
    ["Z", "Z2", "S3"]
        .iter()
        .map(|n| Arc::new(CoeffGroup::named(n).unwrap()))
        .collect()
}

fn algebra_properties() -> Outcome {
    let mut failures = Vec::new();
    let mut record = |name: &str, r: Result<(), proptest::test_runner::TestError<u64>>| {
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };

    record(
        "PL group laws",
        runner().run(&any::<u64>(), |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (u, v, w) = (pl(&mut rng), pl(&mut rng), pl(&mut rng));
            let id = PlHomeo::identity();
            prop_assert_eq!(u.compose(&v).compose(&w), u.compose(&v.compose(&w)));
            prop_assert_eq!(u.compose(&id), u.clone());
            prop_assert_eq!(id.compose(&u), u.clone());
            prop_assert!(u.compose(&u.invert()).is_identity());
            prop_assert!(u.invert().compose(&u).is_identity());
            Ok(())
        }),
    );

    record(
        "sup metric",
        runner().run(&any::<u64>(), |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (u, v, w) = (pl(&mut rng), pl(&mut rng), pl(&mut rng));
            let zero = Rational::zero();
            prop_assert_eq!(u.sup_dist(&u), zero.clone());
            prop_assert_eq!(u.sup_dist(&v), v.sup_dist(&u));
            prop_assert_eq!(u.sup_dist(&v) == zero, u == v);
            prop_assert!(u.sup_dist(&w) <= &u.sup_dist(&v) + &v.sup_dist(&w));
            prop_assert_eq!(u.compose(&w).sup_dist(&v.compose(&w)), u.sup_dist(&v));
            prop_assert_eq!(u.invert().dist_from_identity(), u.dist_from_identity());
            Ok(())
        }),
    );

    record(
        "H(X) group axioms",
        runner().run(&any::<u64>(), |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for group in coefficient_groups() {
                for sort in [IndexSort::Unit, IndexSort::Nat] {
                    let a = formal_sum(&mut rng, &group, sort);
                    let b = formal_sum(&mut rng, &group, sort);
                    let c = formal_sum(&mut rng, &group, sort);
                    let zero = FormalSum::zero(group.clone(), sort);
                    prop_assert_eq!(a.combine(&b)?.combine(&c)?, a.combine(&b.combine(&c)?)?);
                    prop_assert_eq!(a.combine(&zero)?, a.clone());
                    prop_assert_eq!(zero.combine(&a)?, a.clone());
                    prop_assert!(a.combine(&a.negate())?.is_zero());
                    prop_assert!(a.negate().combine(&a)?.is_zero());
                }
            }
            Ok(())
        }),
    );

    record(
        "action compatibility",
        runner().run(&any::<u64>(), |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for group in coefficient_groups() {
                let (u, v) = (pl(&mut rng), pl(&mut rng));
                let y = formal_sum(&mut rng, &group, IndexSort::Unit);
                let z = formal_sum(&mut rng, &group, IndexSort::Unit);
                prop_assert_eq!(y.act(&u.compose(&v))?, y.act(&v)?.act(&u)?);
                prop_assert_eq!(y.combine(&z)?.act(&u)?, y.act(&u)?.combine(&z.act(&u)?)?);
                prop_assert_eq!(y.act(&PlHomeo::identity())?, y.clone());

                let (s, t) = (
                    FinPerm::sample(&mut rng, 20, 6),
                    FinPerm::sample(&mut rng, 20, 6),
                );
                let y = formal_sum(&mut rng, &group, IndexSort::Nat);
                let z = formal_sum(&mut rng, &group, IndexSort::Nat);
                prop_assert_eq!(y.act(&s.compose(&t))?, y.act(&t)?.act(&s)?);
                prop_assert_eq!(y.combine(&z)?.act(&s)?, y.act(&s)?.combine(&z.act(&s)?)?);
                prop_assert_eq!(y.act(&s.invert())?.act(&s)?, y.clone());
            }
            Ok(())
        }),
    );

    Outcome::new(&failures, "4 properties x 1000 cases".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("ring identities", ring_identities),
        ("separation witness", separation_witnesses),
        ("telescoping identity", telescoping),
        ("bergman oracle equivalence", bergman_oracle),
        ("tau topology", tau_suite),
        ("cantor claim", cantor_claim),
        ("algebra substrate", algebra_properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        failed += usize::from(!out.pass);
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict}: {name}: {}", i + 1, out.detail);
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
