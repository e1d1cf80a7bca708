//! The unitalization `R₁ = R × ℤ`, 3×3 matrices over it, and the matrix
//! identities that reduce the finest ring topology on `R` to a group
//! topology on `GL₃(R₁)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{RingDescriptor, RingElem};
use crate::error::{Error, Result};

/// `(a, k)` standing for `a + k·1` in `R₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unital {
    pub a: RingElem,
    pub k: BigInt,
}

impl Unital {
    pub fn new(a: RingElem, k: impl Into<BigInt>) -> Self {
        Unital { a, k: k.into() }
    }

    /// `(a, 0)`, the copy of `a ∈ R` inside `R₁`.
    pub fn embed(a: RingElem) -> Self {
        Unital {
            a,
            k: BigInt::zero(),
        }
    }

    /// `(0, k)`.
    pub fn int(ring: &RingDescriptor, k: impl Into<BigInt>) -> Self {
        Unital {
            a: ring.zero(),
            k: k.into(),
        }
    }
}

fn check(ring: &RingDescriptor, p: &Unital) -> Result<()> {
    ring.check(&p.a)
}

pub fn unital_add(ring: &RingDescriptor, p: &Unital, q: &Unital) -> Unital {
    Unital {
        a: ring.add(&p.a, &q.a),
        k: &p.k + &q.k,
    }
}

pub fn unital_neg(ring: &RingDescriptor, p: &Unital) -> Unital {
    Unital {
        a: ring.neg(&p.a),
        k: -&p.k,
    }
}

/// `(a,k)·(b,l) = (ab + l×a + k×b, kl)`.
pub fn unital_mul(ring: &RingDescriptor, p: &Unital, q: &Unital) -> Result<Unital> {
    check(ring, p)?;
    check(ring, q)?;
    Ok(mul_unchecked(ring, p, q))
}

fn mul_unchecked(ring: &RingDescriptor, p: &Unital, q: &Unital) -> Unital {
    let ab = ring.mul(&p.a, &q.a);
    let la = ring.times(&q.k, &p.a);
    let kb = ring.times(&p.k, &q.a);
    Unital {
        a: ring.add(&ring.add(&ab, &la), &kb),
        k: &p.k * &q.k,
    }
}

/// A 3×3 matrix over `R₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat3 {
    pub entries: [[Unital; 3]; 3],
}

impl Mat3 {
    /// Matrix with integer entries `(0, k)`.
    pub fn ints(ring: &RingDescriptor, rows: [[i64; 3]; 3]) -> Self {
        Mat3 {
            entries: rows.map(|r| r.map(|k| Unital::int(ring, k))),
        }
    }

    pub fn identity(ring: &RingDescriptor) -> Self {
        Mat3::ints(ring, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    /// Identity plus `x` at row `i`, column `j` (0-based).
    fn elementary(ring: &RingDescriptor, i: usize, j: usize, x: &RingElem) -> Self {
        let mut m = Mat3::identity(ring);
        m.entries[i][j] = Unital::embed(x.clone());
        m
    }

    pub fn e12(ring: &RingDescriptor, x: &RingElem) -> Self {
        Mat3::elementary(ring, 0, 1, x)
    }

    pub fn e23(ring: &RingDescriptor, x: &RingElem) -> Self {
        Mat3::elementary(ring, 1, 2, x)
    }

    pub fn e13(ring: &RingDescriptor, x: &RingElem) -> Self {
        Mat3::elementary(ring, 0, 2, x)
    }

    /// `diag(−1, 1, 1)`.
    pub fn d(ring: &RingDescriptor) -> Self {
        Mat3::ints(ring, [[-1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn l(ring: &RingDescriptor) -> Self {
        Mat3::ints(ring, [[-1, 0, 0], [0, 1, 0], [0, 1, 1]])
    }

    pub fn l_prime(ring: &RingDescriptor) -> Self {
        Mat3::ints(ring, [[-1, 0, 0], [0, 1, 0], [0, -1, 1]])
    }

    pub fn m(ring: &RingDescriptor) -> Self {
        Mat3::ints(ring, [[1, 0, 0], [1, 1, 0], [0, 0, -1]])
    }

    pub fn m_prime(ring: &RingDescriptor) -> Self {
        Mat3::ints(ring, [[1, 0, 0], [-1, 1, 0], [0, 0, -1]])
    }

    pub fn k(ring: &RingDescriptor) -> Self {
        Mat3::ints(ring, [[1, 0, 0], [0, -1, 1], [0, 0, 1]])
    }

    pub fn render(&self, ring: &RingDescriptor) -> String {
        let cell = |u: &Unital| {
            let a = ring.render(&u.a);
            match (ring.is_zero(&u.a), u.k.is_zero()) {
                (true, _) => u.k.to_string(),
                (false, true) => a,
                (false, false) => format!("{a} + {}", u.k),
            }
        };
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| format!("[{}]", r.iter().map(cell).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

pub fn mat3_mul(ring: &RingDescriptor, m: &Mat3, n: &Mat3) -> Result<Mat3> {
    for u in m.entries.iter().chain(&n.entries).flatten() {
        check(ring, u)?;
    }
    Ok(mul3(ring, m, n))
}

fn mul3(ring: &RingDescriptor, m: &Mat3, n: &Mat3) -> Mat3 {
    let entries = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..3).fold(Unital::int(ring, 0), |acc, t| {
                unital_add(
                    ring,
                    &acc,
                    &mul_unchecked(ring, &m.entries[i][t], &n.entries[t][j]),
                )
            })
        })
    });
    Mat3 { entries }
}

fn product(ring: &RingDescriptor, factors: &[&Mat3]) -> Mat3 {
    factors
        .iter()
        .fold(Mat3::identity(ring), |acc, f| mul3(ring, &acc, f))
}

/// Outcome for one identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub statement: String,
    pub pass: bool,
    /// Number of assignments (or symbolic cases) checked.
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub assignment: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Exact equality of noncommutative polynomials in generic elements.
    Symbolic,
    /// Exact equality on random assignments from a finite ring.
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingReport {
    pub ring: String,
    pub method: Method,
    pub seed: u64,
    pub samples: u64,
    pub pass: bool,
    pub identities: Vec<IdentityResult>,
}

impl fmt::Display for RingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.identities.iter().filter(|r| r.pass).count();
        write!(
            f,
            "{}: {}/{} identities hold",
            self.ring,
            ok,
            self.identities.len()
        )
    }
}

const STATEMENTS: [(&str, &str); 8] = [
    (
        "I1",
        "R1 = R x Z is an associative, distributive ring with unity (0,1)",
    ),
    ("I2", "E13(-x) = D E13(x) D"),
    ("I3", "E13(xy) = E12(x) E23(y) E12(-x) E23(-y)"),
    ("I4", "E12(x) = E13(x) L E13(x) L'"),
    ("I5", "E23(y) = E13(y) M E13(y) M'"),
    ("I6", "E13(x) = (E12(x) K)^2"),
    (
        "inverses",
        "E(x) E(-x) = I for E12, E23, E13; D^2 = I; K^2 = I; L L' = I; M M' = I",
    ),
    ("I5-sign", "E23(-y) = E13(y) M E13(y) M'"),
];

struct Tally {
    results: Vec<IdentityResult>,
}

impl Tally {
    fn new() -> Self {
        let results = STATEMENTS
            .iter()
            .map(|(n, s)| IdentityResult {
                name: n.to_string(),
                statement: s.to_string(),
                pass: true,
                checked: 0,
                counterexample: None,
            })
            .collect();
        Tally { results }
    }

    fn record(&mut self, idx: usize, ok: bool, fail: impl FnOnce() -> Counterexample) {
        let r = &mut self.results[idx];
        r.checked += 1;
        if !ok && r.pass {
            r.pass = false;
            r.counterexample = Some(fail());
        }
    }
}

fn mat_case(
    ring: &RingDescriptor,
    env: &[(&str, &RingElem)],
    lhs: &Mat3,
    rhs: &Mat3,
) -> (bool, Counterexample) {
    let cex = Counterexample {
        assignment: env
            .iter()
            .map(|(n, v)| (n.to_string(), ring.render(v)))
            .collect(),
        lhs: lhs.render(ring),
        rhs: rhs.render(ring),
    };
    (lhs == rhs, cex)
}

/// Checks I2 through I6 and the inverse round trips for one pair `(x, y)`.
fn check_matrix_identities(ring: &RingDescriptor, x: &RingElem, y: &RingElem, t: &mut Tally) {
    let env = [("x", x), ("y", y)];
    let nx = ring.neg(x);
    let ny = ring.neg(y);
    let (e12x, e23y, e13x) = (Mat3::e12(ring, x), Mat3::e23(ring, y), Mat3::e13(ring, x));
    let id = Mat3::identity(ring);
    let d = Mat3::d(ring);
    let k = Mat3::k(ring);

    let mut case = |idx: usize, lhs: Mat3, rhs: Mat3| {
        let (ok, cex) = mat_case(ring, &env, &lhs, &rhs);
        t.record(idx, ok, || cex);
    };

    case(1, Mat3::e13(ring, &nx), product(ring, &[&d, &e13x, &d]));
    case(
        2,
        Mat3::e13(ring, &ring.mul(x, y)),
        product(
            ring,
            &[&e12x, &e23y, &Mat3::e12(ring, &nx), &Mat3::e23(ring, &ny)],
        ),
    );
    case(
        3,
        e12x.clone(),
        product(ring, &[&e13x, &Mat3::l(ring), &e13x, &Mat3::l_prime(ring)]),
    );
    let e13y = Mat3::e13(ring, y);
    let via_m = product(ring, &[&e13y, &Mat3::m(ring), &e13y, &Mat3::m_prime(ring)]);
    case(4, e23y.clone(), via_m.clone());
    case(7, Mat3::e23(ring, &ny), via_m);
    let half = mul3(ring, &e12x, &k);
    case(5, e13x.clone(), mul3(ring, &half, &half));

    case(
        6,
        product(ring, &[&e12x, &Mat3::e12(ring, &nx)]),
        id.clone(),
    );
    case(
        6,
        product(ring, &[&e23y, &Mat3::e23(ring, &ny)]),
        id.clone(),
    );
    case(
        6,
        product(ring, &[&e13x, &Mat3::e13(ring, &nx)]),
        id.clone(),
    );
    case(6, mul3(ring, &d, &d), id.clone());
    case(6, mul3(ring, &k, &k), id.clone());
    case(
        6,
        mul3(ring, &Mat3::l(ring), &Mat3::l_prime(ring)),
        id.clone(),
    );
    case(6, mul3(ring, &Mat3::m(ring), &Mat3::m_prime(ring)), id);
}

/// Ring axioms of `R₁` for one triple, plus the unity law.
fn check_unital_axioms(ring: &RingDescriptor, p: &Unital, q: &Unital, r: &Unital, t: &mut Tally) {
    let show = |u: &Unital| format!("({}, {})", ring.render(&u.a), u.k);
    let env = || -> BTreeMap<String, String> {
        [("p", p), ("q", q), ("r", r)]
            .iter()
            .map(|(n, u)| (n.to_string(), show(u)))
            .collect()
    };
    let mut case = |lhs: Unital, rhs: Unital| {
        let ok = lhs == rhs;
        t.record(0, ok, || Counterexample {
            assignment: env(),
            lhs: show(&lhs),
            rhs: show(&rhs),
        });
    };
    let mul = |a: &Unital, b: &Unital| mul_unchecked(ring, a, b);
    let add = |a: &Unital, b: &Unital| unital_add(ring, a, b);
    let one = Unital::int(ring, 1);

    case(mul(&mul(p, q), r), mul(p, &mul(q, r)));
    case(mul(p, &add(q, r)), add(&mul(p, q), &mul(p, r)));
    case(mul(&add(p, q), r), add(&mul(p, r), &mul(q, r)));
    case(mul(&one, p), p.clone());
    case(mul(p, &one), p.clone());
    case(add(p, &unital_neg(ring, p)), Unital::int(ring, 0));
}

/// Verifies every identity over `ring`.
///
/// Over a free ring with at least two generators the first two act as the
/// generic `x, y` and the check is an exact polynomial identity. `R₁`'s ring
/// axioms are checked on generic elements `(x, k), (y, l), (z, m)` for all
/// `k, l, m ∈ {0, 1}`; both sides are multilinear in `k, l, m`, so this
/// settles them for all integers. Over a finite ring (or matrices over one)
/// `samples` random assignments are drawn from a ChaCha stream seeded with
/// `seed`.
pub fn verify_embedding_identities(
    ring: &RingDescriptor,
    seed: u64,
    samples: u64,
) -> Result<RingReport> {
    let mut tally = Tally::new();
    let method = match ring {
        RingDescriptor::FreeNoncommutative { generators } => {
            if generators.len() < 2 {
                return Err(Error::UnsupportedRing(format!(
                    "{} needs at least two generators",
                    ring.name()
                )));
            }
            let x = ring.generator(&generators[0])?;
            let y = ring.generator(&generators[1])?;
            check_matrix_identities(ring, &x, &y, &mut tally);

            let mut names = generators.clone();
            let mut fresh = String::from("z");
            while names.contains(&fresh) {
                fresh.push('_');
            }
            names.push(fresh.clone());
            let wide = RingDescriptor::free(names)?;
            let g: Vec<RingElem> = [&generators[0], &generators[1], &fresh]
                .iter()
                .map(|n| wide.generator(n))
                .collect::<Result<_>>()?;
            for bits in 0..8u8 {
                let k = |i: u8| BigInt::from((bits >> i) & 1);
                let p = Unital {
                    a: g[0].clone(),
                    k: k(0),
                };
                let q = Unital {
                    a: g[1].clone(),
                    k: k(1),
                };
                let r = Unital {
                    a: g[2].clone(),
                    k: k(2),
                };
                check_unital_axioms(&wide, &p, &q, &r, &mut tally);
            }
            Method::Symbolic
        }
        _ if ring.is_finite() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let x = ring.sample(&mut rng);
                let y = ring.sample(&mut rng);
                check_matrix_identities(ring, &x, &y, &mut tally);
                let draw = |rng: &mut ChaCha8Rng| Unital {
                    a: ring.sample(rng),
                    k: BigInt::from(rng.gen_range(-5..=5)),
                };
                let (p, q, r) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
                check_unital_axioms(ring, &p, &q, &r, &mut tally);
            }
            Method::Random
        }
        _ => {
            return Err(Error::UnsupportedRing(format!(
                "{}: only free rings and finite rings are supported",
                ring.name()
            )))
        }
    };
    let pass = tally.results.iter().all(|r| r.pass);
    Ok(RingReport {
        ring: ring.name(),
        method,
        seed,
        samples: if method == Method::Symbolic {
            1
        } else {
            samples
        },
        pass,
        identities: tally.results,
    })
}

/// `k` as an element of `R₁`; convenient when reading reports.
pub fn unital_one(ring: &RingDescriptor) -> Unital {
    Unital {
        a: ring.zero(),
        k: BigInt::one(),
    }
}
