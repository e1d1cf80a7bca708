//! Every basic neighbourhood of the identity in `T(H([0,1]), Homeo([0,1]))`
//! built from sup-metric balls contains `a_{1/3} − a_{2/3}`.
//!
//! With `n` the least integer such that `1/(3n) < ε`, put
//! `h = Σ_{k=n}^{2n−1} a_{k/3n}` and `h′ = −Σ_{k=n+1}^{2n} a_{k/3n}`. A small
//! `u₁` nudges each grid point `k/3n` up (or, for `h′`, down) and `u₀` fixes
//! the grid while sending the nudged points to the midpoints `(2k±1)/6n`.
//! The chain `q = 0,1,2,3` with factors `u₀, u₁, u₁⁻¹, u₀⁻¹` then produces
//! two telescoping sums whose total is `a_{1/3} − a_{2/3}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Report;
use crate::algebra::{PlGroup, PlHomeo, Rational};
use crate::bergman::{verify_thg_witness, SetSpec, SumContext, ThgTerm};
use crate::error::{Error, Result};
use crate::formal::{Coeff, CoeffGroup, FormalSum, Index, IndexSort};

/// Default cap on `n`; grid denominators are `6n`.
pub const MAX_GRID_N: u64 = 1_000_000;

/// Radius of the ball `U_h^q` for one `(h, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NbhdRadius {
    pub h: FormalSum,
    pub q: Rational,
    pub radius: Rational,
}

/// A family `(U_h^q)` of balls around the identity: listed radii, and a
/// default radius for every other `(h, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NbhdSpec {
    #[serde(default)]
    pub radii: Vec<NbhdRadius>,
    pub default: Rational,
}

impl NbhdSpec {
    pub fn uniform(radius: Rational) -> Self {
        NbhdSpec {
            radii: Vec::new(),
            default: radius,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |r: &Rational| r.is_zero() || r.is_negative();
        if bad(&self.default) || self.radii.iter().any(|e| bad(&e.radius)) {
            return Err(Error::InvalidInput(
                "neighbourhood radii must be positive".into(),
            ));
        }
        for (i, e) in self.radii.iter().enumerate() {
            if self.radii[..i].iter().any(|f| f.h == e.h && f.q == e.q) {
                return Err(Error::InvalidInput(format!(
                    "radius for ({}, {}) given twice",
                    e.h, e.q
                )));
            }
        }
        Ok(())
    }

    pub fn radius(&self, h: &FormalSum, q: &Rational) -> &Rational {
        self.radii
            .iter()
            .find(|e| e.h == *h && e.q == *q)
            .map_or(&self.default, |e| &e.radius)
    }

    pub fn ball(&self, h: &FormalSum, q: &Rational) -> SetSpec<PlHomeo> {
        SetSpec::Ball {
            radius: self.radius(h, q).clone(),
        }
    }
}

/// The witness for one coefficient `a` and one neighbourhood family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationBundle {
    pub n: u64,
    /// Radius of the ball inside `U_0^0 ∩ U_0^3`.
    pub epsilon: Rational,
    /// How far `u₁` and `u₁′` move each grid point.
    pub step: Rational,
    pub a: Coeff,
    pub h: FormalSum,
    pub h_prime: FormalSum,
    pub u0: PlHomeo,
    pub u1: PlHomeo,
    pub u0_prime: PlHomeo,
    pub u1_prime: PlHomeo,
    pub v1: FormalSum,
    pub v2: FormalSum,
    pub total: FormalSum,
}

/// Least `n ≥ 1` with `1/(3n) < ε`.
pub fn least_grid_n(epsilon: &Rational) -> Result<u64> {
    if epsilon.is_zero() || epsilon.is_negative() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    // 1/(3n) < ε  iff  n > 1/(3ε)
    let bound = (epsilon * &Rational::from(3)).recip()?.floor() + 1u32;
    let n = u64::try_from(bound).map_err(|_| Error::BudgetExceeded {
        needed: u128::MAX,
        budget: u128::from(MAX_GRID_N),
    })?;
    Ok(n)
}

fn grid(n: u64, k: u64) -> Rational {
    Rational::new(k, 3 * n).expect("positive denominator")
}

fn midpoint(n: u64, twice_k_pm_1: u64) -> Rational {
    Rational::new(twice_k_pm_1, 6 * n).expect("positive denominator")
}

fn term(coeffs: &Arc<CoeffGroup>, at: Rational, c: &Coeff) -> Result<FormalSum> {
    FormalSum::single(coeffs.clone(), Index::Rat(at), c.clone())
}

fn sum_of(
    coeffs: &Arc<CoeffGroup>,
    parts: impl IntoIterator<Item = Result<FormalSum>>,
) -> Result<FormalSum> {
    let mut acc = FormalSum::zero(coeffs.clone(), IndexSort::Unit);
    for p in parts {
        acc = acc.combine(&p?)?;
    }
    Ok(acc)
}

fn pl(points: Vec<(Rational, Rational)>) -> PlHomeo {
    PlHomeo::new(points).expect("grid construction is strictly increasing")
}

/// Builds the witness with the default cap on `n`.
pub fn build_separation_witness(
    coeffs: &Arc<CoeffGroup>,
    a: &Coeff,
    spec: &NbhdSpec,
) -> Result<SeparationBundle> {
    build_separation_witness_with_budget(coeffs, a, spec, MAX_GRID_N)
}

pub fn build_separation_witness_with_budget(
    coeffs: &Arc<CoeffGroup>,
    a: &Coeff,
    spec: &NbhdSpec,
    max_n: u64,
) -> Result<SeparationBundle> {
    coeffs.check(a)?;
    if coeffs.is_identity(a) {
        return Err(Error::InvalidInput("a must not be the identity".into()));
    }
    spec.validate()?;
    let zero = FormalSum::zero(coeffs.clone(), IndexSort::Unit);
    let q = |j: i64| Rational::from(j);
    let epsilon = spec
        .radius(&zero, &q(0))
        .clone()
        .min(spec.radius(&zero, &q(3)).clone());
    let n = least_grid_n(&epsilon)?;
    if n > max_n {
        return Err(Error::BudgetExceeded {
            needed: u128::from(n),
            budget: u128::from(max_n),
        });
    }
    let a_inv = coeffs.inv(a);

    let h = sum_of(coeffs, (n..2 * n).map(|k| term(coeffs, grid(n, k), a)))?;
    let h_prime = sum_of(
        coeffs,
        (n + 1..=2 * n).map(|k| term(coeffs, grid(n, k), &a_inv)),
    )?;

    let delta = spec
        .radius(&h, &q(1))
        .clone()
        .min(spec.radius(&h_prime, &q(1)).clone())
        .min(spec.radius(&zero, &q(2)).clone());
    let step = &delta.min(grid(n, 1)) / &Rational::from(2);

    let (zero_r, one_r) = (Rational::zero(), Rational::one());
    let ends = |mut v: Vec<(Rational, Rational)>| {
        v.insert(0, (zero_r.clone(), zero_r.clone()));
        v.push((one_r.clone(), one_r.clone()));
        v
    };

    let u1 = pl(ends(
        (n..2 * n)
            .map(|k| (grid(n, k), &grid(n, k) + &step))
            .collect(),
    ));
    let mut u0_pts = Vec::new();
    for k in n..2 * n {
        u0_pts.push((grid(n, k), grid(n, k)));
        u0_pts.push((&grid(n, k) + &step, midpoint(n, 2 * k + 1)));
    }
    u0_pts.push((grid(n, 2 * n), grid(n, 2 * n)));
    let u0 = pl(ends(u0_pts));

    let u1_prime = pl(ends(
        (n + 1..=2 * n)
            .map(|k| (grid(n, k), &grid(n, k) - &step))
            .collect(),
    ));
    let mut u0p_pts = vec![(grid(n, n), grid(n, n))];
    for k in n + 1..=2 * n {
        u0p_pts.push((&grid(n, k) - &step, midpoint(n, 2 * k - 1)));
        u0p_pts.push((grid(n, k), grid(n, k)));
    }
    let u0_prime = pl(ends(u0p_pts));

    let v1 = h.minus(&h.act(&u1)?)?.act(&u0)?;
    let v2 = h_prime.minus(&h_prime.act(&u1_prime)?)?.act(&u0_prime)?;
    let total = v1.combine(&v2)?;

    Ok(SeparationBundle {
        n,
        epsilon,
        step,
        a: a.clone(),
        h,
        h_prime,
        u0,
        u1,
        u0_prime,
        u1_prime,
        v1,
        v2,
        total,
    })
}

fn chain(zero: &FormalSum, h: &FormalSum, u0: &PlHomeo, u1: &PlHomeo) -> Vec<ThgTerm<PlHomeo>> {
    let t = |j: i64, h: &FormalSum, u: PlHomeo| ThgTerm {
        q: Rational::from(j),
        h: h.clone(),
        u,
    };
    vec![
        t(0, zero, u0.clone()),
        t(1, h, u1.clone()),
        t(2, zero, u1.invert()),
        t(3, zero, u0.invert()),
    ]
}

/// Re-derives every clause from `spec` and `a` without trusting the bundle.
pub fn verify_separation_witness(bundle: &SeparationBundle, spec: &NbhdSpec, a: &Coeff) -> Report {
    let mut r = Report::default();
    let b = bundle;
    let coeffs = b.h.group().clone();
    let zero = FormalSum::zero(coeffs.clone(), IndexSort::Unit);
    let n = b.n;

    r.check("spec-valid", spec.validate().is_ok(), || {
        "radii must be positive".into()
    });
    r.check(
        "coefficient",
        coeffs.contains(a) && !coeffs.is_identity(a) && b.a == *a,
        || {
            format!(
                "bundle coefficient {} does not match a non-identity {}",
                b.a, a
            )
        },
    );
    let epsilon = spec
        .radius(&zero, &Rational::zero())
        .clone()
        .min(spec.radius(&zero, &Rational::from(3)).clone());
    r.check(
        "grid-fits-epsilon",
        n >= 1 && grid(n.max(1), 1) < epsilon,
        || format!("1/(3·{n}) is not below epsilon {epsilon}"),
    );
    if !r.clauses.iter().all(|c| c.pass) {
        return r.finish();
    }

    let oracle = |lo: u64, hi: u64, c: &Coeff| -> Option<FormalSum> {
        let mut acc = zero.clone();
        for k in lo..=hi {
            acc = acc.combine(&term(&coeffs, grid(n, k), c).ok()?).ok()?;
        }
        Some(acc)
    };
    let a_inv = coeffs.inv(a);
    r.check(
        "h-shape",
        oracle(n, 2 * n - 1, a).as_ref() == Some(&b.h),
        || format!("h = {}", b.h),
    );
    r.check(
        "h-prime-shape",
        oracle(n + 1, 2 * n, &a_inv).as_ref() == Some(&b.h_prime),
        || format!("h' = {}", b.h_prime),
    );

    let at = |u: &PlHomeo, x: &Rational| u.eval(x).expect("grid points lie in [0,1]");
    let up = (n..2 * n).all(|k| {
        let y = at(&b.u1, &grid(n, k));
        grid(n, k) < y && y < grid(n, k + 1)
    });
    let down = (n + 1..=2 * n).all(|k| {
        let y = at(&b.u1_prime, &grid(n, k));
        grid(n, k - 1) < y && y < grid(n, k)
    });
    r.check("u1-intervals", up && down, || {
        "a grid point leaves its open interval".into()
    });

    let fixed = |u: &PlHomeo| (n..=2 * n).find(|&k| at(u, &grid(n, k)) != grid(n, k));
    let (f0, f0p) = (fixed(&b.u0), fixed(&b.u0_prime));
    r.check("u0-fixes-grid", f0.is_none() && f0p.is_none(), || {
        format!("moved grid point k = {:?}", f0.or(f0p))
    });

    let mid_up = (n..2 * n).all(|k| at(&b.u0, &at(&b.u1, &grid(n, k))) == midpoint(n, 2 * k + 1));
    let mid_down = (n + 1..=2 * n)
        .all(|k| at(&b.u0_prime, &at(&b.u1_prime, &grid(n, k))) == midpoint(n, 2 * k - 1));
    r.check("u0-midpoints", mid_up && mid_down, || {
        "u0 u1 misses a midpoint (2k±1)/6n".into()
    });

    let d0 =
        b.u0.dist_from_identity()
            .max(b.u0_prime.dist_from_identity());
    r.check("u0-in-epsilon-ball", d0 < epsilon, || {
        format!("d(u0, id) = {d0} ≥ {epsilon}")
    });

    let ctx = SumContext::new(coeffs.clone(), IndexSort::Unit);
    let nbhd = |h: &FormalSum, q: &Rational| spec.ball(h, q);
    for (name, h, u0, u1, v) in [
        ("v1-chain", &b.h, &b.u0, &b.u1, &b.v1),
        ("v2-chain", &b.h_prime, &b.u0_prime, &b.u1_prime, &b.v2),
    ] {
        let c = verify_thg_witness(&PlGroup, &ctx, nbhd, &chain(&zero, h, u0, u1), v);
        r.check(name, c.pass, || format!("{c:?}"));
    }

    let mut v1 = zero.clone();
    for k in n..2 * n {
        v1 = v1.combine(&term(&coeffs, grid(n, k), a).unwrap()).unwrap();
        v1 = v1
            .combine(&term(&coeffs, midpoint(n, 2 * k + 1), &a_inv).unwrap())
            .unwrap();
    }
    let mut v2 = zero.clone();
    for k in n + 1..=2 * n {
        v2 = v2
            .combine(&term(&coeffs, grid(n, k), &a_inv).unwrap())
            .unwrap();
        v2 = v2
            .combine(&term(&coeffs, midpoint(n, 2 * k - 1), a).unwrap())
            .unwrap();
    }
    r.check("v1-telescoping-form", v1 == b.v1, || {
        format!("v1 = {}", b.v1)
    });
    r.check("v2-telescoping-form", v2 == b.v2, || {
        format!("v2 = {}", b.v2)
    });

    let target = term(&coeffs, Rational::frac(1, 3), a)
        .and_then(|t| t.combine(&term(&coeffs, Rational::frac(2, 3), &a_inv)?));
    let sum_ok = b.v1.combine(&b.v2).is_ok_and(|s| s == b.total);
    r.check("total", sum_ok && target.as_ref() == Ok(&b.total), || {
        format!("total = {}", b.total)
    });
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::named_group;
    use crate::formal::integers;

    fn tenth() -> NbhdSpec {
        NbhdSpec::uniform(Rational::frac(1, 10))
    }

    #[test]
    fn least_n() {
        assert_eq!(least_grid_n(&Rational::frac(1, 10)).unwrap(), 4);
        assert_eq!(least_grid_n(&Rational::frac(1, 9)).unwrap(), 4);
        assert_eq!(least_grid_n(&Rational::frac(1, 1000)).unwrap(), 334);
        assert_eq!(least_grid_n(&Rational::from(5)).unwrap(), 1);
        // brute-force oracle
        for (p, q) in [(1, 7), (2, 9), (1, 3), (3, 100)] {
            let e = Rational::frac(p, q);
            let n = (1..).find(|&n| Rational::frac(1, 3 * n) < e).unwrap() as u64;
            assert_eq!(least_grid_n(&e).unwrap(), n);
        }
    }

    #[test]
    fn tenth_gives_n_four_and_the_expected_h() {
        let z = integers();
        let b = build_separation_witness(&z, &Coeff::int(1), &tenth()).unwrap();
        assert_eq!(b.n, 4);
        let a = Coeff::int(1);
        let expect = FormalSum::from_terms(
            z.clone(),
            IndexSort::Unit,
            [(1, 3), (5, 12), (1, 2), (7, 12)].map(|(p, q)| (Index::rat(p, q), a.clone())),
        )
        .unwrap();
        assert_eq!(b.h, expect);
        let r = verify_separation_witness(&b, &tenth(), &a);
        assert!(r.pass, "{:?}", r.failed());
    }

    #[test]
    fn z2_total_has_two_terms() {
        let z2 = Arc::new(CoeffGroup::finite(crate::actions::FiniteGroup::cyclic(2)));
        let b = build_separation_witness(&z2, &Coeff::Elem(1), &tenth()).unwrap();
        assert_eq!(
            b.total.support(),
            [Index::rat(1, 3), Index::rat(2, 3)].into()
        );
        assert!(verify_separation_witness(&b, &tenth(), &Coeff::Elem(1)).pass);
    }

    #[test]
    fn small_nonuniform_radii() {
        let z = integers();
        let zero = FormalSum::zero(z.clone(), IndexSort::Unit);
        let spec = NbhdSpec {
            radii: vec![
                NbhdRadius {
                    h: zero.clone(),
                    q: Rational::from(3),
                    radius: Rational::frac(1, 50),
                },
                NbhdRadius {
                    h: zero,
                    q: Rational::from(2),
                    radius: Rational::frac(1, 7000),
                },
            ],
            default: Rational::frac(1, 4),
        };
        let b = build_separation_witness(&z, &Coeff::int(-2), &spec).unwrap();
        assert_eq!(b.n, 17);
        assert_eq!(b.epsilon, Rational::frac(1, 50));
        assert!(b.u1.dist_from_identity() < Rational::frac(1, 7000));
        let r = verify_separation_witness(&b, &spec, &Coeff::int(-2));
        assert!(r.pass, "{:?}", r.failed());
    }

    #[test]
    fn nonabelian_coefficients() {
        let s3 = Arc::new(CoeffGroup::finite(named_group("S3").unwrap()));
        for a in s3.nonidentity_elements().unwrap() {
            let b = build_separation_witness(&s3, &a, &tenth()).unwrap();
            let r = verify_separation_witness(&b, &tenth(), &a);
            assert!(r.pass, "a = {a}: {:?}", r.failed());
        }
    }

    #[test]
    fn perturbed_u0_fails_fixed_points() {
        let z = integers();
        let a = Coeff::int(1);
        let mut b = build_separation_witness(&z, &a, &tenth()).unwrap();
        let nudge =
            PlHomeo::from_fracs(&[((0, 1), (0, 1)), ((1, 3), (7, 20)), ((1, 1), (1, 1))]).unwrap();
        b.u0 = nudge.compose(&b.u0);
        let r = verify_separation_witness(&b, &tenth(), &a);
        assert!(!r.clause("u0-fixes-grid").unwrap().pass);
        assert!(!r.pass);
    }

    #[test]
    fn n_too_small_fails_first_clause() {
        let z = integers();
        let a = Coeff::int(1);
        let mut b = build_separation_witness(&z, &a, &tenth()).unwrap();
        b.n = 3;
        let r = verify_separation_witness(&b, &tenth(), &a);
        assert!(!r.clause("grid-fits-epsilon").unwrap().pass);
    }

    #[test]
    fn errors() {
        let z = integers();
        assert!(build_separation_witness(&z, &Coeff::int(0), &tenth()).is_err());
        let tiny = NbhdSpec::uniform(Rational::frac(1, 3_000_000_000));
        assert!(matches!(
            build_separation_witness(&z, &Coeff::int(1), &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(
            build_separation_witness(&z, &Coeff::int(1), &NbhdSpec::uniform(Rational::zero()))
                .is_err()
        );
    }

    #[test]
    fn bundle_json_round_trip() {
        let z = integers();
        let b = build_separation_witness(&z, &Coeff::int(1), &tenth()).unwrap();
        let j = serde_json::to_string(&b).unwrap();
        let back: SeparationBundle = serde_json::from_str(&j).unwrap();
        assert_eq!(back, b);
        assert!(verify_separation_witness(&back, &tenth(), &Coeff::int(1)).pass);
    }
}
