//! Imaginary cone and Tits-dual membership for vectors and root differences.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::datum::CoxeterDatum;
use crate::dominance::{dominates, dominates_roots, dominates_vectors};
use crate::element::{elements_up_to_length, GroupElement};
use crate::error::{Error, Result};
use crate::matrix::{add, neg, sub};
use crate::scalar::{render_vec, Scalar};
use crate::store::{reflection_element, RootStore, SignedRoot};

/// Default bound on descent iterations.
pub const ITERATION_CAP: usize = 10_000;

#[derive(Clone, Debug)]
pub struct KeyWitness<S> {
    pub w: GroupElement<S>,
    pub wx: Vec<S>,
    pub wy: Vec<S>,
    /// `(w(x - y), alpha_a)` for every simple root.
    pub pairings: Vec<S>,
}

fn apply<S: Scalar>(d: &CoxeterDatum<S>, g: &GroupElement<S>, u: &GroupElement<S>) -> GroupElement<S> {
    g.mul(d, u)
}

fn reflection<S: Scalar>(d: &CoxeterDatum<S>, v: &[S]) -> Result<GroupElement<S>> {
    reflection_element(d, v).ok_or_else(|| Error::UnknownRoot(render_vec(v)))
}

/// For distinct roots with `x dom y`, returns `w` with `wx` positive, `wy`
/// negative and `(w(x - y), alpha_a) <= 0` for every simple `a`.
///
/// First a `u` in `<r_x, r_y>` moves the pair to `(a, -b)` with `a, b`
/// positive; then `(a, b)` is the canonical pair of that subgroup. Then,
/// while some simple `c` pairs positively with `a + b`, both are reflected
/// by `r_c`; the coefficient sum of `a + b` strictly drops each time.
pub fn key_witness<S: Scalar>(d: &CoxeterDatum<S>, x: &[S], y: &[S]) -> Result<KeyWitness<S>> {
    let tol = d.tol();
    let verdict = dominates_vectors(d, x, y)?;
    if !verdict.holds || tol.vec_eq(x, y) {
        return Err(Error::NotDominant { x: render_vec(x), y: render_vec(y) });
    }
    let x_pos = tol.is_positive_vec(x);
    let y_pos = tol.is_positive_vec(y);
    // both negative: -y dom -x, and the same u works for the swapped pair
    let (mut p, mut q) = if !x_pos && !y_pos { (neg(y), neg(x)) } else { (x.to_vec(), y.to_vec()) };
    let mut u = GroupElement::identity(d);
    let mut steps = 0;
    while tol.is_positive_vec(&q) {
        steps += 1;
        if steps > ITERATION_CAP {
            return Err(Error::CapExceeded("key witness chain walk".into()));
        }
        let rq = reflection(d, &q)?;
        let rq_p = rq.act_unchecked(&p);
        if tol.is_positive_vec(&rq_p) {
            u = apply(d, &rq, &u);
            p = rq_p;
            q = neg(&q);
            break;
        }
        // r_q r_p shifts both roots two steps down the dominance chain
        let rp = reflection(d, &p)?;
        let t = apply(d, &rq, &rp);
        u = apply(d, &t, &u);
        let tq = t.act_unchecked(&q);
        p = neg(&rq_p);
        q = tq;
    }
    let (mut a, mut b) = if !x_pos && !y_pos { (neg(&q), p) } else { (p, neg(&q)) };
    let mut w = u;
    for _ in 0..=ITERATION_CAP {
        let pairing = d.pairing(&add(&a, &b));
        match pairing.iter().position(|v| tol.sign(v) == Ordering::Greater) {
            None => {
                let wx = w.act_unchecked(x);
                let wy = w.act_unchecked(y);
                debug_assert!(tol.vec_eq(&wx, &a) && tol.vec_eq(&wy, &neg(&b)));
                return Ok(KeyWitness { w, wx, wy, pairings: pairing });
            }
            Some(c) => {
                a = d.reflect_simple(c, &a);
                b = d.reflect_simple(c, &b);
                w = apply(d, &GroupElement::simple(d, c)?, &w);
            }
        }
    }
    Err(Error::CapExceeded(format!("key witness exceeded {ITERATION_CAP} simple reflections")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeStatus {
    Member,
    NotMember,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ConeVerdict<S> {
    pub status: ConeStatus,
    pub witness: Option<GroupElement<S>>,
    pub certificate: String,
}

#[derive(Clone, Debug)]
pub enum ConeQuery<'a, S> {
    RootDifference { x: &'a [S], y: &'a [S] },
    General(&'a [S]),
}

/// Imaginary cone membership. For root differences the answer is exact:
/// `x - y` is in the cone iff `x dom y`. General vectors get the descent
/// semi-decision with an explicit inconclusive outcome at the cap.
pub fn imaginary_cone_contains<S: Scalar>(store: &RootStore<S>, query: ConeQuery<'_, S>) -> Result<ConeVerdict<S>> {
    let d = store.datum();
    match query {
        ConeQuery::RootDifference { x, y } => {
            let verdict = dominates(store, x, y)?;
            if !verdict.holds {
                return Ok(ConeVerdict {
                    status: ConeStatus::NotMember,
                    witness: None,
                    certificate: format!("{} does not dominate {}: {}", render_vec(x), render_vec(y), verdict.reason.as_str()),
                });
            }
            if d.tol().vec_eq(x, y) {
                return Ok(ConeVerdict {
                    status: ConeStatus::Member,
                    witness: Some(GroupElement::identity(d)),
                    certificate: "zero vector".into(),
                });
            }
            let kw = key_witness(d, x, y)?;
            let certificate = format!(
                "w(x-y) = {} is nonnegative and pairs <= 0 with every simple root",
                render_vec(&sub(&kw.wx, &kw.wy))
            );
            Ok(ConeVerdict { status: ConeStatus::Member, witness: Some(kw.w), certificate })
        }
        ConeQuery::General(v) => {
            d.check_dim(v)?;
            Ok(descend_general(d, v, ITERATION_CAP))
        }
    }
}

/// Descent on a general vector: while some simple `a` has `(v, alpha_a) > 0`,
/// replace `v` by `r_a v`. Ending in the nonnegative cone with every simple
/// pairing `<= 0` proves membership; leaving the nonnegative cone disproves
/// it, since the cone is `W`-invariant and lies inside it.
pub fn descend_general<S: Scalar>(d: &CoxeterDatum<S>, v: &[S], cap: usize) -> ConeVerdict<S> {
    let tol = d.tol();
    let mut cur = v.to_vec();
    let mut letters: Vec<usize> = Vec::new();
    let element = |letters: &[usize]| {
        let word: Vec<usize> = letters.iter().rev().copied().collect();
        crate::element::reduce_word(d, &word).expect("letters are valid generators")
    };
    for _ in 0..=cap {
        if tol.cone_sign(&cur).is_none_or(|s| s == Ordering::Less) {
            return ConeVerdict {
                status: ConeStatus::NotMember,
                certificate: format!("w v = {} has a negative coefficient", render_vec(&cur)),
                witness: Some(element(&letters)),
            };
        }
        let pairing = d.pairing(&cur);
        match pairing.iter().position(|p| tol.sign(p) == Ordering::Greater) {
            None => {
                return ConeVerdict {
                    status: ConeStatus::Member,
                    certificate: format!("w v = {} is nonnegative and pairs <= 0 with every simple root", render_vec(&cur)),
                    witness: Some(element(&letters)),
                }
            }
            Some(a) => {
                cur = d.reflect_simple(a, &cur);
                letters.push(a);
            }
        }
    }
    ConeVerdict {
        status: ConeStatus::Inconclusive,
        witness: None,
        certificate: format!("descent did not settle within {cap} steps"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TitsReport {
    pub contains: bool,
    pub elements_checked: usize,
    /// Word (1-based) of an element sending `x - y` out of the nonnegative
    /// cone, when one exists among the checked elements.
    pub counterexample: Option<String>,
    pub consistent: bool,
}

/// Tits-dual membership of `x - y`, decided by dominance and cross-checked
/// against every element of length at most `max_len`.
pub fn tits_dual_contains<S: Scalar>(store: &RootStore<S>, x: &[S], y: &[S], max_len: usize) -> Result<TitsReport> {
    let d = store.datum();
    let contains = dominates(store, x, y)?.holds;
    let diff = sub(x, y);
    let elements = elements_up_to_length(d, max_len, 1_000_000)?;
    let tol = d.tol();
    let counterexample = elements
        .par_iter()
        .find_first(|g| tol.cone_sign(&g.act_unchecked(&diff)).is_none_or(|s| s == Ordering::Less))
        .map(|g| g.word_literal());
    let consistent = !(contains && counterexample.is_some());
    Ok(TitsReport { contains, elements_checked: elements.len(), counterexample, consistent })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConeIdentityReport {
    pub depth: usize,
    pub max_len: usize,
    pub dominated_pairs: usize,
    pub witness_failures: usize,
    pub max_witness_pairing: f64,
    pub general_member_for_dominated: usize,
    pub non_dominant_pairs: usize,
    pub rejected: usize,
    pub general_not_member: usize,
    pub general_inconclusive: usize,
    pub general_false_member: usize,
    pub shift_samples: usize,
    pub shift_failures: usize,
    pub passed: bool,
}

/// Checks, over signed roots of depth `<= depth`: key witnesses for every
/// dominated pair; rejection of every non-dominant pair with `(x, y) < 1`
/// (with the general descent never claiming membership); and for every
/// witness output `v`, that `g v - v` is nonnegative for `l(g) <= max_len`.
pub fn verify_cone_identities<S: Scalar>(store: &RootStore<S>, depth: usize, max_len: usize) -> Result<ConeIdentityReport> {
    store.require_depth(depth)?;
    let d = store.datum();
    let tol = d.tol();
    let ids: Vec<SignedRoot> = store
        .up_to_depth(depth)
        .flat_map(|id| [SignedRoot::positive(id), SignedRoot { id, negative: true }])
        .collect();
    let pairs: Vec<(SignedRoot, SignedRoot)> =
        ids.iter().flat_map(|&x| ids.iter().map(move |&y| (x, y))).filter(|(x, y)| x != y).collect();

    struct PairOutcome<S> {
        dominated: bool,
        witness_ok: bool,
        max_pairing: f64,
        sample: Option<Vec<S>>,
        general: ConeStatus,
        rejected: bool,
        considered: bool,
    }

    let outcomes: Vec<Result<PairOutcome<S>>> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let (xv, yv) = (store.vector(x), store.vector(y));
            let diff = sub(&xv, &yv);
            if dominates_roots(store, x, y).holds {
                let kw = key_witness(d, &xv, &yv)?;
                let max_pairing = kw.pairings.iter().map(Scalar::approx).fold(f64::NEG_INFINITY, f64::max);
                let witness_ok = tol.is_positive_vec(&kw.wx)
                    && tol.is_negative_vec(&kw.wy)
                    && kw.pairings.iter().all(|p| tol.sign(p) != Ordering::Greater);
                let general = descend_general(d, &diff, ITERATION_CAP).status;
                let sample = Some(sub(&kw.wx, &kw.wy));
                return Ok(PairOutcome { dominated: true, witness_ok, max_pairing, sample, general, rejected: false, considered: true });
            }
            if !tol.lt(&store.form(x, y), &S::one()) {
                return Ok(PairOutcome {
                    dominated: false,
                    witness_ok: true,
                    max_pairing: f64::NEG_INFINITY,
                    sample: None,
                    general: ConeStatus::Inconclusive,
                    rejected: false,
                    considered: false,
                });
            }
            let rejected = imaginary_cone_contains(store, ConeQuery::RootDifference { x: &xv, y: &yv })?.status
                == ConeStatus::NotMember;
            let general = descend_general(d, &diff, ITERATION_CAP).status;
            Ok(PairOutcome {
                dominated: false,
                witness_ok: true,
                max_pairing: f64::NEG_INFINITY,
                sample: None,
                general,
                rejected,
                considered: true,
            })
        })
        .collect();

    let mut report = ConeIdentityReport { depth, max_len, max_witness_pairing: f64::NEG_INFINITY, ..Default::default() };
    let mut samples: Vec<Vec<S>> = Vec::new();
    for o in outcomes {
        let o = o?;
        if !o.considered {
            continue;
        }
        if o.dominated {
            report.dominated_pairs += 1;
            report.witness_failures += usize::from(!o.witness_ok);
            report.max_witness_pairing = report.max_witness_pairing.max(o.max_pairing);
            report.general_member_for_dominated += usize::from(o.general == ConeStatus::Member);
            samples.extend(o.sample);
        } else {
            report.non_dominant_pairs += 1;
            report.rejected += usize::from(o.rejected);
            match o.general {
                ConeStatus::Member => report.general_false_member += 1,
                ConeStatus::NotMember => report.general_not_member += 1,
                ConeStatus::Inconclusive => report.general_inconclusive += 1,
            }
        }
    }
    if report.dominated_pairs == 0 {
        report.max_witness_pairing = 0.0;
    }
    // dedupe samples; witness outputs repeat heavily
    samples.sort_by(|a, b| tol.vec_cmp(a, b));
    samples.dedup_by(|a, b| tol.vec_eq(a, b));
    samples.push(vec![S::zero(); d.rank()]);
    let elements = elements_up_to_length(d, max_len, 1_000_000)?;
    report.shift_samples = samples.len();
    report.shift_failures = samples
        .par_iter()
        .filter(|v| {
            elements.iter().any(|g| {
                let moved = sub(&g.act_unchecked(v), v);
                tol.cone_sign(&moved).is_none_or(|s| s == Ordering::Less)
            })
        })
        .count();
    report.passed = report.witness_failures == 0
        && report.rejected == report.non_dominant_pairs
        && report.general_false_member == 0
        && report.general_member_for_dominated == report.dominated_pairs
        && report.shift_failures == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::Rational;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&k| Rational::from_i64_exact(k)).collect()
    }

    fn store<S: Scalar>(d: CoxeterDatum<S>, depth: usize) -> RootStore<S> {
        let mut s = RootStore::new(d);
        s.enumerate_to_depth(depth).unwrap();
        s
    }

    #[test]
    fn key_witness_examples() {
        let d = catalog::affine_a1::<Rational>().unwrap();
        let kw = key_witness(&d, &q(&[2, 1]), &q(&[1, 0])).unwrap();
        assert_eq!(kw.w.word(), &[0]);
        assert_eq!(sub(&kw.wx, &kw.wy), q(&[1, 1]));
        assert_eq!(kw.pairings, q(&[0, 0]));
        let kw = key_witness(&d, &q(&[2, 1]), &q(&[-1, -2])).unwrap();
        assert!(kw.w.is_identity());
        let a2 = catalog::affine_a2::<Rational>().unwrap();
        let kw = key_witness(&a2, &q(&[2, 1, 1]), &q(&[1, 0, 0])).unwrap();
        // identity leaves y positive, so one reflection is needed
        assert_eq!(kw.w.word(), &[0]);
        assert_eq!(sub(&kw.wx, &kw.wy), q(&[1, 1, 1]));
        assert!(matches!(key_witness(&d, &q(&[1, 0]), &q(&[2, 1])), Err(Error::NotDominant { .. })));
    }

    #[test]
    fn key_witness_deep_pairs() {
        let d = catalog::affine_a1::<Rational>().unwrap();
        let kw = key_witness(&d, &q(&[6, 5]), &q(&[2, 1])).unwrap();
        assert!(d.tol().is_positive_vec(&kw.wx) && d.tol().is_negative_vec(&kw.wy));
        let kw = key_witness(&d, &q(&[-1, -2]), &q(&[-4, -5])).unwrap();
        assert!(d.tol().is_positive_vec(&kw.wx) && d.tol().is_negative_vec(&kw.wy));
    }

    #[test]
    fn general_membership() {
        let s = store(catalog::affine_a1::<Rational>().unwrap(), 3);
        let v = imaginary_cone_contains(&s, ConeQuery::General(&q(&[1, 1]))).unwrap();
        assert_eq!(v.status, ConeStatus::Member);
        assert!(v.witness.unwrap().is_identity());
        let v = imaginary_cone_contains(&s, ConeQuery::General(&q(&[0, 0]))).unwrap();
        assert_eq!(v.status, ConeStatus::Member);
        let v = imaginary_cone_contains(&s, ConeQuery::RootDifference { x: &q(&[1, 0]), y: &q(&[2, 1]) }).unwrap();
        assert_eq!(v.status, ConeStatus::NotMember);
        let v = imaginary_cone_contains(&s, ConeQuery::General(&q(&[1, 0]))).unwrap();
        assert_eq!(v.status, ConeStatus::NotMember);
    }

    #[test]
    fn tits_dual_examples() {
        let s = store(catalog::affine_a1::<Rational>().unwrap(), 3);
        let r = tits_dual_contains(&s, &q(&[2, 1]), &q(&[1, 0]), 6).unwrap();
        assert!(r.contains && r.consistent);
        assert_eq!(r.elements_checked, 13);
        assert!(r.counterexample.is_none());
        assert!(tits_dual_contains(&s, &q(&[1, 0]), &q(&[1, 0]), 6).unwrap().contains);
        let a2 = store(catalog::a2::<Rational>().unwrap(), 3);
        let r = tits_dual_contains(&a2, &q(&[1, 1]), &q(&[1, 0]), 6).unwrap();
        assert!(!r.contains && r.counterexample.is_some());
    }

    #[test]
    fn cone_identities_small() {
        let s = store(catalog::affine_a1::<Rational>().unwrap(), 6);
        let r = verify_cone_identities(&s, 6, 4).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.dominated_pairs > 0);
        let s = store(catalog::a2::<Rational>().unwrap(), 3);
        let r = verify_cone_identities(&s, 3, 4).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.dominated_pairs, 0);
    }
}
