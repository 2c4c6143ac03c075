//! Dominance order on roots, dominated sets and the `D_n` partition.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cone::key_witness;
use crate::datum::CoxeterDatum;
use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::matrix::{dot, neg};
use crate::scalar::{render_vec, Scalar, Tolerance};
use crate::store::{classify_root, RootId, RootStore, SignedRoot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    #[serde(rename = "inner-product-below-1")]
    InnerProductBelow1,
    DepthOrder,
    SignRule,
    Positive,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::InnerProductBelow1 => "inner-product-below-1",
            Reason::DepthOrder => "depth-order",
            Reason::SignRule => "sign-rule",
            Reason::Positive => "positive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceVerdict {
    pub holds: bool,
    pub reason: Reason,
}

impl DominanceVerdict {
    fn yes() -> Self {
        Self { holds: true, reason: Reason::Positive }
    }

    fn no(reason: Reason) -> Self {
        Self { holds: false, reason }
    }
}

/// A root given by sign and the depth of its positive multiple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootClass {
    pub negative: bool,
    pub depth: usize,
}

/// Decision table for `x dom y` given `(x, y)` and the classes of both.
pub fn decide<S: Scalar>(form: &S, x: RootClass, y: RootClass, tol: &Tolerance) -> DominanceVerdict {
    let one = S::one();
    match (x.negative, y.negative) {
        (false, false) => {
            if tol.lt(form, &one) {
                DominanceVerdict::no(Reason::InnerProductBelow1)
            } else if x.depth < y.depth {
                DominanceVerdict::no(Reason::DepthOrder)
            } else {
                DominanceVerdict::yes()
            }
        }
        (false, true) => {
            if tol.lt(form, &one) {
                DominanceVerdict::no(Reason::InnerProductBelow1)
            } else {
                DominanceVerdict::yes()
            }
        }
        (true, false) => DominanceVerdict::no(Reason::SignRule),
        // x dom y iff -y dom -x, and (-y, -x) = (x, y)
        (true, true) => decide(
            form,
            RootClass { negative: false, depth: y.depth },
            RootClass { negative: false, depth: x.depth },
            tol,
        ),
    }
}

/// Dominance between stored signed roots.
pub fn dominates_roots<S: Scalar>(store: &RootStore<S>, x: SignedRoot, y: SignedRoot) -> DominanceVerdict {
    let class = |r: SignedRoot| RootClass { negative: r.negative, depth: store.root(r.id).depth };
    decide(&store.form(x, y), class(x), class(y), store.tol())
}

fn class_of<S: Scalar>(store: Option<&RootStore<S>>, d: &CoxeterDatum<S>, v: &[S]) -> Result<RootClass> {
    d.check_dim(v)?;
    if let Some(r) = store.and_then(|s| s.locate(v)) {
        let s = store.expect("located in store");
        return Ok(RootClass { negative: r.negative, depth: s.root(r.id).depth });
    }
    classify_root(d, v)
        .map(|(negative, depth)| RootClass { negative, depth })
        .ok_or_else(|| Error::UnknownRoot(render_vec(v)))
}

/// Dominance between arbitrary roots given as vectors. Depths come from the
/// store when present and from descent otherwise.
pub fn dominates<S: Scalar>(store: &RootStore<S>, x: &[S], y: &[S]) -> Result<DominanceVerdict> {
    let d = store.datum();
    let cx = class_of(Some(store), d, x)?;
    let cy = class_of(Some(store), d, y)?;
    Ok(decide(&d.bilinear_unchecked(x, y), cx, cy, d.tol()))
}

/// Store-free dominance test.
pub fn dominates_vectors<S: Scalar>(d: &CoxeterDatum<S>, x: &[S], y: &[S]) -> Result<DominanceVerdict> {
    let cx = class_of(None, d, x)?;
    let cy = class_of(None, d, y)?;
    Ok(decide(&d.bilinear_unchecked(x, y), cx, cy, d.tol()))
}

/// `D(x)`: positive roots other than `x` dominated by the positive root
/// `x`. They all have depth at most `dep(x)`, so the scan is exact once the
/// store reaches that depth.
pub fn dominated_set<S: Scalar>(store: &RootStore<S>, x: RootId) -> Result<Vec<RootId>> {
    let dep = store.root(x).depth;
    store.require_depth(dep)?;
    Ok(scan_dominated(store, x).collect())
}

fn scan_dominated<S: Scalar>(store: &RootStore<S>, x: RootId) -> impl Iterator<Item = RootId> + '_ {
    let r = store.root(x);
    let tol = store.tol();
    let one = S::one();
    store
        .up_to_depth(r.depth)
        .filter(move |&y| y != x && tol.ge(&r.form_with(&store.root(y).coeffs), &one))
}

pub fn dominated_count<S: Scalar>(store: &RootStore<S>, x: RootId) -> Result<usize> {
    store.require_depth(store.root(x).depth)?;
    Ok(scan_dominated(store, x).count())
}

pub fn is_elementary<S: Scalar>(store: &RootStore<S>, x: RootId) -> Result<bool> {
    store.require_depth(store.root(x).depth)?;
    Ok(scan_dominated(store, x).next().is_none())
}

/// Vector form of [`dominated_set`] for CLI input.
pub fn dominated_set_of<S: Scalar>(store: &RootStore<S>, x: &[S]) -> Result<Vec<RootId>> {
    store.datum().check_dim(x)?;
    let id = store.find(x).ok_or_else(|| match classify_root(store.datum(), x) {
        Some((false, depth)) => Error::InsufficientDepth { needed: depth, available: store.depth() },
        _ => Error::UnknownRoot(render_vec(x)),
    })?;
    dominated_set(store, id)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DnStop {
    /// Every root on this level dominates more than `n_max` roots.
    LevelExceeds { level: usize, min_count: usize },
    /// The root system is finite and fully enumerated.
    Exhausted { levels: usize },
}

#[derive(Clone, Debug)]
pub struct DnReport {
    /// `n -> D_n` for `n <= n_max`, ids in store order.
    pub sets: BTreeMap<usize, Vec<RootId>>,
    pub complete_up_to: usize,
    /// Deepest level whose counts were computed.
    pub depth_scanned: usize,
    pub stop: DnStop,
    /// `#D(x)` for every root with id below `counts.len()`.
    pub counts: Vec<usize>,
}

impl DnReport {
    pub fn set(&self, n: usize) -> &[RootId] {
        self.sets.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count_of(&self, id: RootId) -> Option<usize> {
        self.counts.get(id).copied()
    }
}

/// Level-synchronized sweep computing `#D` for each new level until a level
/// has minimum count above `n_max` or the root system is exhausted.
///
/// Termination and completeness: if `dep(r_a x) = dep(x) + 1` then
/// `(x, alpha_a) < 0`, so `alpha_a` is not in `D(x)` and `y -> r_a y`
/// injects `D(x)` into `D(r_a x)`. Every root on level `d + 1` has such a
/// parent on level `d`, hence level minima never decrease and no root past
/// the stopping level lies in `D_n` for `n <= n_max`. Each `D_n` is finite,
/// so the stopping level exists.
pub fn enumerate_dn<S: Scalar>(store: &mut RootStore<S>, n_max: usize) -> Result<DnReport> {
    let mut counts: Vec<usize> = Vec::new();
    let mut level = 1;
    let stop = loop {
        if store.depth() < level && !store.extend_level()? {
            break DnStop::Exhausted { levels: store.depth() };
        }
        let snapshot: &RootStore<S> = store;
        let ids = snapshot.level(level).to_vec();
        let fresh: Vec<usize> = ids.par_iter().map(|&id| scan_dominated(snapshot, id).count()).collect();
        debug_assert_eq!(counts.len(), ids[0]);
        counts.extend_from_slice(&fresh);
        let min_count = fresh.iter().copied().min().unwrap_or(0);
        if min_count > n_max {
            break DnStop::LevelExceeds { level, min_count };
        }
        level += 1;
    };
    let mut sets: BTreeMap<usize, Vec<RootId>> = (0..=n_max).map(|n| (n, Vec::new())).collect();
    for (id, &c) in counts.iter().enumerate() {
        if c <= n_max {
            sets.get_mut(&c).expect("n <= n_max").push(id);
        }
    }
    let depth_scanned = match stop {
        DnStop::LevelExceeds { level, .. } => level,
        DnStop::Exhausted { levels } => levels,
    };
    Ok(DnReport { sets, complete_up_to: n_max, depth_scanned, stop, counts })
}

#[derive(Clone, Debug)]
pub struct CoverReport<S> {
    pub is_cover: bool,
    /// Key witness `w`: `wx` positive, `wy` negative.
    pub witness: GroupElement<S>,
    pub wx: Vec<S>,
    pub wy: Vec<S>,
    /// A root strictly between `x` and `y` when not a cover.
    pub between: Option<Vec<S>>,
    /// True when a store scan of all candidates confirmed the verdict.
    pub cross_checked: bool,
}

/// Decides whether `x dom y` is a cover. With `w` the key witness, it is a
/// cover exactly when `wx` and `-wy` are elementary; otherwise some
/// `z' in D(wx)` gives `w^{-1} z'` strictly between `x` and `y` (and
/// symmetrically for `-wy`).
pub fn dominance_cover<S: Scalar>(store: &RootStore<S>, x: &[S], y: &[S]) -> Result<CoverReport<S>> {
    let d = store.datum();
    let tol = d.tol();
    let verdict = dominates(store, x, y)?;
    if !verdict.holds || tol.vec_eq(x, y) {
        return Err(Error::NotDominant { x: render_vec(x), y: render_vec(y) });
    }
    let kw = key_witness(d, x, y)?;
    let winv = kw.w.inverse(d);
    let top = store.find(&kw.wx).ok_or_else(|| insufficient(store, &kw.wx))?;
    let bottom = store.find(&neg(&kw.wy)).ok_or_else(|| insufficient(store, &neg(&kw.wy)))?;
    let mut between = None;
    if let Some(&z) = dominated_set(store, top)?.first() {
        between = Some(winv.act_unchecked(&store.root(z).coeffs));
    } else if let Some(&z) = dominated_set(store, bottom)?.first() {
        between = Some(winv.act_unchecked(&neg(&store.root(z).coeffs)));
    }
    let cross_checked = scan_between(store, x, y)?.map(|found| {
        if found.is_some() != between.is_some() {
            Err(Error::CertificationFailed(format!(
                "cover verdict for {} > {} disagrees with the store scan",
                render_vec(x),
                render_vec(y)
            )))
        } else {
            Ok(())
        }
    });
    let cross_checked = match cross_checked {
        Some(r) => {
            r?;
            true
        }
        None => false,
    };
    Ok(CoverReport { is_cover: between.is_none(), witness: kw.w, wx: kw.wx, wy: kw.wy, between, cross_checked })
}

fn insufficient<S: Scalar>(store: &RootStore<S>, v: &[S]) -> Error {
    match classify_root(store.datum(), v) {
        Some((_, depth)) => Error::InsufficientDepth { needed: depth, available: store.depth() },
        None => Error::UnknownRoot(render_vec(v)),
    }
}

/// Looks for a stored signed root strictly between `x` and `y`. Every such
/// root has depth at most `max(dep|x|, dep|y|)`; returns `None` when the
/// store is too shallow to decide.
fn scan_between<S: Scalar>(store: &RootStore<S>, x: &[S], y: &[S]) -> Result<Option<Option<SignedRoot>>> {
    let d = store.datum();
    let cx = class_of(Some(store), d, x)?;
    let cy = class_of(Some(store), d, y)?;
    let bound = cx.depth.max(cy.depth);
    if !store.covers_depth(bound) {
        return Ok(None);
    }
    let tol = d.tol();
    let candidates: Vec<SignedRoot> = store
        .up_to_depth(bound)
        .flat_map(|id| [SignedRoot::positive(id), SignedRoot { id, negative: true }])
        .collect();
    let found = candidates.into_par_iter().find_first(|&z| {
        let v = store.vector(z);
        if tol.vec_eq(&v, x) || tol.vec_eq(&v, y) {
            return false;
        }
        let cz = RootClass { negative: z.negative, depth: store.root(z.id).depth };
        decide(&dot(&d.pairing(x), &v), cx, cz, tol).holds && decide(&dot(&d.pairing(&v), y), cz, cy, tol).holds
    });
    Ok(Some(found))
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
    fn dominates_examples() {
        let s = store(catalog::affine_a1::<Rational>().unwrap(), 4);
        assert!(dominates(&s, &q(&[2, 1]), &q(&[1, 0])).unwrap().holds);
        assert!(dominates(&s, &q(&[2, 1]), &q(&[2, 1])).unwrap().holds);
        let v = dominates(&s, &q(&[1, 0]), &q(&[2, 1])).unwrap();
        assert_eq!(v, DominanceVerdict { holds: false, reason: Reason::DepthOrder });
        let v = dominates(&s, &q(&[-1, 0]), &q(&[2, 1])).unwrap();
        assert_eq!(v.reason, Reason::SignRule);
        let a2 = store(catalog::a2::<Rational>().unwrap(), 3);
        let v = dominates(&a2, &q(&[1, 1]), &q(&[1, 0])).unwrap();
        assert_eq!(v, DominanceVerdict { holds: false, reason: Reason::InnerProductBelow1 });
    }

    #[test]
    fn dominated_set_examples() {
        let s = store(catalog::affine_a1::<Rational>().unwrap(), 3);
        let mut got: Vec<Vec<Rational>> =
            dominated_set_of(&s, &q(&[3, 2])).unwrap().into_iter().map(|id| s.root(id).coeffs.clone()).collect();
        got.sort();
        assert_eq!(got, vec![q(&[1, 0]), q(&[2, 1])]);
        assert!(is_elementary(&s, s.find(&q(&[1, 0])).unwrap()).unwrap());
        assert!(!is_elementary(&s, s.find(&q(&[2, 1])).unwrap()).unwrap());
        let a2 = store(catalog::affine_a2::<Rational>().unwrap(), 3);
        let got = dominated_set_of(&a2, &q(&[2, 1, 1])).unwrap();
        assert_eq!(got, vec![a2.find(&q(&[1, 0, 0])).unwrap()]);
        assert!(matches!(dominated_set_of(&a2, &q(&[1, 1, 1])), Err(Error::UnknownRoot(_))));
        let shallow = store(catalog::affine_a2::<Rational>().unwrap(), 2);
        assert!(matches!(dominated_set_of(&shallow, &q(&[2, 1, 1])), Err(Error::InsufficientDepth { .. })));
    }

    #[test]
    fn dn_affine_a1() {
        let mut s = RootStore::new(catalog::affine_a1::<Rational>().unwrap());
        let r = enumerate_dn(&mut s, 2).unwrap();
        let render = |ids: &[RootId]| ids.iter().map(|&id| s.root(id).coeffs.clone()).collect::<Vec<_>>();
        assert_eq!(render(r.set(0)), vec![q(&[1, 0]), q(&[0, 1])]);
        assert_eq!(render(r.set(1)), vec![q(&[1, 2]), q(&[2, 1])]);
        assert_eq!(render(r.set(2)), vec![q(&[2, 3]), q(&[3, 2])]);
        assert_eq!(r.stop, DnStop::LevelExceeds { level: 4, min_count: 3 });
    }

    #[test]
    fn dn_finite_and_affine_a2() {
        let mut s = RootStore::new(catalog::a2::<Rational>().unwrap());
        let r = enumerate_dn(&mut s, 1).unwrap();
        assert_eq!(r.set(0).len(), 3);
        assert!(r.set(1).is_empty());
        assert!(matches!(r.stop, DnStop::Exhausted { .. }));
        let mut s = RootStore::new(catalog::affine_a2::<Rational>().unwrap());
        let r = enumerate_dn(&mut s, 0).unwrap();
        let mut d0: Vec<Vec<Rational>> = r.set(0).iter().map(|&id| s.root(id).coeffs.clone()).collect();
        d0.sort();
        let mut expect = vec![q(&[1, 0, 0]), q(&[0, 1, 0]), q(&[0, 0, 1]), q(&[1, 1, 0]), q(&[0, 1, 1]), q(&[1, 0, 1])];
        expect.sort();
        assert_eq!(d0, expect);
    }

    #[test]
    fn cover_examples() {
        let s = store(catalog::affine_a1::<Rational>().unwrap(), 4);
        let c = dominance_cover(&s, &q(&[2, 1]), &q(&[1, 0])).unwrap();
        assert!(c.is_cover && c.cross_checked);
        assert_eq!(c.witness.word(), &[0]);
        assert_eq!(c.wx, q(&[0, 1]));
        assert_eq!(c.wy, q(&[-1, 0]));
        let c = dominance_cover(&s, &q(&[3, 2]), &q(&[1, 0])).unwrap();
        assert!(!c.is_cover);
        assert_eq!(c.between, Some(q(&[2, 1])));
        let a2 = store(catalog::affine_a2::<Rational>().unwrap(), 4);
        let c = dominance_cover(&a2, &q(&[2, 1, 1]), &q(&[1, 0, 0])).unwrap();
        assert!(c.is_cover && c.cross_checked);
        assert!(matches!(dominance_cover(&s, &q(&[1, 0]), &q(&[2, 1])), Err(Error::NotDominant { .. })));
    }

    #[test]
    fn no_dominance_in_finite_groups() {
        for m in [3u32, 4, 5, 6] {
            let s = store(catalog::dihedral::<f64>(m).unwrap(), 10);
            assert_eq!(s.len(), m as usize);
            for x in 0..s.len() {
                assert_eq!(dominated_count(&s, x).unwrap(), 0);
            }
        }
    }
}
