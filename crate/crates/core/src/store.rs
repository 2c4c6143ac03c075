//! Breadth-first enumeration of positive roots by depth, plus store-free
//! descent for roots beyond the enumerated window.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::datum::CoxeterDatum;
use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::matrix::{dot, neg, unit, ApproxIndex};
use crate::scalar::{render_vec, Scalar, Tolerance};

pub type RootId = usize;

/// Default bound on the number of stored roots.
pub const DEFAULT_MAX_ROOTS: usize = 2_000_000;

/// Default bound on descent steps for a single vector.
pub const DESCENT_CAP: usize = 100_000;

#[derive(Clone, Debug)]
pub struct Root<S> {
    pub id: RootId,
    pub coeffs: Vec<S>,
    pub depth: usize,
    /// `(p, a)` with `self = r_a p` and `dep(p) = depth - 1`; `None` on level 1.
    pub parent: Option<(RootId, usize)>,
    /// `(self, alpha_a)` for every simple root `a`.
    pub pairing: Vec<S>,
}

impl<S: Scalar> Root<S> {
    pub fn support(&self, tol: &Tolerance) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !tol.is_zero(*c))
            .map(|(i, _)| i)
            .collect()
    }

    /// `(self, v)`.
    pub fn form_with(&self, v: &[S]) -> S {
        dot(&self.pairing, v)
    }
}

/// A stored positive root or its negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignedRoot {
    pub id: RootId,
    pub negative: bool,
}

impl SignedRoot {
    pub fn positive(id: RootId) -> Self {
        Self { id, negative: false }
    }

    pub fn negated(self) -> Self {
        Self { id: self.id, negative: !self.negative }
    }
}

#[derive(Clone, Debug)]
pub struct RootStore<S> {
    datum: CoxeterDatum<S>,
    roots: Vec<Root<S>>,
    levels: Vec<Vec<RootId>>,
    index: ApproxIndex,
    max_roots: usize,
    exhausted: bool,
}

impl<S: Scalar> RootStore<S> {
    /// Store holding level 1, the simple roots.
    pub fn new(datum: CoxeterDatum<S>) -> Self {
        let n = datum.rank();
        let mut store = Self {
            datum,
            roots: Vec::new(),
            levels: Vec::new(),
            index: ApproxIndex::default(),
            max_roots: DEFAULT_MAX_ROOTS,
            exhausted: false,
        };
        let level: Vec<RootId> = (0..n).map(|a| store.push(unit(n, a), 1, None)).collect();
        store.levels.push(level);
        store
    }

    pub fn with_max_roots(mut self, max_roots: usize) -> Self {
        self.max_roots = max_roots;
        self
    }

    fn push(&mut self, coeffs: Vec<S>, depth: usize, parent: Option<(RootId, usize)>) -> RootId {
        let id = self.roots.len();
        let pairing = self.datum.pairing(&coeffs);
        self.index.insert(ApproxIndex::feature(&coeffs), id);
        self.roots.push(Root { id, coeffs, depth, parent, pairing });
        id
    }

    pub fn datum(&self) -> &CoxeterDatum<S> {
        &self.datum
    }

    pub fn tol(&self) -> &Tolerance {
        self.datum.tol()
    }

    /// Number of committed levels.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// True once a level came out empty: the store holds every positive root.
    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// True when every positive root of depth `<= d` is stored.
    pub fn covers_depth(&self, d: usize) -> bool {
        self.exhausted || self.depth() >= d
    }

    pub fn require_depth(&self, d: usize) -> Result<()> {
        if self.covers_depth(d) {
            Ok(())
        } else {
            Err(Error::InsufficientDepth { needed: d, available: self.depth() })
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root(&self, id: RootId) -> &Root<S> {
        &self.roots[id]
    }

    pub fn roots(&self) -> &[Root<S>] {
        &self.roots
    }

    /// Ids on level `d` (1-based depth).
    pub fn level(&self, d: usize) -> &[RootId] {
        self.levels.get(d.wrapping_sub(1)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Ids of all roots of depth `<= d`; ids are assigned level by level, so
    /// this is a prefix of the store.
    pub fn up_to_depth(&self, d: usize) -> std::ops::Range<RootId> {
        let end = self.levels.iter().take(d).map(Vec::len).sum();
        0..end
    }

    pub fn vector(&self, r: SignedRoot) -> Vec<S> {
        let v = &self.roots[r.id].coeffs;
        if r.negative {
            neg(v)
        } else {
            v.clone()
        }
    }

    pub fn render(&self, r: SignedRoot) -> String {
        render_vec(&self.vector(r))
    }

    /// Adds the next level. Returns `false` when it is empty, which marks
    /// the store exhausted.
    pub fn extend_level(&mut self) -> Result<bool> {
        if self.exhausted {
            return Ok(false);
        }
        let depth = self.levels.len();
        let last = self.levels[depth - 1].clone();
        let tol = *self.tol();
        let datum = &self.datum;
        let roots = &self.roots;
        // level d+1 = { r_a x : x on level d, (x, alpha_a) < 0 }
        let candidates: Vec<(Vec<S>, RootId, usize)> = last
            .par_iter()
            .flat_map_iter(|&id| {
                let r = &roots[id];
                (0..datum.rank())
                    .filter(move |&a| tol.sign(&r.pairing[a]) == Ordering::Less)
                    .map(move |a| (datum.reflect_simple(a, &r.coeffs), id, a))
            })
            .collect();
        let mut fresh: Vec<(Vec<S>, RootId, usize)> = Vec::new();
        let mut seen = ApproxIndex::default();
        for (v, id, a) in candidates {
            let f = ApproxIndex::feature(&v);
            if seen.find(f, |k| tol.vec_eq(&fresh[k].0, &v)).is_some() {
                continue;
            }
            debug_assert!(self.index.find(f, |k| tol.vec_eq(&self.roots[k].coeffs, &v)).is_none());
            seen.insert(f, fresh.len());
            fresh.push((v, id, a));
        }
        if fresh.is_empty() {
            self.exhausted = true;
            return Ok(false);
        }
        if self.roots.len() + fresh.len() > self.max_roots {
            return Err(Error::CapExceeded(format!(
                "level {} would bring the store past {} roots",
                depth + 1,
                self.max_roots
            )));
        }
        fresh.sort_by(|x, y| tol.vec_cmp(&x.0, &y.0));
        let level = fresh
            .into_iter()
            .map(|(v, id, a)| self.push(v, depth + 1, Some((id, a))))
            .collect();
        self.levels.push(level);
        Ok(true)
    }

    /// Completes levels `1..=d_max` (or stops early when exhausted).
    pub fn enumerate_to_depth(&mut self, d_max: usize) -> Result<()> {
        while self.levels.len() < d_max.max(1) && self.extend_level()? {}
        Ok(())
    }

    pub fn find(&self, v: &[S]) -> Option<RootId> {
        if v.len() != self.datum.rank() {
            return None;
        }
        let tol = self.tol();
        self.index
            .find(ApproxIndex::feature(v), |k| tol.vec_eq(&self.roots[k].coeffs, v))
    }

    /// Finds `v` or `-v` in the store.
    pub fn locate(&self, v: &[S]) -> Option<SignedRoot> {
        if let Some(id) = self.find(v) {
            return Some(SignedRoot::positive(id));
        }
        self.find(&neg(v)).map(|id| SignedRoot { id, negative: true })
    }

    /// Like [`locate`](Self::locate), failing with `UnknownRoot`.
    pub fn resolve(&self, v: &[S]) -> Result<SignedRoot> {
        self.datum.check_dim(v)?;
        self.locate(v).ok_or_else(|| Error::UnknownRoot(render_vec(v)))
    }

    /// Depth of a stored positive root.
    pub fn depth_of(&self, v: &[S]) -> Result<usize> {
        self.datum.check_dim(v)?;
        self.find(v)
            .map(|id| self.roots[id].depth)
            .ok_or_else(|| Error::UnknownRoot(render_vec(v)))
    }

    /// `r_x` as the palindromic word `a_1 .. a_k s a_k .. a_1` read off the
    /// parent chain, of length `2 dep(x) - 1`.
    pub fn reflection_word(&self, id: RootId) -> GroupElement<S> {
        let mut path = Vec::new();
        let mut cur = id;
        while let Some((p, a)) = self.roots[cur].parent {
            path.push(a);
            cur = p;
        }
        let simple = self.roots[cur]
            .coeffs
            .iter()
            .position(|c| !self.tol().is_zero(c))
            .expect("level-1 roots are simple");
        let mut word = path.clone();
        word.push(simple);
        word.extend(path.iter().rev());
        GroupElement::from_reduced_word(&self.datum, word)
    }

    /// `N(g)` restricted to the store; needs depth `>= l(g)`.
    pub fn inversion_set(&self, g: &GroupElement<S>) -> Result<Vec<RootId>> {
        self.require_depth(g.length())?;
        let tol = self.tol();
        Ok(self
            .up_to_depth(g.length())
            .filter(|&id| tol.is_negative_vec(&g.act_unchecked(&self.roots[id].coeffs)))
            .collect())
    }

    /// `(x, y)` for stored signed roots.
    pub fn form(&self, x: SignedRoot, y: SignedRoot) -> S {
        let v = dot(&self.roots[x.id].pairing, &self.roots[y.id].coeffs);
        if x.negative != y.negative {
            -v
        } else {
            v
        }
    }
}

/// Result of descending a positive vector to a simple root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descent {
    /// Letters `a_0, a_1, ..` applied in order: `v_{i+1} = r_{a_i} v_i`.
    pub letters: Vec<usize>,
    /// The simple root reached.
    pub simple: usize,
}

impl Descent {
    pub fn depth(&self) -> usize {
        self.letters.len() + 1
    }

    /// Palindromic reduced word of `r_v`.
    pub fn reflection_word(&self) -> Vec<usize> {
        let mut word = self.letters.clone();
        word.push(self.simple);
        word.extend(self.letters.iter().rev());
        word
    }
}

fn simple_index<S: Scalar>(v: &[S], tol: &Tolerance) -> Option<usize> {
    let s = v.iter().position(|c| !tol.is_zero(c))?;
    v.iter()
        .enumerate()
        .all(|(i, c)| if i == s { tol.eq(c, &S::one()) } else { tol.is_zero(c) })
        .then_some(s)
}

/// Descends a positive vector: while it is not simple, apply `r_a` for the
/// smallest `a` with `(v, alpha_a) > 0`. Each such step lowers the depth of a
/// positive root by one. Returns `None` when `v` is not a positive root.
pub fn descend<S: Scalar>(d: &CoxeterDatum<S>, v: &[S]) -> Option<Descent> {
    if v.len() != d.rank() {
        return None;
    }
    // rounding error grows with the size of v, so scale the tolerance
    let scale = v.iter().map(|c| c.approx().abs()).fold(1.0, f64::max);
    let tol = &Tolerance::new(d.tol().epsilon * scale);
    let mut cur = v.to_vec();
    let mut letters = Vec::new();
    for _ in 0..DESCENT_CAP {
        if !tol.is_positive_vec(&cur) {
            return None;
        }
        if let Some(simple) = simple_index(&cur, tol) {
            return Some(Descent { letters, simple });
        }
        let p = d.pairing(&cur);
        let a = p.iter().position(|x| tol.sign(x) == Ordering::Greater)?;
        cur = d.reflect_simple(a, &cur);
        letters.push(a);
    }
    None
}

/// `Some((negative, depth of |v|))` when `v` is a root.
pub fn classify_root<S: Scalar>(d: &CoxeterDatum<S>, v: &[S]) -> Option<(bool, usize)> {
    let tol = d.tol();
    match tol.cone_sign(v)? {
        Ordering::Greater => descend(d, v).map(|p| (false, p.depth())),
        Ordering::Less => descend(d, &neg(v)).map(|p| (true, p.depth())),
        Ordering::Equal => None,
    }
}

/// `r_x` for a positive root `x`, from its descent.
pub fn reflection_element<S: Scalar>(d: &CoxeterDatum<S>, x: &[S]) -> Option<GroupElement<S>> {
    let x = if d.tol().is_negative_vec(x) { neg(x) } else { x.to_vec() };
    descend(d, &x).map(|p| GroupElement::from_reduced_word(d, p.reflection_word()))
}
