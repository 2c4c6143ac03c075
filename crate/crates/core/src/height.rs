//! Standard and infinity heights of reflections, the sets `T_n`, and the
//! identities tying them to dominance.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dihedral::{decompose_reflections, DihedralKind};
use crate::dominance::{dominated_count, enumerate_dn, DnReport, DnStop};
use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::matrix::neg;
use crate::scalar::{render_vec, Scalar};
use crate::store::{RootId, RootStore};

/// `h(t) = dep(alpha_t) - 1 = (l(t) - 1) / 2`.
pub fn standard_height<S: Scalar>(store: &RootStore<S>, x: RootId) -> usize {
    store.root(x).depth - 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeightMethod {
    ViaDominance,
    ViaDecomposition,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaneHeight {
    pub canonical_pair: (String, String),
    pub kind: DihedralKind,
    pub height: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeightReport {
    pub reflection: String,
    pub word: String,
    pub standard: usize,
    pub infinity: usize,
    pub via_dominance: Option<usize>,
    pub via_decomposition: Option<usize>,
    pub per_subsystem: Vec<PlaneHeight>,
    pub methods_agree: bool,
}

/// Infinite planes with positive share contain a root dominated by `x`
/// inside the plane, and every such root has depth at most `dep(x)`; the
/// decomposition window `dep(x)` therefore sees all of them.
pub fn infinity_height<S: Scalar>(store: &RootStore<S>, x: RootId, method: Option<HeightMethod>) -> Result<HeightReport> {
    let dep = store.root(x).depth;
    store.require_depth(dep)?;
    let want = |m| method.is_none() || method == Some(m);
    let via_dominance = if want(HeightMethod::ViaDominance) { Some(dominated_count(store, x)?) } else { None };
    let mut per_subsystem = Vec::new();
    let via_decomposition = if want(HeightMethod::ViaDecomposition) {
        let dec = decompose_reflections(store, x, dep)?;
        per_subsystem = dec
            .planes
            .iter()
            .filter(|p| p.height > 0)
            .map(|p| PlaneHeight {
                canonical_pair: (render_vec(&p.subsystem.a), render_vec(&p.subsystem.b)),
                kind: p.subsystem.kind,
                height: p.height,
            })
            .collect();
        Some(dec.infinity_sum)
    } else {
        None
    };
    let infinity = via_dominance.or(via_decomposition).expect("at least one method runs");
    Ok(HeightReport {
        reflection: render_vec(&store.root(x).coeffs),
        word: store.reflection_word(x).word_literal(),
        standard: standard_height(store, x),
        infinity,
        via_dominance,
        via_decomposition,
        per_subsystem,
        methods_agree: match (via_dominance, via_decomposition) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Reflection {
    pub root: String,
    pub word: String,
}

#[derive(Clone, Debug)]
pub struct TnReport {
    pub dn: DnReport,
    /// `n -> T_n = { r_x : x in D_n }`.
    pub sets: BTreeMap<usize, Vec<RootId>>,
}

impl TnReport {
    pub fn reflections<S: Scalar>(&self, store: &RootStore<S>, n: usize) -> Vec<Reflection> {
        self.sets
            .get(&n)
            .map(|ids| {
                ids.iter()
                    .map(|&id| Reflection {
                        root: render_vec(&store.root(id).coeffs),
                        word: store.reflection_word(id).word_literal(),
                    })
                    .collect()
            })
            .unwrap_or_default()
    }
}

pub fn enumerate_tn<S: Scalar>(store: &mut RootStore<S>, n_max: usize) -> Result<TnReport> {
    let dn = enumerate_dn(store, n_max)?;
    let sets = dn.sets.clone();
    Ok(TnReport { dn, sets })
}

#[derive(Clone, Debug, Serialize)]
pub struct SumCheck {
    pub reflection: String,
    pub standard: usize,
    pub sum: usize,
    pub window: usize,
    pub widened: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub n: usize,
    pub count: usize,
    pub bound: Option<u128>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugationCheck {
    pub reflection: String,
    pub n: usize,
    /// `(alpha_0, alpha')` with `t = r_{alpha_0} r_{alpha'} r_{alpha_0}`.
    pub factor: Option<(String, String, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeightIdentityReport {
    pub max_len: usize,
    pub max_n: usize,
    pub finite_group: bool,
    pub sums_checked: usize,
    pub sum_deficits: Vec<SumCheck>,
    pub windows_widened: usize,
    pub infinity_checked: usize,
    pub infinity_disagreements: Vec<String>,
    pub bounds: Vec<BoundCheck>,
    pub conjugations_checked: usize,
    pub conjugation_failures: Vec<ConjugationCheck>,
    pub passed: bool,
}

/// Height sum over planes for one reflection, widening the window from
/// `dep(x)` by doubling up to `2 dep(x) - 1`, where it is complete.
pub fn height_sum<S: Scalar>(store: &RootStore<S>, x: RootId) -> Result<SumCheck> {
    let dep = store.root(x).depth;
    let full = 2 * dep - 1;
    let mut window = dep;
    loop {
        let dec = decompose_reflections(store, x, window)?;
        if dec.standard_sum == dep - 1 || window >= full || store.is_exhausted() {
            return Ok(SumCheck {
                reflection: render_vec(&store.root(x).coeffs),
                standard: dep - 1,
                sum: dec.standard_sum,
                window,
                widened: window > dep,
            });
        }
        window = (window * 2).min(full);
        store.require_depth(window)?;
    }
}

/// Checks, for reflections with `l(t) <= max_len` and `n <= max_n`: the
/// plane sum of heights, agreement of both infinity-height routes, the
/// bound `0 < #T_n <= #T_0^{n+1} - #T_0^n` for infinite groups, and that
/// each `t` in `T_n`, `n >= 1`, is `t_0 t' t_0` with `t_0` in `T_0` and `t'`
/// in some `T_m`, `m < n`.
pub fn verify_height_identities<S: Scalar>(store: &mut RootStore<S>, max_len: usize, max_n: usize) -> Result<HeightIdentityReport> {
    let max_dep = max_len.div_ceil(2);
    let tn = enumerate_tn(store, max_n)?;
    // the sum check needs the window 2 dep - 1 <= max_len
    store.enumerate_to_depth(max_len.max(max_dep))?;
    let store: &RootStore<S> = store;
    let finite_group = store.is_exhausted();
    let ids: Vec<RootId> = store.up_to_depth(max_dep).collect();

    let sums: Vec<SumCheck> = ids.par_iter().map(|&x| height_sum(store, x)).collect::<Result<_>>()?;
    let windows_widened = sums.iter().filter(|s| s.widened).count();
    let sums_checked = sums.len();
    let sum_deficits: Vec<SumCheck> = sums.into_iter().filter(|s| s.sum != s.standard).collect();

    let heights: Vec<HeightReport> =
        ids.par_iter().map(|&x| infinity_height(store, x, None)).collect::<Result<_>>()?;
    let infinity_disagreements: Vec<String> =
        heights.iter().filter(|h| !h.methods_agree).map(|h| h.reflection.clone()).collect();

    let t0 = tn.dn.set(0).len() as u128;
    let bounds: Vec<BoundCheck> = (0..=max_n)
        .map(|n| {
            let count = tn.dn.set(n).len();
            if finite_group {
                let holds = if n == 0 { count == store.len() } else { count == 0 };
                return BoundCheck { n, count, bound: None, holds };
            }
            let bound = (n >= 1).then(|| t0.pow(n as u32 + 1) - t0.pow(n as u32));
            let holds = count > 0 && bound.is_none_or(|b| count as u128 <= b);
            BoundCheck { n, count, bound, holds }
        })
        .collect();

    let targets: Vec<(RootId, usize)> =
        (1..=max_n).flat_map(|n| tn.dn.set(n).iter().map(move |&id| (id, n))).collect();
    let conj: Vec<ConjugationCheck> = targets
        .par_iter()
        .map(|&(x, n)| conjugation_factor(store, &tn.dn, x, n))
        .collect::<Result<_>>()?;
    let conjugations_checked = conj.len();
    let conjugation_failures: Vec<ConjugationCheck> = conj.into_iter().filter(|c| c.factor.is_none()).collect();

    let passed = sum_deficits.is_empty()
        && infinity_disagreements.is_empty()
        && bounds.iter().all(|b| b.holds)
        && conjugation_failures.is_empty();
    Ok(HeightIdentityReport {
        max_len,
        max_n,
        finite_group,
        sums_checked,
        sum_deficits,
        windows_widened,
        infinity_checked: heights.len(),
        infinity_disagreements,
        bounds,
        conjugations_checked,
        conjugation_failures,
        passed,
    })
}

/// `t = t_0 t' t_0` iff `alpha_t = +-t_0(alpha')`, so for each elementary
/// `alpha_0` the candidate is `alpha' = +-r_{alpha_0}(alpha_t)`; it must lie
/// in some `D_m`, `m < n`. The factorisation is confirmed by matrices.
pub fn conjugation_factor<S: Scalar>(store: &RootStore<S>, dn: &DnReport, x: RootId, n: usize) -> Result<ConjugationCheck> {
    let d = store.datum();
    let tol = d.tol();
    let xv = &store.root(x).coeffs;
    let t = store.reflection_word(x);
    let mut factor = None;
    for &a0 in dn.set(0) {
        let av = &store.root(a0).coeffs;
        let mut img = d.reflect_in(av, xv);
        if tol.is_negative_vec(&img) {
            img = neg(&img);
        }
        let Some(id) = store.find(&img) else { continue };
        let Some(m) = dn.count_of(id) else { continue };
        if m >= n {
            continue;
        }
        let t0 = store.reflection_word(a0);
        let tp = store.reflection_word(id);
        let prod: GroupElement<S> = t0.mul(d, &tp).mul(d, &t0);
        if prod.same_element(&t, d) {
            factor = Some((render_vec(av), render_vec(&img), m));
            break;
        }
    }
    Ok(ConjugationCheck { reflection: render_vec(xv), n, factor })
}

/// Bound used by the `T_n` count check; `None` for `n = 0`.
pub fn tn_bound(t0: usize, n: usize) -> Option<u128> {
    let t0 = t0 as u128;
    (n >= 1).then(|| t0.pow(n as u32 + 1) - t0.pow(n as u32))
}

/// Stop reason of the underlying `D_n` sweep, as text.
pub fn describe_stop(stop: &DnStop) -> String {
    match stop {
        DnStop::LevelExceeds { level, min_count } => {
            format!("level {level} has minimum dominated count {min_count}")
        }
        DnStop::Exhausted { levels } => format!("finite root system exhausted after {levels} levels"),
    }
}

/// Fails with `UnknownRoot` unless `v` is a stored positive root.
pub fn stored_positive<S: Scalar>(store: &RootStore<S>, v: &[S]) -> Result<RootId> {
    store.datum().check_dim(v)?;
    store.find(v).ok_or_else(|| match crate::store::classify_root(store.datum(), v) {
        Some((false, depth)) => Error::InsufficientDepth { needed: depth, available: store.depth() },
        _ => Error::UnknownRoot(render_vec(v)),
    })
}
