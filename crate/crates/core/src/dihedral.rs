//! Maximal dihedral reflection subgroups: canonical pairs, root chains,
//! dominance chains and the plane decomposition of a reflection.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::Serialize;

use crate::chain::{chain_coefficient_exact, chain_coefficients};
use crate::datum::{classify_form_value, BondOrder, CoxeterDatum};
use crate::dominance::dominates_vectors;
use crate::error::{Error, Result};
use crate::matrix::{axpy, neg, scale, sub, ApproxIndex};
use crate::scalar::{render_vec, Scalar, Tolerance};
use crate::store::{classify_root, reflection_element, RootId, RootStore};

/// Bound on roots examined while searching for a canonical pair.
const CANONICAL_SEARCH_CAP: usize = 10_000;

/// A 2-dimensional subspace given by two independent vectors, with a fixed
/// pair of coordinates used to solve for plane coordinates.
#[derive(Clone, Debug)]
pub struct Plane<S> {
    u: Vec<S>,
    v: Vec<S>,
    i: usize,
    j: usize,
    det: S,
}

impl<S: Scalar> Plane<S> {
    pub fn new(u: &[S], v: &[S], tol: &Tolerance) -> Option<Self> {
        let n = u.len();
        let mut best: Option<(usize, usize, S)> = None;
        for i in 0..n {
            for j in i + 1..n {
                let det = u[i].clone() * v[j].clone() - u[j].clone() * v[i].clone();
                if tol.is_zero(&det) {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((_, _, b)) => !S::EXACT && det.abs() > b.abs(),
                };
                if better {
                    best = Some((i, j, det));
                }
            }
        }
        let (i, j, det) = best?;
        Some(Self { u: u.to_vec(), v: v.to_vec(), i, j, det })
    }

    /// `(s, t)` with `w = s u + t v`, or `None` when `w` is off the plane.
    pub fn coords(&self, w: &[S], tol: &Tolerance) -> Option<(S, S)> {
        let (i, j) = (self.i, self.j);
        let s = (w[i].clone() * self.v[j].clone() - w[j].clone() * self.v[i].clone()) / self.det.clone();
        let t = (self.u[i].clone() * w[j].clone() - self.u[j].clone() * w[i].clone()) / self.det.clone();
        let back = axpy(&scale(&s, &self.u), &t, &self.v);
        tol.vec_eq(&back, w).then_some((s, t))
    }

    pub fn contains(&self, w: &[S], tol: &Tolerance) -> bool {
        self.coords(w, tol).is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DihedralKind {
    Finite { m: u32 },
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Alpha,
    Beta,
}

/// Roots listed in decreasing dominance order.
pub type Chain<S> = Vec<Vec<S>>;

#[derive(Clone, Debug)]
pub struct DihedralSubsystem<S> {
    /// Canonical pair `(a, b)`, `a` lexicographically larger.
    pub a: Vec<S>,
    pub b: Vec<S>,
    pub kind: DihedralKind,
    /// `(a, b)`.
    pub form: S,
    /// `arccosh(-(a, b))` when infinite, `pi / m` when finite.
    pub theta: f64,
    pub plane_basis: (Vec<S>, Vec<S>),
    pub certified: bool,
    /// Stored positive roots of the plane within `window`.
    pub roots: Vec<RootId>,
    pub window: usize,
}

/// Finds the canonical pair of the maximal dihedral subgroup of the plane.
///
/// A positive root `z` of the plane is canonical iff `N(r_z)` meets the
/// plane only in `z`. For any positive plane root `z`, `N(r_z)` restricted
/// to the plane is the inversion set of `r_z` inside the dihedral subgroup,
/// which contains a canonical root; reflecting known roots in a canonical
/// root crosses over to the other side of the plane.
pub fn canonical_pair<S: Scalar>(
    d: &CoxeterDatum<S>,
    plane: &Plane<S>,
    seeds: impl IntoIterator<Item = Vec<S>>,
) -> Result<(Vec<S>, Vec<S>)> {
    let tol = d.tol();
    let mut queue: VecDeque<Vec<S>> = seeds.into_iter().map(|s| positive(&s, tol)).collect();
    let mut processed: Vec<Vec<S>> = Vec::new();
    let mut seen = ApproxIndex::default();
    let mut canon: Vec<Vec<S>> = Vec::new();
    let mut steps = 0;
    while let Some(z) = queue.pop_front() {
        let f = ApproxIndex::feature(&z);
        if seen.find(f, |k| tol.vec_eq(&processed[k], &z)).is_some() {
            continue;
        }
        steps += 1;
        if steps > CANONICAL_SEARCH_CAP {
            break;
        }
        seen.insert(f, processed.len());
        processed.push(z.clone());
        let rz = reflection_element(d, &z).ok_or_else(|| Error::UnknownRoot(render_vec(&z)))?;
        let inv: Vec<Vec<S>> = rz.inversion_roots(d).into_iter().filter(|w| plane.contains(w, tol)).collect();
        if inv.len() == 1 {
            if !canon.iter().any(|c| tol.vec_eq(c, &z)) {
                canon.push(z.clone());
            }
            if canon.len() == 2 {
                break;
            }
            for k in processed.iter().chain(queue.iter()).cloned().collect::<Vec<_>>() {
                let img = d.reflect_in(&z, &k);
                if tol.is_positive_vec(&img) {
                    queue.push_back(img);
                }
            }
        } else {
            queue.extend(inv);
        }
    }
    if canon.len() < 2 {
        return Err(Error::CertificationFailed(format!(
            "found {} canonical root(s) for the plane of {} and {}",
            canon.len(),
            render_vec(&plane.u),
            render_vec(&plane.v)
        )));
    }
    let (mut a, mut b) = (canon.swap_remove(0), canon.swap_remove(0));
    if tol.vec_cmp(&a, &b) == Ordering::Less {
        std::mem::swap(&mut a, &mut b);
    }
    Ok((a, b))
}

fn positive<S: Scalar>(v: &[S], tol: &Tolerance) -> Vec<S> {
    if tol.is_negative_vec(v) {
        neg(v)
    } else {
        v.to_vec()
    }
}

fn build_subsystem<S: Scalar>(
    d: &CoxeterDatum<S>,
    plane: &Plane<S>,
    seeds: Vec<Vec<S>>,
    roots: Vec<RootId>,
    window: usize,
) -> Result<DihedralSubsystem<S>> {
    let tol = d.tol();
    let (a, b) = canonical_pair(d, plane, seeds)?;
    let form = d.bilinear_unchecked(&a, &b);
    let kind = match classify_form_value(&form, tol) {
        Some(BondOrder::Infinite) => DihedralKind::Infinite,
        Some(BondOrder::Finite(m)) => DihedralKind::Finite { m },
        None => {
            return Err(Error::CertificationFailed(format!(
                "canonical pair {} / {} has form value {} outside the allowed set",
                render_vec(&a),
                render_vec(&b),
                form.render()
            )))
        }
    };
    let theta = match kind {
        DihedralKind::Infinite => crate::chain::theta_of_form(form.approx()),
        DihedralKind::Finite { m } => std::f64::consts::PI / m as f64,
    };
    Ok(DihedralSubsystem {
        a,
        b,
        kind,
        form,
        theta,
        plane_basis: (plane.u.clone(), plane.v.clone()),
        certified: true,
        roots,
        window,
    })
}

/// Maximal dihedral subgroup containing `r_x` and `r_y`. Collects stored
/// plane roots of depth `<= dep(x) + dep(y)`, finds and certifies the
/// canonical pair, then checks that every collected root sits on one of
/// the two chains.
pub fn maximal_dihedral<S: Scalar>(store: &RootStore<S>, x: &[S], y: &[S]) -> Result<DihedralSubsystem<S>> {
    let d = store.datum();
    let tol = d.tol();
    d.check_dim(x)?;
    d.check_dim(y)?;
    let dx = classify_root(d, x).ok_or_else(|| Error::UnknownRoot(render_vec(x)))?.1;
    let dy = classify_root(d, y).ok_or_else(|| Error::UnknownRoot(render_vec(y)))?.1;
    let plane = Plane::new(x, y, tol)
        .ok_or_else(|| Error::NotIndependent(format!("{} and {}", render_vec(x), render_vec(y))))?;
    let window = dx + dy;
    let roots: Vec<RootId> = store
        .up_to_depth(window)
        .filter(|&id| plane.contains(&store.root(id).coeffs, tol))
        .collect();
    let mut seeds = vec![x.to_vec(), y.to_vec()];
    seeds.extend(roots.iter().map(|&id| store.root(id).coeffs.clone()));
    let sub = build_subsystem(d, &plane, seeds, roots, window)?;
    for &id in &sub.roots {
        subsystem_height(&sub, d, &store.root(id).coeffs).map_err(|_| {
            Error::CertificationFailed(format!(
                "{} is not regenerated from the canonical pair {} / {}",
                store.render(crate::store::SignedRoot::positive(id)),
                render_vec(&sub.a),
                render_vec(&sub.b)
            ))
        })?;
    }
    Ok(sub)
}

impl<S: Scalar> DihedralSubsystem<S> {
    pub fn is_infinite(&self) -> bool {
        self.kind == DihedralKind::Infinite
    }

    /// `zeta = -(a, b)`; the chain coefficients satisfy
    /// `c_{i+1} = 2 zeta c_i - c_{i-1}`.
    pub fn zeta(&self) -> S {
        -self.form.clone()
    }

    /// `m` for a finite subsystem.
    pub fn order(&self) -> Option<u32> {
        match self.kind {
            DihedralKind::Finite { m } => Some(m),
            DihedralKind::Infinite => None,
        }
    }

    /// `c_{i+1} a + c_i b` (alpha side) or `c_i a + c_{i+1} b` (beta side).
    /// Defined for every integer `i`; positive for `i >= 0`.
    pub fn chain_root(&self, side: Side, i: i64) -> Result<Vec<S>> {
        if !self.is_infinite() {
            return Err(Error::FiniteSubsystem);
        }
        let z = self.zeta();
        let (ca, cb) = match side {
            Side::Alpha => (chain_coefficient_exact(&z, i + 1), chain_coefficient_exact(&z, i)),
            Side::Beta => (chain_coefficient_exact(&z, i), chain_coefficient_exact(&z, i + 1)),
        };
        Ok(axpy(&scale(&ca, &self.a), &cb, &self.b))
    }

    /// The two dominance chains, each as `k` consecutive elements in
    /// decreasing dominance order: the alpha chain runs
    /// `.., r_a r_b a, r_a b, a, -b, r_b(-a), ..` and the beta chain is its
    /// negation reversed. Every consecutive pair is checked.
    pub fn dominance_chains(&self, d: &CoxeterDatum<S>, k: usize) -> Result<(Chain<S>, Chain<S>)> {
        if !self.is_infinite() {
            return Err(Error::FiniteSubsystem);
        }
        let top = (k / 2) as i64;
        let alpha: Vec<Vec<S>> =
            (0..k as i64).map(|s| self.chain_root(Side::Alpha, top - s)).collect::<Result<_>>()?;
        let beta: Vec<Vec<S>> =
            (0..k as i64).map(|s| self.chain_root(Side::Beta, top - s)).collect::<Result<_>>()?;
        for chain in [&alpha, &beta] {
            for w in chain.windows(2) {
                if !dominates_vectors(d, &w[0], &w[1])?.holds {
                    return Err(Error::CertificationFailed(format!(
                        "{} does not dominate {}",
                        render_vec(&w[0]),
                        render_vec(&w[1])
                    )));
                }
            }
        }
        Ok((alpha, beta))
    }

    /// Chain position of a positive root of an infinite subsystem.
    pub fn chain_position(&self, d: &CoxeterDatum<S>, x: &[S]) -> Result<(Side, usize)> {
        if !self.is_infinite() {
            return Err(Error::FiniteSubsystem);
        }
        let tol = d.tol();
        let (p, q) = self.coords(d, x)?;
        let z = self.zeta();
        let bound = if tol.gt(&p, &q) { p.clone() } else { q.clone() };
        let mut prev = S::zero();
        let mut cur = S::one();
        let mut i = 0usize;
        let two_z = z.clone() + z;
        // c_i grows at least linearly, so the search ends once c_i passes
        // the larger coordinate
        while tol.le(&prev, &bound) {
            if tol.eq(&p, &cur) && tol.eq(&q, &prev) {
                return Ok((Side::Alpha, i));
            }
            if tol.eq(&p, &prev) && tol.eq(&q, &cur) {
                return Ok((Side::Beta, i));
            }
            let next = two_z.clone() * cur.clone() - prev;
            prev = cur;
            cur = next;
            i += 1;
        }
        Err(Error::NotInSubsystem(render_vec(x)))
    }

    /// Coordinates of `x` in the canonical basis.
    pub fn coords(&self, d: &CoxeterDatum<S>, x: &[S]) -> Result<(S, S)> {
        let tol = d.tol();
        let plane = Plane::new(&self.a, &self.b, tol).expect("canonical roots are independent");
        plane.coords(x, tol).ok_or_else(|| Error::NotInSubsystem(render_vec(x)))
    }

    pub fn contains(&self, d: &CoxeterDatum<S>, x: &[S]) -> bool {
        self.coords(d, x).is_ok()
    }
}

/// Height of `r_x` in the subsystem: the chain position when infinite; for
/// finite `m` the positive roots are `u_k = c_{k+1} a + c_k b`,
/// `k = 0 .. m-1`, and the height is `min(k, m - 1 - k)`.
pub fn subsystem_height<S: Scalar>(sub: &DihedralSubsystem<S>, d: &CoxeterDatum<S>, x: &[S]) -> Result<usize> {
    let tol = d.tol();
    let x = positive(x, tol);
    match sub.kind {
        DihedralKind::Infinite => sub.chain_position(d, &x).map(|(_, i)| i),
        DihedralKind::Finite { m } => {
            let (p, q) = sub.coords(d, &x)?;
            let c = chain_coefficients(&sub.zeta(), m as usize);
            (0..m as usize)
                .find(|&k| tol.eq(&p, &c[k + 1]) && tol.eq(&q, &c[k]))
                .map(|k| k.min(m as usize - 1 - k))
                .ok_or_else(|| Error::NotInSubsystem(render_vec(&x)))
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlaneShare<S> {
    pub subsystem: DihedralSubsystem<S>,
    pub height: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition<S> {
    pub root: RootId,
    pub window: usize,
    pub planes: Vec<PlaneShare<S>>,
    pub standard_sum: usize,
    pub infinity_sum: usize,
    /// Every plane with positive share is inside the window: true once the
    /// window reaches `2 dep(x) - 1`, the depth bound of `N(r_x)`.
    pub complete: bool,
    /// Distinct planes have distinct canonical pairs and every grouped root
    /// lies in its own plane.
    pub partition_verified: bool,
}

/// Groups the stored positive roots `y != x` with `dep(y) <= window` by the
/// plane they span with `x` and builds the maximal dihedral subgroup of each.
pub fn decompose_reflections<S: Scalar>(store: &RootStore<S>, x: RootId, window: usize) -> Result<Decomposition<S>> {
    let d = store.datum();
    let tol = d.tol();
    let xv = store.root(x).coeffs.clone();
    let dep = store.root(x).depth;
    let window = window.max(1);
    let mut keys: Vec<Vec<S>> = Vec::new();
    let mut groups: Vec<Vec<RootId>> = Vec::new();
    let mut index = ApproxIndex::default();
    for y in store.up_to_depth(window) {
        if y == x {
            continue;
        }
        let key = plane_key(&xv, store, y, tol);
        let f = ApproxIndex::feature(&key);
        match index.find(f, |k| tol.vec_eq(&keys[k], &key)) {
            Some(k) => groups[k].push(y),
            None => {
                index.insert(f, keys.len());
                keys.push(key);
                groups.push(vec![y]);
            }
        }
    }
    let mut planes = Vec::with_capacity(groups.len());
    let mut partition_verified = true;
    let mut pair_index = ApproxIndex::default();
    let mut pairs: Vec<Vec<S>> = Vec::new();
    for group in groups {
        let rep = &store.root(group[0]).coeffs;
        let plane = Plane::new(&xv, rep, tol).ok_or_else(|| Error::NotIndependent(render_vec(rep)))?;
        partition_verified &= group.iter().all(|&y| plane.contains(&store.root(y).coeffs, tol));
        let mut seeds = vec![xv.clone()];
        seeds.extend(group.iter().map(|&y| store.root(y).coeffs.clone()));
        let mut roots = group.clone();
        roots.push(x);
        roots.sort_unstable();
        let sub = build_subsystem(d, &plane, seeds, roots, window)?;
        let height = subsystem_height(&sub, d, &xv)?;
        let pair: Vec<S> = sub.a.iter().chain(sub.b.iter()).cloned().collect();
        let f = ApproxIndex::feature(&pair);
        if pair_index.find(f, |k| tol.vec_eq(&pairs[k], &pair)).is_some() {
            partition_verified = false;
        }
        pair_index.insert(f, pairs.len());
        pairs.push(pair);
        planes.push(PlaneShare { subsystem: sub, height });
    }
    let standard_sum = planes.iter().map(|p| p.height).sum();
    let infinity_sum = planes.iter().filter(|p| p.subsystem.is_infinite()).map(|p| p.height).sum();
    let complete = store.is_exhausted() || window >= 2 * dep - 1;
    Ok(Decomposition { root: x, window, planes, standard_sum, infinity_sum, complete, partition_verified })
}

/// Direction of `y - (y, x) x`: the line where the plane of `x, y` meets
/// the orthogonal complement of `x`, normalised to unit 1-norm with the
/// first nonzero entry positive.
fn plane_key<S: Scalar>(x: &[S], store: &RootStore<S>, y: RootId, tol: &Tolerance) -> Vec<S> {
    let r = store.root(y);
    let c = r.form_with(x);
    let dvec = sub(&r.coeffs, &scale(&c, x));
    let norm = dvec.iter().fold(S::zero(), |acc, v| acc + v.abs());
    let mut key: Vec<S> = dvec.into_iter().map(|v| v / norm.clone()).collect();
    if key.iter().find(|v| !tol.is_zero(*v)).is_some_and(|v| tol.sign(v) == Ordering::Less) {
        key = neg(&key);
    }
    key
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
    fn maximal_dihedral_examples() {
        let s = store(catalog::affine_a2::<Rational>().unwrap(), 6);
        let sub = maximal_dihedral(&s, &q(&[1, 0, 0]), &q(&[0, 1, 0])).unwrap();
        assert_eq!(sub.kind, DihedralKind::Finite { m: 3 });
        assert_eq!((sub.a.clone(), sub.b.clone()), (q(&[1, 0, 0]), q(&[0, 1, 0])));
        let mut roots: Vec<Vec<Rational>> = sub.roots.iter().map(|&id| s.root(id).coeffs.clone()).collect();
        roots.sort();
        assert_eq!(roots, vec![q(&[0, 1, 0]), q(&[1, 0, 0]), q(&[1, 1, 0])]);

        let sub = maximal_dihedral(&s, &q(&[1, 0, 0]), &q(&[0, 1, 1])).unwrap();
        assert_eq!(sub.kind, DihedralKind::Infinite);
        assert_eq!(sub.theta, 0.0);
        assert_eq!((sub.a.clone(), sub.b.clone()), (q(&[1, 0, 0]), q(&[0, 1, 1])));
        let again = maximal_dihedral(&s, &q(&[2, 1, 1]), &q(&[1, 0, 0])).unwrap();
        assert_eq!((again.a, again.b), (sub.a, sub.b));
        assert!(matches!(
            maximal_dihedral(&s, &q(&[1, 0, 0]), &q(&[-1, 0, 0])),
            Err(Error::NotIndependent(_))
        ));
    }

    #[test]
    fn chain_root_examples() {
        let s = store(catalog::affine_a1::<Rational>().unwrap(), 3);
        let sub = maximal_dihedral(&s, &q(&[1, 0]), &q(&[0, 1])).unwrap();
        assert_eq!(sub.chain_root(Side::Alpha, 1).unwrap(), q(&[2, 1]));
        assert_eq!(sub.chain_root(Side::Alpha, 0).unwrap(), sub.a);
        assert_eq!(sub.chain_root(Side::Alpha, -1).unwrap(), neg(&sub.b));
        let d = catalog::infinite_dihedral(Rational::parse_decimal("-1.5").unwrap()).unwrap();
        let s = store(d.clone(), 3);
        let sub = maximal_dihedral(&s, &q(&[1, 0]), &q(&[0, 1])).unwrap();
        let r = sub.chain_root(Side::Alpha, 2).unwrap();
        assert_eq!(r, q(&[8, 3]));
        assert_eq!(d.bilinear(&r, &r).unwrap(), Rational::from_i64_exact(1));
        let a2 = store(catalog::a2::<Rational>().unwrap(), 3);
        let fin = maximal_dihedral(&a2, &q(&[1, 0]), &q(&[0, 1])).unwrap();
        assert!(matches!(fin.chain_root(Side::Alpha, 1), Err(Error::FiniteSubsystem)));
    }

    #[test]
    fn height_examples() {
        let s = store(catalog::affine_a1::<Rational>().unwrap(), 3);
        let d = s.datum().clone();
        let sub = maximal_dihedral(&s, &q(&[1, 0]), &q(&[0, 1])).unwrap();
        assert_eq!(subsystem_height(&sub, &d, &q(&[1, 0])).unwrap(), 0);
        assert_eq!(subsystem_height(&sub, &d, &q(&[3, 2])).unwrap(), 2);
        assert!(matches!(subsystem_height(&sub, &d, &q(&[1, 1])), Err(Error::NotInSubsystem(_))));
        let s = store(catalog::affine_a2::<Rational>().unwrap(), 3);
        let d = s.datum().clone();
        let sub = maximal_dihedral(&s, &q(&[1, 0, 0]), &q(&[0, 1, 0])).unwrap();
        assert_eq!(subsystem_height(&sub, &d, &q(&[1, 1, 0])).unwrap(), 1);
        assert!(matches!(subsystem_height(&sub, &d, &q(&[0, 0, 1])), Err(Error::NotInSubsystem(_))));
    }

    #[test]
    fn dominance_chain_examples() {
        let s = store(catalog::affine_a1::<Rational>().unwrap(), 3);
        let d = s.datum().clone();
        let sub = maximal_dihedral(&s, &q(&[1, 0]), &q(&[0, 1])).unwrap();
        let (alpha, beta) = sub.dominance_chains(&d, 3).unwrap();
        assert_eq!(alpha, vec![q(&[2, 1]), q(&[1, 0]), q(&[0, -1])]);
        assert!(dominates_vectors(&d, &sub.a, &neg(&sub.b)).unwrap().holds);
        let (alpha, _) = sub.dominance_chains(&d, 8).unwrap();
        let (_, beta_long) = sub.dominance_chains(&d, 18).unwrap();
        for v in &alpha {
            assert!(beta_long.contains(&neg(v)));
        }
        assert_eq!(beta.len(), 3);
    }

    #[test]
    fn decomposition_examples() {
        let s = store(catalog::affine_a1::<Rational>().unwrap(), 5);
        let x = s.find(&q(&[2, 1])).unwrap();
        let dec = decompose_reflections(&s, x, 5).unwrap();
        assert_eq!(dec.planes.len(), 1);
        assert_eq!(dec.standard_sum, 1);

        let s = store(catalog::affine_a2::<Rational>().unwrap(), 3);
        let dec = decompose_reflections(&s, 0, 3).unwrap();
        let pairs: Vec<(Vec<Rational>, Vec<Rational>, DihedralKind)> =
            dec.planes.iter().map(|p| (p.subsystem.a.clone(), p.subsystem.b.clone(), p.subsystem.kind)).collect();
        assert!(pairs.contains(&(q(&[1, 0, 0]), q(&[0, 1, 0]), DihedralKind::Finite { m: 3 })));
        assert!(pairs.contains(&(q(&[1, 0, 0]), q(&[0, 0, 1]), DihedralKind::Finite { m: 3 })));
        assert!(pairs.contains(&(q(&[1, 0, 0]), q(&[0, 1, 1]), DihedralKind::Infinite)));
        assert!(dec.partition_verified);

        let s = store(catalog::a2::<Rational>().unwrap(), 3);
        let dec = decompose_reflections(&s, 0, 3).unwrap();
        assert_eq!(dec.planes.len(), 1);
        assert_eq!(dec.planes[0].subsystem.kind, DihedralKind::Finite { m: 3 });
    }

    #[test]
    fn canonical_pair_on_float_triangle() {
        let s = store(catalog::triangle::<f64>(3, 3, 7).unwrap(), 8);
        let d = s.datum();
        for id in s.up_to_depth(8) {
            let dec = decompose_reflections(&s, id, 2 * s.root(id).depth - 1).unwrap();
            assert_eq!(dec.standard_sum, s.root(id).depth - 1, "root {}", render_vec(&s.root(id).coeffs));
            for p in &dec.planes {
                let form = d.bilinear(&p.subsystem.a, &p.subsystem.b).unwrap();
                assert!(d.tol().le(&form, &0.0));
            }
        }
    }
}
