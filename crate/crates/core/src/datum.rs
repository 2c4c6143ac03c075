//! Coxeter datum: rank, bond labels and the bilinear form on simple-root
//! coordinates.
//!
//! Vectors are coefficient tuples over the simple roots. The simple roots are
//! a basis in this model, so the positive linear cone never contains zero and
//! canonical coefficients are literal vector entries.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::scalar::{Scalar, Tolerance};

/// Largest finite bond label recognised when classifying a form value.
pub const MAX_FINITE_BOND: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BondOrder {
    Finite(u32),
    Infinite,
}

impl fmt::Display for BondOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BondOrder::Finite(m) => write!(f, "{m}"),
            BondOrder::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for BondOrder {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One off-diagonal bond, 0-based indices.
#[derive(Clone, Debug, PartialEq)]
pub struct BondSpec<S> {
    pub i: usize,
    pub j: usize,
    pub order: BondOrder,
    /// Form value for an infinite bond; defaults to -1.
    pub value: Option<S>,
}

impl<S> BondSpec<S> {
    pub fn finite(i: usize, j: usize, m: u32) -> Self {
        Self { i, j, order: BondOrder::Finite(m), value: None }
    }

    pub fn infinite(i: usize, j: usize) -> Self {
        Self { i, j, order: BondOrder::Infinite, value: None }
    }

    pub fn infinite_with(i: usize, j: usize, value: S) -> Self {
        Self { i, j, order: BondOrder::Infinite, value: Some(value) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoxeterDatum<S> {
    rank: usize,
    orders: Vec<Vec<BondOrder>>,
    gram: Matrix<S>,
    tol: Tolerance,
}

impl<S: Scalar> CoxeterDatum<S> {
    /// Builds a datum from bonds; unmentioned pairs default to `m = 2`.
    pub fn new(rank: usize, bonds: impl IntoIterator<Item = BondSpec<S>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Parse { line: 1, message: "rank must be positive".into() });
        }
        let mut orders = vec![vec![BondOrder::Finite(2); rank]; rank];
        let mut gram = Matrix::identity(rank);
        for i in 0..rank {
            orders[i][i] = BondOrder::Finite(1);
        }
        for b in bonds {
            let (i, j) = (b.i, b.j);
            if i >= rank || j >= rank {
                return Err(Error::IndexOutOfRange { index: i.max(j) + 1, rank });
            }
            if i == j {
                return Err(Error::InvalidBond { i: i + 1, j: j + 1, reason: "diagonal bond".into() });
            }
            let value = match b.order {
                BondOrder::Finite(m) => {
                    if m < 2 {
                        return Err(Error::InvalidBond {
                            i: i + 1,
                            j: j + 1,
                            reason: format!("m = {m} < 2"),
                        });
                    }
                    if b.value.is_some() {
                        return Err(Error::InvalidBond {
                            i: i + 1,
                            j: j + 1,
                            reason: "explicit form value on a finite bond".into(),
                        });
                    }
                    S::neg_cos_pi_over(m).ok_or(Error::IrrationalEntry { i: i + 1, j: j + 1, m })?
                }
                BondOrder::Infinite => {
                    let v = b.value.unwrap_or_else(|| -S::one());
                    // exact check: the datum tolerance is not known yet
                    if v > -S::one() {
                        return Err(Error::InvalidBond {
                            i: i + 1,
                            j: j + 1,
                            reason: format!("form value {} > -1 on an infinite bond", v.render()),
                        });
                    }
                    v
                }
            };
            orders[i][j] = b.order;
            orders[j][i] = b.order;
            gram.set(i, j, value.clone());
            gram.set(j, i, value);
        }
        Ok(Self { rank, orders, gram, tol: Tolerance::for_scalar::<S>() })
    }

    /// Builds a datum from a raw gram matrix, inferring bond labels. Fails
    /// with [`Error::C1Violation`] when the matrix is not a valid form.
    pub fn from_gram(gram: Vec<Vec<S>>) -> Result<Self> {
        let gram = Matrix::from_rows(gram);
        let tol = Tolerance::for_scalar::<S>();
        let orders = validate_gram(&gram, &tol)?;
        Ok(Self { rank: gram.dim(), orders, gram, tol })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.tol = Tolerance::new(epsilon);
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    pub fn gram(&self) -> &Matrix<S> {
        &self.gram
    }

    pub fn form(&self, i: usize, j: usize) -> &S {
        self.gram.get(i, j)
    }

    pub fn bond(&self, i: usize, j: usize) -> BondOrder {
        self.orders[i][j]
    }

    /// Checks (C1) on the stored gram matrix.
    pub fn validate(&self) -> Result<ValidationReport> {
        let orders = validate_gram(&self.gram, &self.tol)?;
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if orders[i][j] != self.orders[i][j] {
                    return Err(Error::C1Violation {
                        i: i + 1,
                        j: j + 1,
                        value: self.gram.get(i, j).render(),
                        reason: format!("declared m = {} but form gives m = {}", self.orders[i][j], orders[i][j]),
                    });
                }
            }
        }
        let bonds = (0..self.rank)
            .flat_map(|i| (i + 1..self.rank).map(move |j| (i, j)))
            .filter(|&(i, j)| self.orders[i][j] != BondOrder::Finite(2))
            .map(|(i, j)| BondReport {
                i: i + 1,
                j: j + 1,
                m: self.orders[i][j],
                form: self.gram.get(i, j).render(),
            })
            .collect();
        Ok(ValidationReport {
            rank: self.rank,
            c1: true,
            c2: "holds: the simple roots are a basis of the coordinate model, so 0 is not in their positive linear cone".into(),
            bonds,
        })
    }

    /// The bilinear form `u^T G v`.
    pub fn bilinear(&self, u: &[S], v: &[S]) -> Result<S> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        Ok(self.bilinear_unchecked(u, v))
    }

    pub(crate) fn bilinear_unchecked(&self, u: &[S], v: &[S]) -> S {
        dot(&self.pairing(u), v)
    }

    /// `G v`: the vector of values `(v, alpha_a)` for every simple root `a`.
    pub fn pairing(&self, v: &[S]) -> Vec<S> {
        self.gram.apply(v)
    }

    pub fn check_dim(&self, v: &[S]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: v.len() });
        }
        Ok(())
    }

    pub fn check_generator(&self, a: usize) -> Result<()> {
        if a >= self.rank {
            return Err(Error::IndexOutOfRange { index: a + 1, rank: self.rank });
        }
        Ok(())
    }

    /// Matrix of `v -> v - 2 (v, alpha_a) alpha_a` in simple-root
    /// coordinates. Only row `a` differs from the identity.
    pub fn reflection_matrix(&self, a: usize) -> Result<Matrix<S>> {
        self.check_generator(a)?;
        let mut m = Matrix::identity(self.rank);
        let two = S::one() + S::one();
        for j in 0..self.rank {
            let delta = if j == a { S::one() } else { S::zero() };
            m.set(a, j, delta - two.clone() * self.gram.get(j, a).clone());
        }
        Ok(m)
    }

    /// Applies the simple reflection `r_a` to `v`.
    pub fn reflect_simple(&self, a: usize, v: &[S]) -> Vec<S> {
        let p: S = (0..self.rank).fold(S::zero(), |acc, i| acc + v[i].clone() * self.gram.get(i, a).clone());
        let mut out = v.to_vec();
        out[a] = out[a].clone() - (p.clone() + p);
        out
    }

    /// Applies the reflection in the (unit) root `x` to `v`.
    pub fn reflect_in(&self, x: &[S], v: &[S]) -> Vec<S> {
        let c = self.bilinear_unchecked(v, x);
        let two_c = c.clone() + c;
        v.iter().zip(x).map(|(vi, xi)| vi.clone() - two_c.clone() * xi.clone()).collect()
    }

    /// Bond labels as the datum file would declare them.
    pub fn to_datum_text(&self) -> String {
        let mut out = format!("rank {}\n", self.rank);
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                match self.orders[i][j] {
                    BondOrder::Finite(2) => {}
                    BondOrder::Finite(m) => out.push_str(&format!("bond {} {} {}\n", i + 1, j + 1, m)),
                    BondOrder::Infinite => out.push_str(&format!(
                        "bond {} {} inf {}\n",
                        i + 1,
                        j + 1,
                        self.gram.get(i, j).render()
                    )),
                }
            }
        }
        out
    }

    /// True when every bond is finite and the group is one of the finite
    /// rank-2 types; for higher rank this is only a hint.
    pub fn has_infinite_bond(&self) -> bool {
        self.orders.iter().flatten().any(|o| *o == BondOrder::Infinite)
    }
}

/// Infers bond labels from a gram matrix, checking (C1).
pub fn validate_gram<S: Scalar>(gram: &Matrix<S>, tol: &Tolerance) -> Result<Vec<Vec<BondOrder>>> {
    let n = gram.dim();
    let mut orders = vec![vec![BondOrder::Finite(2); n]; n];
    for i in 0..n {
        let d = gram.get(i, i);
        if !tol.eq(d, &S::one()) {
            return Err(Error::C1Violation {
                i: i + 1,
                j: i + 1,
                value: d.render(),
                reason: "diagonal entry must be 1".into(),
            });
        }
        orders[i][i] = BondOrder::Finite(1);
        for j in i + 1..n {
            let v = gram.get(i, j);
            if !tol.eq(v, gram.get(j, i)) {
                return Err(Error::C1Violation {
                    i: i + 1,
                    j: j + 1,
                    value: v.render(),
                    reason: "gram matrix is not symmetric".into(),
                });
            }
            let order = classify_form_value(v, tol).ok_or_else(|| Error::C1Violation {
                i: i + 1,
                j: j + 1,
                value: v.render(),
                reason: "neither -cos(pi/m) for an integer m >= 2 nor <= -1".into(),
            })?;
            orders[i][j] = order;
            orders[j][i] = order;
        }
    }
    Ok(orders)
}

/// Matches a form value against `-cos(pi/m)` for `m` in `2..=MAX_FINITE_BOND`
/// or the infinite range `(-inf, -1]`.
pub fn classify_form_value<S: Scalar>(v: &S, tol: &Tolerance) -> Option<BondOrder> {
    if tol.le(v, &-S::one()) {
        return Some(BondOrder::Infinite);
    }
    if S::EXACT {
        return (2..=3).find(|&m| S::neg_cos_pi_over(m).is_some_and(|c| tol.eq(v, &c))).map(BondOrder::Finite);
    }
    // -cos(pi/m) is increasing towards -1 as m grows; invert and check the
    // neighbouring integers.
    let x = v.approx();
    if x > tol.epsilon {
        return None;
    }
    let guess = std::f64::consts::PI / (-x).clamp(-1.0, 1.0).acos();
    let centre = if guess.is_finite() { guess.round() as i64 } else { MAX_FINITE_BOND as i64 };
    (centre - 1..=centre + 1)
        .filter(|&m| (2..=MAX_FINITE_BOND as i64).contains(&m))
        .map(|m| m as u32)
        .find(|&m| S::neg_cos_pi_over(m).is_some_and(|c| tol.eq(v, &c)))
        .map(BondOrder::Finite)
}

#[derive(Clone, Debug, Serialize)]
pub struct BondReport {
    pub i: usize,
    pub j: usize,
    pub m: BondOrder,
    pub form: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub rank: usize,
    pub c1: bool,
    pub c2: String,
    pub bonds: Vec<BondReport>,
}

/// Parses the line-oriented datum format:
///
/// ```text
/// rank 3
/// bond 1 2 3
/// bond 2 3 inf -1.5   # optional form value for infinite bonds
/// ```
pub fn load_datum<S: Scalar>(text: &str) -> Result<CoxeterDatum<S>> {
    let mut rank: Option<usize> = None;
    let mut bonds: Vec<BondSpec<S>> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "rank" => {
                if rank.is_some() {
                    return Err(err("duplicate rank line".into()));
                }
                if !bonds.is_empty() {
                    return Err(err("rank must precede bonds".into()));
                }
                if tokens.len() != 2 {
                    return Err(err("expected `rank N`".into()));
                }
                let n: usize = tokens[1].parse().map_err(|_| err(format!("bad rank `{}`", tokens[1])))?;
                if n == 0 {
                    return Err(err("rank must be positive".into()));
                }
                rank = Some(n);
            }
            "bond" => {
                let n = rank.ok_or_else(|| err("bond before rank line".into()))?;
                if !(tokens.len() == 4 || tokens.len() == 5) {
                    return Err(err("expected `bond i j m [value]`".into()));
                }
                let index = |t: &str| -> Result<usize> {
                    let k: usize = t.parse().map_err(|_| err(format!("bad index `{t}`")))?;
                    if k == 0 || k > n {
                        return Err(Error::IndexOutOfRange { index: k, rank: n });
                    }
                    Ok(k - 1)
                };
                let (i, j) = (index(tokens[1])?, index(tokens[2])?);
                if i == j {
                    return Err(Error::InvalidBond { i: i + 1, j: j + 1, reason: "diagonal bond".into() });
                }
                if !seen.insert((i.min(j), i.max(j))) {
                    return Err(err(format!("duplicate bond {} {}", i + 1, j + 1)));
                }
                let spec = if tokens[3] == "inf" {
                    let value = match tokens.get(4) {
                        Some(t) => Some(S::parse_decimal(t).ok_or_else(|| err(format!("bad form value `{t}`")))?),
                        None => None,
                    };
                    BondSpec { i, j, order: BondOrder::Infinite, value }
                } else {
                    if tokens.len() == 5 {
                        return Err(err("form value is only allowed on `inf` bonds".into()));
                    }
                    let m: u32 = tokens[3].parse().map_err(|_| err(format!("bad bond label `{}`", tokens[3])))?;
                    if m < 2 {
                        return Err(Error::InvalidBond { i: i + 1, j: j + 1, reason: format!("m = {m} < 2") });
                    }
                    BondSpec::finite(i, j, m)
                };
                bonds.push(spec);
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    let n = rank.ok_or(Error::Parse { line: 1, message: "missing `rank N` line".into() })?;
    CoxeterDatum::new(n, bonds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::{One, Zero};

    #[test]
    fn load_affine_a1() {
        let d: CoxeterDatum<f64> = load_datum("rank 2\nbond 1 2 inf").unwrap();
        assert_eq!(d.gram().rows(), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
        assert_eq!(d.bond(0, 1), BondOrder::Infinite);
    }

    #[test]
    fn load_a2() {
        let d: CoxeterDatum<f64> = load_datum("rank 2\nbond 1 2 3").unwrap();
        assert_eq!(*d.form(0, 1), -0.5);
        let exact: CoxeterDatum<Rational> = load_datum("rank 2\nbond 1 2 3").unwrap();
        assert_eq!(*exact.form(0, 1), Rational::parse_decimal("-0.5").unwrap());
    }

    #[test]
    fn reject_shallow_infinite_value() {
        let e = load_datum::<f64>("rank 2\nbond 1 2 inf -0.5").unwrap_err();
        assert!(matches!(e, Error::InvalidBond { .. }), "{e:?}");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(load_datum::<f64>("bond 1 2 3"), Err(Error::Parse { .. })));
        assert!(matches!(load_datum::<f64>("rank 2\nbond 1 2 x"), Err(Error::Parse { .. })));
        assert!(matches!(load_datum::<f64>("rank 2\nbond 1 2 1"), Err(Error::InvalidBond { .. })));
        assert!(matches!(load_datum::<f64>("rank 2\nbond 1 3 3"), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(load_datum::<f64>("rank 2\nbond 1 2 3 -1.5"), Err(Error::Parse { .. })));
        assert!(matches!(load_datum::<Rational>("rank 2\nbond 1 2 5"), Err(Error::IrrationalEntry { .. })));
    }

    #[test]
    fn comments_and_defaults() {
        let d: CoxeterDatum<f64> = load_datum("# triangle\nrank 3 # three nodes\nbond 1 2 3\n\nbond 2 3 inf -1.5\n").unwrap();
        assert_eq!(*d.form(0, 2), 0.0);
        assert_eq!(d.bond(0, 2), BondOrder::Finite(2));
        assert_eq!(*d.form(1, 2), -1.5);
    }

    #[test]
    fn validate_examples() {
        let d: CoxeterDatum<f64> = load_datum("rank 2\nbond 1 2 inf").unwrap();
        assert!(d.validate().unwrap().c1);
        let bad = CoxeterDatum::<f64>::from_gram(vec![vec![1.0, -1.0], vec![-1.0, 2.0]]);
        assert!(matches!(bad, Err(Error::C1Violation { i: 2, j: 2, .. })));
        let at2: CoxeterDatum<Rational> = load_datum("rank 3\nbond 1 2 3\nbond 1 3 3\nbond 2 3 3").unwrap();
        assert!(at2.validate().unwrap().c1);
        let half = Rational::parse_decimal("-0.5").unwrap();
        assert!((0..3).all(|i| (0..3).all(|j| if i == j { at2.form(i, j).is_one() } else { *at2.form(i, j) == half })));
    }

    #[test]
    fn from_gram_infers_orders() {
        let c5 = -(std::f64::consts::PI / 5.0).cos();
        let d = CoxeterDatum::<f64>::from_gram(vec![vec![1.0, c5], vec![c5, 1.0]]).unwrap();
        assert_eq!(d.bond(0, 1), BondOrder::Finite(5));
        let bad = CoxeterDatum::<f64>::from_gram(vec![vec![1.0, -0.3], vec![-0.3, 1.0]]);
        assert!(matches!(bad, Err(Error::C1Violation { .. })));
        let asym = CoxeterDatum::<f64>::from_gram(vec![vec![1.0, -0.5], vec![0.0, 1.0]]);
        assert!(matches!(asym, Err(Error::C1Violation { .. })));
    }

    #[test]
    fn bilinear_examples() {
        let a1: CoxeterDatum<f64> = load_datum("rank 2\nbond 1 2 inf").unwrap();
        assert_eq!(a1.bilinear(&[2.0, 1.0], &[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(a1.bilinear(&[0.0, 1.0], &[0.0, 1.0]).unwrap(), 1.0);
        let at2: CoxeterDatum<f64> = load_datum("rank 3\nbond 1 2 3\nbond 1 3 3\nbond 2 3 3").unwrap();
        assert_eq!(at2.bilinear(&[2.0, 1.0, 1.0], &[0.0, 1.0, 1.0]).unwrap(), -1.0);
        assert!(matches!(at2.bilinear(&[1.0], &[1.0, 0.0, 0.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn reflection_matrix_examples() {
        let a1: CoxeterDatum<f64> = load_datum("rank 2\nbond 1 2 inf").unwrap();
        assert_eq!(a1.reflection_matrix(0).unwrap().rows(), vec![vec![-1.0, 2.0], vec![0.0, 1.0]]);
        let a2: CoxeterDatum<f64> = load_datum("rank 2\nbond 1 2 3").unwrap();
        assert_eq!(a2.reflection_matrix(0).unwrap().rows(), vec![vec![-1.0, 1.0], vec![0.0, 1.0]]);
        assert!(matches!(a2.reflection_matrix(2), Err(Error::IndexOutOfRange { .. })));
        let m = a2.reflection_matrix(1).unwrap();
        assert!(m.mul(&m).is_identity(a2.tol()));
        let q: CoxeterDatum<Rational> = load_datum("rank 2\nbond 1 2 3").unwrap();
        let m = q.reflection_matrix(0).unwrap();
        assert!(m.mul(&m) == Matrix::identity(2));
        assert!(m.get(1, 0).is_zero());
    }

    #[test]
    fn text_round_trip() {
        let d: CoxeterDatum<f64> = load_datum("rank 3\nbond 1 2 3\nbond 2 3 inf -1.5").unwrap();
        let again: CoxeterDatum<f64> = load_datum(&d.to_datum_text()).unwrap();
        assert_eq!(d, again);
    }
}
