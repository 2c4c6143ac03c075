//! Scalar arithmetic contract.
//!
//! Every real quantity (form values, root coefficients, chain coefficients)
//! is a [`Scalar`]. Floating point types compare under a mixed
//! absolute/relative tolerance; [`Rational`] compares exactly and ignores the
//! tolerance.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational, the exact backend.
pub type Rational = BigRational;

pub trait Scalar:
    Num + Signed + PartialOrd + Clone + Debug + Send + Sync + FromPrimitive + ToPrimitive + 'static
{
    /// True when arithmetic performs no rounding.
    const EXACT: bool;
    const NAME: &'static str;

    fn default_epsilon() -> f64;

    /// `-cos(pi/m)`, when representable in this scalar type.
    fn neg_cos_pi_over(m: u32) -> Option<Self>;

    /// Parses a plain decimal literal such as `-1.25` or `3`.
    fn parse_decimal(s: &str) -> Option<Self>;

    /// Three-way comparison; `eps` is ignored by exact types.
    fn compare(&self, other: &Self, eps: f64) -> Ordering;

    /// Short canonical text form, stable across runs.
    fn render(&self) -> String;

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("integer fits every scalar backend")
    }
}

fn float_compare(a: f64, b: f64, eps: f64) -> Ordering {
    let scale = 1f64.max(a.abs()).max(b.abs());
    if (a - b).abs() <= eps * scale {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

fn trim_decimal(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const NAME: &'static str = "f64";

    fn default_epsilon() -> f64 {
        1e-9
    }

    fn neg_cos_pi_over(m: u32) -> Option<Self> {
        // cos(pi/2) and cos(pi/3) are not exact in binary floating point.
        Some(match m {
            0 | 1 => return None,
            2 => 0.0,
            3 => -0.5,
            _ => -(std::f64::consts::PI / m as f64).cos(),
        })
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
    }

    fn compare(&self, other: &Self, eps: f64) -> Ordering {
        float_compare(*self, *other, eps)
    }

    fn render(&self) -> String {
        trim_decimal(format!("{:.10}", self))
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    const NAME: &'static str = "f32";

    fn default_epsilon() -> f64 {
        1e-4
    }

    fn neg_cos_pi_over(m: u32) -> Option<Self> {
        f64::neg_cos_pi_over(m).map(|v| v as f32)
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse::<f32>().ok().filter(|v| v.is_finite())
    }

    fn compare(&self, other: &Self, eps: f64) -> Ordering {
        float_compare(*self as f64, *other as f64, eps)
    }

    fn render(&self) -> String {
        trim_decimal(format!("{:.5}", self))
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const NAME: &'static str = "rational";

    fn default_epsilon() -> f64 {
        0.0
    }

    fn neg_cos_pi_over(m: u32) -> Option<Self> {
        match m {
            2 => Some(BigRational::zero()),
            3 => Some(BigRational::new(BigInt::from(-1), BigInt::from(2))),
            _ => None,
        }
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let numer = BigInt::parse_bytes(digits.as_bytes(), 10)?;
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = BigRational::new(numer, denom);
        Some(if negative { -value } else { value })
    }

    fn compare(&self, other: &Self, _eps: f64) -> Ordering {
        self.cmp(other)
    }

    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or_else(|| {
            self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
        })
    }
}

/// Comparison policy shared by every computation on one datum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub epsilon: f64,
}

impl Tolerance {
    pub fn new(epsilon: f64) -> Self {
        Self { epsilon }
    }

    pub fn for_scalar<S: Scalar>() -> Self {
        Self::new(S::default_epsilon())
    }

    pub fn cmp<S: Scalar>(&self, a: &S, b: &S) -> Ordering {
        a.compare(b, self.epsilon)
    }

    pub fn eq<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.cmp(a, b) == Ordering::Equal
    }

    pub fn lt<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.cmp(a, b) == Ordering::Less
    }

    pub fn gt<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.cmp(a, b) == Ordering::Greater
    }

    pub fn le<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.cmp(a, b) != Ordering::Greater
    }

    pub fn ge<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.cmp(a, b) != Ordering::Less
    }

    pub fn sign<S: Scalar>(&self, a: &S) -> Ordering {
        self.cmp(a, &S::zero())
    }

    pub fn is_zero<S: Scalar>(&self, a: &S) -> bool {
        self.sign(a) == Ordering::Equal
    }

    pub fn vec_eq<S: Scalar>(&self, a: &[S], b: &[S]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.eq(x, y))
    }

    /// Lexicographic comparison under tolerance.
    pub fn vec_cmp<S: Scalar>(&self, a: &[S], b: &[S]) -> Ordering {
        for (x, y) in a.iter().zip(b) {
            match self.cmp(x, y) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        a.len().cmp(&b.len())
    }

    /// Sign of a vector in the positive cone sense: `Greater` when every
    /// coefficient is nonnegative and one is positive, `Less` for the mirror
    /// case, `Equal` for zero, `None` for mixed signs.
    pub fn cone_sign<S: Scalar>(&self, v: &[S]) -> Option<Ordering> {
        let mut pos = false;
        let mut neg = false;
        for c in v {
            match self.sign(c) {
                Ordering::Greater => pos = true,
                Ordering::Less => neg = true,
                Ordering::Equal => {}
            }
        }
        match (pos, neg) {
            (true, false) => Some(Ordering::Greater),
            (false, true) => Some(Ordering::Less),
            (false, false) => Some(Ordering::Equal),
            (true, true) => None,
        }
    }

    pub fn is_positive_vec<S: Scalar>(&self, v: &[S]) -> bool {
        self.cone_sign(v) == Some(Ordering::Greater)
    }

    pub fn is_negative_vec<S: Scalar>(&self, v: &[S]) -> bool {
        self.cone_sign(v) == Some(Ordering::Less)
    }
}

/// Renders a coefficient vector in the CLI root literal syntax, e.g. `2,1,1`.
pub fn render_vec<S: Scalar>(v: &[S]) -> String {
    v.iter().map(Scalar::render).collect::<Vec<_>>().join(",")
}

/// Parses the CLI root literal syntax.
pub fn parse_vec<S: Scalar>(s: &str) -> Option<Vec<S>> {
    s.split(',').map(S::parse_decimal).collect()
}
