//! Group elements as reduced words with their matrix action.

use crate::datum::CoxeterDatum;
use crate::error::Result;
use crate::matrix::{ApproxIndex, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<S> {
    word: Vec<usize>,
    matrix: Matrix<S>,
}

impl<S: Scalar> GroupElement<S> {
    pub fn identity(d: &CoxeterDatum<S>) -> Self {
        Self { word: Vec::new(), matrix: Matrix::identity(d.rank()) }
    }

    /// Single generator, 0-based.
    pub fn simple(d: &CoxeterDatum<S>, a: usize) -> Result<Self> {
        Ok(Self { word: vec![a], matrix: d.reflection_matrix(a)? })
    }

    /// Reduced word (0-based generator indices).
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// `w v`.
    pub fn act(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.matrix.dim() {
            return Err(crate::error::Error::DimensionMismatch { expected: self.matrix.dim(), got: v.len() });
        }
        Ok(self.matrix.apply(v))
    }

    pub(crate) fn act_unchecked(&self, v: &[S]) -> Vec<S> {
        self.matrix.apply(v)
    }

    /// `self * other`, reduced.
    pub fn mul(&self, d: &CoxeterDatum<S>, other: &Self) -> Self {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        reduce_unchecked(d, &word)
    }

    pub fn inverse(&self, d: &CoxeterDatum<S>) -> Self {
        let word: Vec<usize> = self.word.iter().rev().copied().collect();
        Self { matrix: word_matrix(d, &word), word }
    }

    /// Word as 1-based dot-separated literal, e.g. `1.2.1`; `e` for identity.
    pub fn word_literal(&self) -> String {
        render_word(&self.word)
    }

    /// `N(w)`: the positive roots made negative by `w`, read off the reduced
    /// word `s_1 .. s_k` as `s_k .. s_{j+1} alpha_{s_j}`.
    pub fn inversion_roots(&self, d: &CoxeterDatum<S>) -> Vec<Vec<S>> {
        let n = d.rank();
        let k = self.word.len();
        (0..k)
            .rev()
            .map(|j| {
                let mut v = crate::matrix::unit::<S>(n, self.word[j]);
                for &s in &self.word[j + 1..] {
                    v = d.reflect_simple(s, &v);
                }
                v
            })
            .collect()
    }

    /// Builds an element from a word already known to be reduced.
    pub(crate) fn from_reduced_word(d: &CoxeterDatum<S>, word: Vec<usize>) -> Self {
        Self { matrix: word_matrix(d, &word), word }
    }

    /// Matrix equality under the datum tolerance.
    pub fn same_element(&self, other: &Self, d: &CoxeterDatum<S>) -> bool {
        self.matrix.approx_eq(&other.matrix, d.tol())
    }
}

pub fn render_word(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    word.iter().map(|a| (a + 1).to_string()).collect::<Vec<_>>().join(".")
}

/// Parses `1.2.1` (1-based) into 0-based indices; `e` or the empty string is
/// the identity.
pub fn parse_word(s: &str) -> Option<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s == "e" {
        return Some(Vec::new());
    }
    s.split('.')
        .map(|t| t.trim().parse::<usize>().ok().filter(|&k| k >= 1).map(|k| k - 1))
        .collect()
}

fn word_matrix<S: Scalar>(d: &CoxeterDatum<S>, word: &[usize]) -> Matrix<S> {
    let mut m = Matrix::identity(d.rank());
    for &a in word {
        m = m.mul(&d.reflection_matrix(a).expect("letters are validated"));
    }
    m
}

/// Reduces a word by sign-rule deletion. Each new letter `a` either
/// lengthens the current reduced word `w`, or `w alpha_a` is negative and
/// the exchange condition names the letter to delete: walking `w` from the
/// right, the first position `j` where the running image of `alpha_a`
/// equals `alpha_{s_j}`.
pub fn reduce_word<S: Scalar>(d: &CoxeterDatum<S>, word: &[usize]) -> Result<GroupElement<S>> {
    for &a in word {
        d.check_generator(a)?;
    }
    Ok(reduce_unchecked(d, word))
}

fn reduce_unchecked<S: Scalar>(d: &CoxeterDatum<S>, word: &[usize]) -> GroupElement<S> {
    let tol = d.tol();
    let n = d.rank();
    let mut reduced: Vec<usize> = Vec::with_capacity(word.len());
    for &a in word {
        let mut v = crate::matrix::unit::<S>(n, a);
        let mut hit = None;
        for j in (0..reduced.len()).rev() {
            let s = reduced[j];
            if is_simple(&v, s, tol) {
                hit = Some(j);
                break;
            }
            v = d.reflect_simple(s, &v);
        }
        match hit {
            Some(j) => {
                reduced.remove(j);
            }
            None => reduced.push(a),
        }
    }
    GroupElement { matrix: word_matrix(d, &reduced), word: reduced }
}

fn is_simple<S: Scalar>(v: &[S], s: usize, tol: &crate::scalar::Tolerance) -> bool {
    v.iter()
        .enumerate()
        .all(|(i, c)| if i == s { tol.eq(c, &S::one()) } else { tol.is_zero(c) })
}

/// Every element of length at most `max_len`, grouped by length and listed
/// in a deterministic order. Fails with `CapExceeded` beyond `cap` elements.
pub fn elements_up_to_length<S: Scalar>(
    d: &CoxeterDatum<S>,
    max_len: usize,
    cap: usize,
) -> Result<Vec<GroupElement<S>>> {
    let tol = d.tol();
    let mut all = vec![GroupElement::identity(d)];
    let mut frontier = vec![0usize];
    let mut index = ApproxIndex::default();
    index.insert(ApproxIndex::feature(all[0].matrix.entries()), 0);
    for _ in 0..max_len {
        let mut next = Vec::new();
        for &id in &frontier {
            for a in 0..d.rank() {
                // w a is longer than w iff w alpha_a is positive
                let image = all[id].matrix.column(a);
                if !tol.is_positive_vec(&image) {
                    continue;
                }
                let matrix = all[id].matrix.mul(&d.reflection_matrix(a)?);
                let f = ApproxIndex::feature(matrix.entries());
                if index.find(f, |k| all[k].matrix.approx_eq(&matrix, tol)).is_some() {
                    continue;
                }
                let mut word = all[id].word.clone();
                word.push(a);
                all.push(GroupElement { word, matrix });
                if all.len() > cap {
                    return Err(crate::error::Error::CapExceeded(format!(
                        "more than {cap} group elements of length <= {max_len}"
                    )));
                }
                index.insert(f, all.len() - 1);
                next.push(all.len() - 1);
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(all)
}
