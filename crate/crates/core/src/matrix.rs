use crate::scalar::{Scalar, Tolerance};

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![S::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = S::one();
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.data[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: S) {
        self.data[row * self.n + col] = value;
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.data.chunks(self.n).map(<[S]>::to_vec).collect()
    }

    pub fn column(&self, col: usize) -> Vec<S> {
        (0..self.n).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = S::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = acc + a.clone() * rhs.get(k, j).clone();
                    }
                }
                data.push(acc);
            }
        }
        Self { n, data }
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        debug_assert_eq!(v.len(), self.n);
        self.data
            .chunks(self.n)
            .map(|row| dot(row, v))
            .collect()
    }

    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        self.n == other.n && tol.vec_eq(&self.data, &other.data)
    }

    pub fn is_identity(&self, tol: &Tolerance) -> bool {
        self.approx_eq(&Self::identity(self.n), tol)
    }

    pub(crate) fn entries(&self) -> &[S] {
        &self.data
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn neg<S: Scalar>(a: &[S]) -> Vec<S> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn scale<S: Scalar>(c: &S, a: &[S]) -> Vec<S> {
    a.iter().map(|x| c.clone() * x.clone()).collect()
}

/// `a + c b`
pub fn axpy<S: Scalar>(a: &[S], c: &S, b: &[S]) -> Vec<S> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + c.clone() * y.clone())
        .collect()
}

pub fn unit<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

pub fn to_f64_vec<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::approx).collect()
}

/// One-dimensional approximate hash used to deduplicate vectors and matrices
/// under tolerance: entries are bucketed by a scalar feature, lookups probe
/// neighbouring buckets and the caller confirms candidates exactly.
#[derive(Clone, Debug, Default)]
pub(crate) struct ApproxIndex {
    buckets: std::collections::HashMap<i64, Vec<usize>>,
}

const BUCKET_WIDTH: f64 = 1e-6;

impl ApproxIndex {
    pub(crate) fn feature<S: Scalar>(v: &[S]) -> f64 {
        v.iter()
            .enumerate()
            .map(|(i, x)| x.approx() * (1.0 + 0.6180339887 * i as f64))
            .sum()
    }

    fn bucket(feature: f64) -> i64 {
        (feature / BUCKET_WIDTH).round() as i64
    }

    pub(crate) fn insert(&mut self, feature: f64, id: usize) {
        self.buckets.entry(Self::bucket(feature)).or_default().push(id);
    }

    pub(crate) fn find(&self, feature: f64, mut matches: impl FnMut(usize) -> bool) -> Option<usize> {
        let b = Self::bucket(feature);
        for key in [b, b - 1, b + 1] {
            if let Some(ids) = self.buckets.get(&key) {
                if let Some(&id) = ids.iter().find(|&&id| matches(id)) {
                    return Some(id);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_apply() {
        let a = Matrix::from_rows(vec![vec![1.0, 2.0], vec![0.0, 1.0]]);
        let b = Matrix::from_rows(vec![vec![1.0, 0.0], vec![3.0, 1.0]]);
        let ab = a.mul(&b);
        assert_eq!(ab.rows(), vec![vec![7.0, 2.0], vec![3.0, 1.0]]);
        assert_eq!(a.apply(&[1.0, 1.0]), vec![3.0, 1.0]);
        assert!(Matrix::<f64>::identity(3).is_identity(&Tolerance::new(1e-9)));
    }

    #[test]
    fn approx_index_probes_neighbours() {
        let mut idx = ApproxIndex::default();
        let v = [0.5f64, 1.0];
        idx.insert(ApproxIndex::feature(&v), 7);
        let w = [0.5 + 4e-7, 1.0];
        assert_eq!(idx.find(ApproxIndex::feature(&w), |id| id == 7), Some(7));
        let far = [3.0f64, 1.0];
        assert_eq!(idx.find(ApproxIndex::feature(&far), |_| true), None);
    }
}
