use num_traits::{One, Zero};

use super::Rational;

/// Sparse vector: `(index, value)` pairs sorted by index, no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

/// Storage used by the elimination engine. Both kinds hold the same values;
/// only the cost profile differs.
pub(crate) trait ElimVec: Clone {
    fn leading(&self) -> Option<usize>;
    fn entry(&self, i: usize) -> Rational;
    /// `self -= c * other`
    fn sub_scaled(&mut self, c: &Rational, other: &Self);
    fn scale(&mut self, c: &Rational);
    fn is_zero(&self) -> bool {
        self.leading().is_none()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Sparse(pub SparseVec);

#[derive(Clone, Debug)]
pub(crate) struct Dense(pub Vec<Rational>);

impl Dense {
    pub fn from_sparse(len: usize, v: &SparseVec) -> Self {
        let mut out = vec![Rational::zero(); len];
        for (i, x) in v {
            out[*i] = x.clone();
        }
        Dense(out)
    }
}

impl ElimVec for Sparse {
    fn leading(&self) -> Option<usize> {
        self.0.first().map(|(i, _)| *i)
    }

    fn entry(&self, i: usize) -> Rational {
        match self.0.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.0[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    fn sub_scaled(&mut self, c: &Rational, other: &Self) {
        if c.is_zero() {
            return;
        }
        self.0 = axpy_sparse(&self.0, &-c.clone(), &other.0);
    }

    fn scale(&mut self, c: &Rational) {
        for (_, x) in self.0.iter_mut() {
            *x *= c;
        }
    }
}

impl ElimVec for Dense {
    fn leading(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }

    fn entry(&self, i: usize) -> Rational {
        self.0[i].clone()
    }

    fn sub_scaled(&mut self, c: &Rational, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            if !y.is_zero() {
                *x -= c * y;
            }
        }
    }

    fn scale(&mut self, c: &Rational) {
        for x in self.0.iter_mut() {
            *x *= c;
        }
    }
}

/// `x + c * y` on sorted sparse vectors.
pub fn axpy_sparse(x: &SparseVec, c: &Rational, y: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, c * &y[j].1));
            j += 1;
        } else {
            let v = &x[i].1 + c * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn dot_sparse_dense(x: &SparseVec, y: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (i, v) in x {
        if !y[*i].is_zero() {
            acc += v * &y[*i];
        }
    }
    acc
}

pub fn unit(i: usize) -> SparseVec {
    vec![(i, Rational::one())]
}

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn dense_from_sparse(len: usize, v: &SparseVec) -> Vec<Rational> {
    Dense::from_sparse(len, v).0
}
