//! Exact sparse linear algebra over Q.

mod echelon;
pub mod modular;
mod vector;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};

pub(crate) use echelon::{Echelon, Inserted};
pub use vector::{axpy_sparse, dense_from_sparse, dot_sparse_dense, sparse_from_dense, unit, SparseVec};
pub(crate) use vector::{Dense, ElimVec, Sparse};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Matrices with at most this many cells are eliminated densely.
pub const DEFAULT_DENSE_THRESHOLD: usize = 4096;

/// Column-stored sparse matrix over Q. No stored entry is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    n_rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            cols: vec![Vec::new(); n_cols],
        }
    }

    pub fn from_columns(n_rows: usize, cols: Vec<SparseVec>) -> Self {
        let cols = cols
            .into_iter()
            .map(|mut c| {
                c.sort_by_key(|(i, _)| *i);
                c.retain(|(_, x)| !x.is_zero());
                assert!(c.iter().all(|(i, _)| *i < n_rows), "row index out of bounds");
                c
            })
            .collect();
        Self { n_rows, cols }
    }

    /// Row-major dense input.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(n_rows, n_cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n_cols, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_columns(n, (0..n).map(unit).collect())
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self.cols[j].binary_search_by_key(&i, |(r, _)| *r) {
            Ok(p) => self.cols[j][p].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        assert!(i < self.n_rows && j < self.cols.len(), "index out of bounds");
        let col = &mut self.cols[j];
        match col.binary_search_by_key(&i, |(r, _)| *r) {
            Ok(p) => {
                if x.is_zero() {
                    col.remove(p);
                } else {
                    col[p].1 = x;
                }
            }
            Err(p) => {
                if !x.is_zero() {
                    col.insert(p, (i, x));
                }
            }
        }
    }

    pub fn push_column(&mut self, mut col: SparseVec) {
        col.sort_by_key(|(i, _)| *i);
        col.retain(|(_, x)| !x.is_zero());
        assert!(col.iter().all(|(i, _)| *i < self.n_rows), "row index out of bounds");
        self.cols.push(col);
    }

    pub fn with_column(&self, b: &[Rational]) -> Self {
        let mut m = self.clone();
        m.push_column(sparse_from_dense(b));
        m
    }

    pub fn transpose(&self) -> Self {
        let mut cols = vec![Vec::new(); self.n_rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, x) in col {
                cols[*i].push((j, x.clone()));
            }
        }
        Self {
            n_rows: self.cols.len(),
            cols,
        }
    }

    /// `M x`
    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.n_rows];
        for (j, col) in self.cols.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (i, v) in col {
                out[*i] += v * &x[j];
            }
        }
        out
    }

    /// `y^T M`
    pub fn left_mul_vec(&self, y: &[Rational]) -> Vec<Rational> {
        self.cols.iter().map(|c| dot_sparse_dense(c, y)).collect()
    }

    fn is_small(&self, threshold: usize) -> bool {
        self.n_rows.saturating_mul(self.cols.len()) <= threshold
    }
}

/// Elimination settings shared by the exact routines.
#[derive(Clone, Copy, Debug)]
pub struct Elimination {
    pub dense_threshold: usize,
    pub budget: Budget,
}

impl Default for Elimination {
    fn default() -> Self {
        Self {
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
            budget: Budget::unlimited(),
        }
    }
}

/// Outcome of the column reduction of a matrix.
struct Reduced<V: ElimVec> {
    echelon: Echelon<V>,
    relations: Vec<SparseVec>,
}

impl Elimination {
    pub fn with_budget(budget: Budget) -> Self {
        Self {
            budget,
            ..Self::default()
        }
    }

    /// Fewest nonzeros first: a cheap proxy for minimal fill.
    fn column_order(m: &SparseMatrix) -> Vec<usize> {
        let mut order: Vec<usize> = (0..m.n_cols()).collect();
        order.sort_by_key(|&j| m.cols[j].len());
        order
    }

    fn reduce_with<V: ElimVec>(
        &self,
        m: &SparseMatrix,
        track: bool,
        wrap: impl Fn(&SparseVec) -> V,
    ) -> Result<Reduced<V>> {
        let mut echelon = Echelon::new(track);
        let mut relations = Vec::new();
        for (step, j) in Self::column_order(m).into_iter().enumerate() {
            if step % 64 == 0 {
                self.budget.check("exact elimination")?;
            }
            if let Inserted::Dependent(rel) = echelon.insert(wrap(&m.cols[j]), j) {
                if track {
                    relations.push(rel);
                }
            }
        }
        Ok(Reduced { echelon, relations })
    }

    pub fn rank(&self, m: &SparseMatrix) -> Result<usize> {
        if m.is_small(self.dense_threshold) {
            let n = m.n_rows;
            Ok(self.reduce_with(m, false, |c| Dense::from_sparse(n, c))?.echelon.rank())
        } else {
            Ok(self.reduce_with(m, false, |c| Sparse(c.clone()))?.echelon.rank())
        }
    }

    pub fn kernel_basis(&self, m: &SparseMatrix) -> Result<Vec<Vec<Rational>>> {
        let n = m.n_rows;
        let rels = if m.is_small(self.dense_threshold) {
            self.reduce_with(m, true, |c| Dense::from_sparse(n, c))?.relations
        } else {
            self.reduce_with(m, true, |c| Sparse(c.clone()))?.relations
        };
        let mut out: Vec<Vec<Rational>> = rels.iter().map(|r| dense_from_sparse(m.n_cols(), r)).collect();
        out.sort_by_key(|v| v.iter().rposition(|x| !x.is_zero()));
        Ok(out)
    }

    pub fn solve(&self, m: &SparseMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != m.n_rows {
            return Err(Error::DimensionMismatch {
                expected: m.n_rows,
                got: b.len(),
            });
        }
        let n = m.n_rows;
        let comb = if m.is_small(self.dense_threshold) {
            let red = self.reduce_with(m, true, |c| Dense::from_sparse(n, c))?;
            red.echelon.express(Dense(b.to_vec()))
        } else {
            let red = self.reduce_with(m, true, |c| Sparse(c.clone()))?;
            red.echelon.express(Sparse(sparse_from_dense(b)))
        };
        Ok(comb.map(|c| dense_from_sparse(m.n_cols(), &c)))
    }

    /// A vector `y` with `y^T M = 0` and `y^T b != 0`, when `M x = b` has no
    /// solution. Found by solving the transposed system `[M^T; b^T] y = e_last`.
    pub fn infeasibility_witness(&self, m: &SparseMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != m.n_rows {
            return Err(Error::DimensionMismatch {
                expected: m.n_rows,
                got: b.len(),
            });
        }
        let mut dual_rows = m.transpose();
        // append b^T as the last row of M^T
        let last = dual_rows.n_rows;
        dual_rows.n_rows += 1;
        for (i, x) in b.iter().enumerate() {
            if !x.is_zero() {
                dual_rows.cols[i].push((last, x.clone()));
            }
        }
        let mut rhs = vec![Rational::zero(); last + 1];
        rhs[last] = Rational::one();
        self.solve(&dual_rows, &rhs)
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    Elimination::default().rank(m).expect("unlimited budget")
}

pub fn solve(m: &SparseMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    Elimination::default().solve(m, b)
}

pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Rational>> {
    Elimination::default().kernel_basis(m).expect("unlimited budget")
}

pub fn infeasibility_witness(m: &SparseMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    Elimination::default().infeasibility_witness(m, b)
}

/// Checks a claimed Farkas witness: `y^T M = 0` and `y^T b != 0`.
pub fn verify_witness(m: &SparseMatrix, b: &[Rational], y: &[Rational]) -> bool {
    y.len() == m.n_rows
        && b.len() == m.n_rows
        && m.left_mul_vec(y).iter().all(Zero::is_zero)
        && !b
            .iter()
            .zip(y)
            .map(|(p, q)| p * q)
            .fold(Rational::zero(), |a, x| a + x)
            .is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::identity(3)), 3);
        assert_eq!(rank(&SparseMatrix::zeros(2, 4)), 0);
        assert_eq!(rank(&SparseMatrix::from_i64_rows(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn solve_examples() {
        let m = SparseMatrix::from_i64_rows(&[&[2]]);
        assert_eq!(solve(&m, &rv(&[1])).unwrap(), Some(vec![ratio(1, 2)]));
        let m = SparseMatrix::from_i64_rows(&[&[1], &[1]]);
        assert_eq!(solve(&m, &rv(&[1, 2])).unwrap(), None);
        assert!(matches!(solve(&m, &rv(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zeros(1, 3)).len(), 3);
        let m = SparseMatrix::from_i64_rows(&[&[1, 1, 0]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn witness_examples() {
        let m = SparseMatrix::from_i64_rows(&[&[1], &[1]]);
        let b = rv(&[1, 2]);
        let y = infeasibility_witness(&m, &b).unwrap().unwrap();
        assert!(verify_witness(&m, &b, &y));
        // the witness is determined up to scale: proportional to (1, -1)
        assert_eq!(&y[0] + &y[1], rat(0));
        let feasible = rv(&[3, 3]);
        assert_eq!(infeasibility_witness(&m, &feasible).unwrap(), None);
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        let m = SparseMatrix::from_i64_rows(&[&[1, 2, 0, 3], &[0, 1, 1, 1], &[1, 3, 1, 4]]);
        let dense = Elimination::default();
        let sparse = Elimination {
            dense_threshold: 0,
            ..Elimination::default()
        };
        assert_eq!(dense.rank(&m).unwrap(), 2);
        assert_eq!(sparse.rank(&m).unwrap(), 2);
        assert_eq!(dense.kernel_basis(&m).unwrap(), sparse.kernel_basis(&m).unwrap());
    }
}
