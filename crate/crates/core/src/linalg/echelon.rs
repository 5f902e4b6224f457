use std::collections::HashMap;

use num_traits::{One, Zero};

use super::vector::{axpy_sparse, ElimVec, SparseVec};
use super::Rational;

/// Incremental column echelon form.
///
/// Every stored vector is normalised so its leading entry is 1 and no two
/// stored vectors share a leading index. When combinations are tracked, each
/// stored vector remembers how it was built from the inserted inputs, so a
/// dependent input yields an exact linear relation.
pub(crate) struct Echelon<V: ElimVec> {
    pivots: HashMap<usize, usize>,
    basis: Vec<V>,
    combos: Vec<SparseVec>,
    track: bool,
}

pub(crate) enum Inserted {
    Pivot(usize),
    /// Input reduced to zero; the relation `sum c_j * input_j = 0`.
    Dependent(SparseVec),
}

impl<V: ElimVec> Echelon<V> {
    pub fn new(track: bool) -> Self {
        Self {
            pivots: HashMap::new(),
            basis: Vec::new(),
            combos: Vec::new(),
            track,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v` against the stored vectors. Returns the residual and the
    /// combination `comb` updated so that `residual = sum comb_j * input_j`.
    pub fn reduce(&self, mut v: V, mut comb: SparseVec) -> (V, SparseVec) {
        while let Some(lead) = v.leading() {
            let Some(&idx) = self.pivots.get(&lead) else {
                break;
            };
            let c = v.entry(lead);
            v.sub_scaled(&c, &self.basis[idx]);
            if self.track {
                comb = axpy_sparse(&comb, &-c, &self.combos[idx]);
            }
        }
        (v, comb)
    }

    /// Inserts input number `tag`.
    pub fn insert(&mut self, v: V, tag: usize) -> Inserted {
        let comb = if self.track {
            vec![(tag, Rational::one())]
        } else {
            Vec::new()
        };
        self.insert_with(v, comb)
    }

    pub fn insert_with(&mut self, v: V, comb: SparseVec) -> Inserted {
        let (mut v, mut comb) = self.reduce(v, comb);
        match v.leading() {
            None => Inserted::Dependent(comb),
            Some(lead) => {
                let inv = Rational::one() / v.entry(lead);
                v.scale(&inv);
                if self.track {
                    for (_, x) in comb.iter_mut() {
                        *x *= &inv;
                    }
                }
                self.pivots.insert(lead, self.basis.len());
                self.basis.push(v);
                self.combos.push(comb);
                Inserted::Pivot(lead)
            }
        }
    }

    /// Expresses `target` in terms of the inputs, if it lies in their span.
    pub fn express(&self, target: V) -> Option<SparseVec> {
        let (residual, comb) = self.reduce(target, Vec::new());
        if residual.is_zero() {
            // residual = target + sum comb_j * input_j
            Some(
                comb.into_iter()
                    .map(|(i, x)| (i, -x))
                    .filter(|(_, x)| !x.is_zero())
                    .collect(),
            )
        } else {
            None
        }
    }

    pub fn contains(&self, target: V) -> bool {
        self.reduce(target, Vec::new()).0.is_zero()
    }

    pub fn basis(&self) -> &[V] {
        &self.basis
    }
}

#[cfg(test)]
mod tests {
    use super::super::vector::{Dense, Sparse};
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn express_recovers_combination() {
        let mut e: Echelon<Sparse> = Echelon::new(true);
        e.insert(Sparse(vec![(0, r(1)), (1, r(2))]), 0);
        e.insert(Sparse(vec![(1, r(1)), (2, r(1))]), 1);
        let target = Sparse(vec![(0, r(2)), (1, r(7)), (2, r(3))]);
        let comb = e.express(target).unwrap();
        assert_eq!(comb, vec![(0, r(2)), (1, r(3))]);
    }

    #[test]
    fn dense_and_sparse_agree_on_rank() {
        let rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1], [1, 3, 4]];
        let mut s: Echelon<Sparse> = Echelon::new(false);
        let mut d: Echelon<Dense> = Echelon::new(false);
        for (t, row) in rows.iter().enumerate() {
            let v: Vec<Rational> = row.iter().map(|&x| r(x)).collect();
            d.insert(Dense(v.clone()), t);
            s.insert(Sparse(super::super::vector::sparse_from_dense(&v)), t);
        }
        assert_eq!(s.rank(), 2);
        assert_eq!(d.rank(), 2);
        assert!(Rational::zero() == r(0));
    }
}
