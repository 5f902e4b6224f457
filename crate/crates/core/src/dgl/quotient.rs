use std::collections::BTreeMap;

use num_traits::Zero;

use super::DglPresentation;
use crate::error::{Error, Result};
use crate::lie::{ideal_degree_rec, ideal_span_in_multidegree, spanning_set, BracketTree, LieElement, WordIndex};
use crate::linalg::{rank, Echelon, Inserted, Sparse, SparseMatrix, SparseVec};

struct Component {
    basis: Vec<BracketTree>,
    ideal_rank: usize,
    index: WordIndex,
    /// Ideal vectors first (tags `0..ideal_rank`), then the complement.
    echelon: Echelon<Sparse>,
}

impl Component {
    fn build(p: &DglPresentation, degree: u32, ideal: &[LieElement]) -> Self {
        let al = p.alphabet();
        let mut index = WordIndex::new();
        let mut echelon = Echelon::new(true);
        let mut ideal_rank = 0;
        for e in ideal {
            let col = index.column(e);
            if let Inserted::Pivot(_) = echelon.insert(Sparse(col), ideal_rank) {
                ideal_rank += 1;
            }
        }
        let mut basis = Vec::new();
        for t in spanning_set(al, degree, None) {
            let el = LieElement::from_tree(al, t.clone());
            let col = index.column(&el);
            if let Inserted::Pivot(_) = echelon.insert(Sparse(col), ideal_rank + basis.len()) {
                basis.push(t);
            }
        }
        Self {
            basis,
            ideal_rank,
            index,
            echelon,
        }
    }

    fn class_of(&self, el: &LieElement) -> Option<SparseVec> {
        let col = self.index.column_within(el)?;
        let comb = self.echelon.express(Sparse(col))?;
        Some(
            comb.into_iter()
                .filter(|(i, _)| *i >= self.ideal_rank)
                .map(|(i, x)| (i - self.ideal_rank, x))
                .collect(),
        )
    }

    fn in_ideal(&self, el: &LieElement) -> bool {
        self.class_of(el).is_some_and(|c| c.iter().all(|(_, x)| x.is_zero()))
    }
}

/// Degreewise quotient of a free dgl by a differential ideal, with the
/// induced differential.
pub struct QuotientComplex {
    cap: u32,
    components: BTreeMap<u32, Component>,
    /// `differentials[n]`: quotient degree n -> quotient degree n - 1.
    differentials: BTreeMap<u32, SparseMatrix>,
}

impl QuotientComplex {
    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn dim(&self, degree: u32) -> usize {
        self.components.get(&degree).map_or(0, |c| c.basis.len())
    }

    /// Representatives of a basis of the quotient in `degree`.
    pub fn basis(&self, degree: u32) -> &[BracketTree] {
        self.components.get(&degree).map_or(&[], |c| &c.basis)
    }

    /// Coordinates of the class of `el` in the quotient basis; `None` beyond
    /// the cap.
    pub fn class_of(&self, el: &LieElement) -> Option<SparseVec> {
        if el.is_zero() {
            return Some(Vec::new());
        }
        let c = self.components.get(&el.degree())?;
        Some(c.class_of(el).expect("elements of L lie in the span of the basis"))
    }

    pub fn is_zero_class(&self, el: &LieElement) -> Option<bool> {
        self.class_of(el).map(|c| c.iter().all(|(_, x)| x.is_zero()))
    }

    pub fn differential(&self, degree: u32) -> Option<&SparseMatrix> {
        self.differentials.get(&degree)
    }

    /// Homology of the quotient complex, for degrees below the cap.
    pub fn homology(&self, degree: u32) -> Option<usize> {
        if degree >= self.cap {
            return None;
        }
        let r = |n: u32| self.differentials.get(&n).map_or(0, rank);
        Some(self.dim(degree) - r(degree) - r(degree + 1))
    }
}

/// Quotient of `p` by the ideal generated by `ideal_gens`, in degrees up to
/// `cap`. The ideal must be stable under the differential.
pub fn quotient_by_differential_ideal(
    p: &DglPresentation,
    ideal_gens: &[LieElement],
    cap: u32,
) -> Result<QuotientComplex> {
    let al = p.alphabet();
    let gens: Vec<LieElement> = ideal_gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut memo = BTreeMap::new();
    let mut components = BTreeMap::new();
    for n in 1..=cap {
        let ideal = if gens.is_empty() {
            Vec::new()
        } else {
            ideal_degree_rec(al, &gens, n, &mut memo)
        };
        components.insert(n, Component::build(p, n, &ideal));
    }
    for g in &gens {
        let dg = p.d(g);
        if dg.is_zero() || dg.degree() > cap {
            continue;
        }
        if !components[&dg.degree()].in_ideal(&dg) {
            return Err(Error::NotDifferentialStable(g.display(al).to_string()));
        }
    }
    let mut differentials = BTreeMap::new();
    for n in 2..=cap {
        let src = &components[&n];
        let dst = &components[&(n - 1)];
        let cols = src
            .basis
            .iter()
            .map(|t| {
                let dt = p.d(&LieElement::from_tree(al, t.clone()));
                if dt.is_zero() {
                    Vec::new()
                } else {
                    dst.class_of(&dt).expect("d lands in the previous degree")
                }
            })
            .collect();
        differentials.insert(n, SparseMatrix::from_columns(dst.basis.len(), cols));
    }
    Ok(QuotientComplex {
        cap,
        components,
        differentials,
    })
}

/// Whether `el` lies in the ideal generated by multihomogeneous `ideal_gens`,
/// working one letter multiset at a time. The ideal must be stable under the
/// differential, which is checked on the generators.
pub fn ideal_contains(p: &DglPresentation, ideal_gens: &[LieElement], el: &LieElement) -> Result<bool> {
    let al = p.alphabet();
    for g in ideal_gens {
        if g.multidegree().is_none() && !g.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "ideal generator {} is not multihomogeneous",
                g.display(al)
            )));
        }
    }
    let member = |x: &LieElement| -> bool {
        x.multidegree_components().into_iter().all(|(m, part)| {
            if part.is_zero() {
                return true;
            }
            let span = ideal_span_in_multidegree(al, ideal_gens, &m);
            let mut index = WordIndex::new();
            let mut ech: Echelon<Sparse> = Echelon::new(false);
            for (i, e) in span.iter().enumerate() {
                ech.insert(Sparse(index.column(e)), i);
            }
            match index.column_within(&part) {
                Some(col) => ech.contains(Sparse(col)),
                None => false,
            }
        })
    };
    for g in ideal_gens {
        let dg = p.d(g);
        if !member(&dg) {
            return Err(Error::NotDifferentialStable(g.display(al).to_string()));
        }
    }
    Ok(member(el))
}
