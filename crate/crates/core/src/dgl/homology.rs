use rayon::prelude::*;

use super::{require_d_squared, DglPresentation};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lie::{spanning_set, spanning_set_with, BracketTree, LieElement, SpanSpec, WordIndex};
use crate::linalg::{Elimination, Rational, SparseMatrix, SparseVec};

/// Where `solve_boundary` looks for a preimage: a generator subset and a
/// weight range, in the degree one above the target.
pub type SearchSpace = SpanSpec;

/// The linear system `d(sum x_j t_j) = target` over a spanning set.
#[derive(Clone, Debug)]
pub struct BoundarySystem {
    pub trees: Vec<BracketTree>,
    pub matrix: SparseMatrix,
    pub rhs: Vec<Rational>,
    pub rows: WordIndex,
}

impl BoundarySystem {
    /// The element with coefficients `x` on the spanning trees.
    pub fn element(&self, p: &DglPresentation, degree: u32, x: &[Rational]) -> LieElement {
        let terms = self
            .trees
            .iter()
            .zip(x)
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(t, c)| (t.clone(), c.clone()));
        LieElement::from_terms(p.alphabet(), degree, terms).expect("spanning trees share the degree")
    }
}

pub fn boundary_system(p: &DglPresentation, degree: u32, space: &SearchSpace, target: &LieElement) -> BoundarySystem {
    let trees = spanning_set_with(p.alphabet(), degree, space);
    let cols: Vec<_> = trees
        .par_iter()
        .map(|t| {
            let (_, coords) = t.expand(p.alphabet());
            p.d_coords(&coords)
        })
        .collect();
    let mut rows = WordIndex::new();
    let mut sparse_cols: Vec<SparseVec> = Vec::with_capacity(cols.len());
    for c in &cols {
        let mut v: SparseVec = c.iter().map(|(w, x)| (rows.index(w), x.clone())).collect();
        v.sort_by_key(|(i, _)| *i);
        sparse_cols.push(v);
    }
    let b_sparse = rows.column(target);
    let n = rows.len();
    let mut rhs = vec![Rational::from_integer(0.into()); n];
    for (i, x) in b_sparse {
        rhs[i] = x;
    }
    BoundarySystem {
        trees,
        matrix: SparseMatrix::from_columns(n, sparse_cols),
        rhs,
        rows,
    }
}

/// An element `e` of the search space with `d e = target`, if one exists.
pub fn solve_boundary(p: &DglPresentation, target: &LieElement, space: &SearchSpace) -> Result<Option<LieElement>> {
    if !p.d(target).is_zero() {
        return Err(Error::NotACycle);
    }
    let degree = target.degree() + 1;
    if target.is_zero() {
        return Ok(Some(LieElement::zero(degree)));
    }
    let sys = boundary_system(p, degree, space, target);
    let Some(x) = Elimination::default().solve(&sys.matrix, &sys.rhs)? else {
        return Ok(None);
    };
    let e = sys.element(p, degree, &x);
    if &p.d(&e) != target {
        return Err(Error::VerificationFailed(
            "boundary solution does not reproduce the target".into(),
        ));
    }
    Ok(Some(e))
}

fn differential_matrix(p: &DglPresentation, degree: u32) -> SparseMatrix {
    let trees = spanning_set(p.alphabet(), degree, None);
    let cols: Vec<_> = trees
        .par_iter()
        .map(|t| p.d_coords(&t.expand(p.alphabet()).1))
        .collect();
    let mut rows = WordIndex::new();
    let sparse: Vec<SparseVec> = cols
        .iter()
        .map(|c| {
            let mut v: SparseVec = c.iter().map(|(w, x)| (rows.index(w), x.clone())).collect();
            v.sort_by_key(|(i, _)| *i);
            v
        })
        .collect();
    SparseMatrix::from_columns(rows.len(), sparse)
}

/// Homology dimensions in degrees `1..=max_degree` (entry `i` is degree
/// `i + 1`). Requires `d^2 = 0` on generators up to `max_degree + 1`.
pub fn homology_dimensions(p: &DglPresentation, max_degree: u32, budget: Budget) -> Result<Vec<usize>> {
    require_d_squared(p, max_degree + 1)?;
    let elim = Elimination::with_budget(budget);
    let data: Vec<(usize, usize)> = (1..=max_degree + 1)
        .into_par_iter()
        .map(|n| {
            let m = differential_matrix(p, n);
            Ok((m.n_cols(), elim.rank(&m)?))
        })
        .collect::<Result<_>>()?;
    Ok((0..max_degree as usize)
        .map(|i| data[i].0 - data[i].1 - data[i + 1].1)
        .collect())
}

pub fn homology_dimension(p: &DglPresentation, degree: u32) -> Result<usize> {
    if degree == 0 {
        return Ok(0);
    }
    require_d_squared(p, degree + 1)?;
    let elim = Elimination::default();
    let m = differential_matrix(p, degree);
    let next = differential_matrix(p, degree + 1);
    Ok(m.n_cols() - elim.rank(&m)? - elim.rank(&next)?)
}

fn linear_matrix(p: &DglPresentation, degree: u32) -> SparseMatrix {
    let al = p.alphabet();
    let sources: Vec<_> = al.ids().filter(|&g| al.degree(g) == degree).collect();
    let targets: Vec<_> = al.ids().filter(|&g| al.degree(g) + 1 == degree).collect();
    let cols = sources
        .iter()
        .map(|&g| {
            let lin = p.differential(g).linear_part();
            targets
                .iter()
                .enumerate()
                .filter_map(|(i, t)| lin.get(t).map(|c| (i, c.clone())))
                .collect()
        })
        .collect();
    SparseMatrix::from_columns(targets.len(), cols)
}

/// Homology of the generators under the linear part of the differential.
pub fn indecomposables_homology(p: &DglPresentation, degree: u32) -> usize {
    let m = linear_matrix(p, degree);
    let next = linear_matrix(p, degree + 1);
    m.n_cols() - crate::linalg::rank(&m) - crate::linalg::rank(&next)
}
