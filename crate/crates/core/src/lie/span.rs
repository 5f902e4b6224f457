//! Spans of Lie elements as subspaces of tensor coordinates.

use std::collections::{BTreeMap, HashMap};

use super::{Alphabet, GenId, LieElement, Word};
use crate::linalg::{rank, Echelon, Inserted, Sparse, SparseMatrix, SparseVec};

/// Assigns row indices to words on first sight.
#[derive(Clone, Debug, Default)]
pub struct WordIndex {
    rows: HashMap<Word, usize>,
    words: Vec<Word>,
}

impl WordIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn index(&mut self, w: &Word) -> usize {
        if let Some(&i) = self.rows.get(w) {
            return i;
        }
        let i = self.words.len();
        self.rows.insert(w.clone(), i);
        self.words.push(w.clone());
        i
    }

    pub fn get(&self, w: &[GenId]) -> Option<usize> {
        self.rows.get(w).copied()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn into_words(self) -> Vec<Word> {
        self.words
    }

    /// Sparse column of `el`, registering new words.
    pub fn column(&mut self, el: &LieElement) -> SparseVec {
        let mut col: SparseVec = el.coords().iter().map(|(w, c)| (self.index(w), c.clone())).collect();
        col.sort_by_key(|(i, _)| *i);
        col
    }

    /// Column of `el` against the already registered words; `None` if `el`
    /// uses a word outside the index.
    pub fn column_within(&self, el: &LieElement) -> Option<SparseVec> {
        let mut col = Vec::with_capacity(el.coords().len());
        for (w, c) in el.coords() {
            col.push((self.get(w)?, c.clone()));
        }
        col.sort_by_key(|(i, _)| *i);
        Some(col)
    }
}

/// Coordinate matrix with one column per element, rows labelled by words.
pub fn subspace_matrix(elements: &[LieElement]) -> (SparseMatrix, Vec<Word>) {
    let mut idx = WordIndex::new();
    let cols: Vec<SparseVec> = elements.iter().map(|e| idx.column(e)).collect();
    let n = idx.len();
    (SparseMatrix::from_columns(n, cols), idx.into_words())
}

pub fn span_rank(elements: &[LieElement]) -> usize {
    rank(&subspace_matrix(elements).0)
}

/// Membership of `x` in the span of `spanning`, decided by comparing ranks.
pub fn member_by_rank(x: &LieElement, spanning: &[LieElement]) -> bool {
    let mut all = spanning.to_vec();
    let r = span_rank(&all);
    all.push(x.clone());
    span_rank(&all) == r
}

/// Collects independent elements, reducing each candidate against the ones
/// kept so far.
struct Collector {
    index: WordIndex,
    echelon: Echelon<Sparse>,
    kept: Vec<LieElement>,
}

impl Collector {
    fn new() -> Self {
        Self {
            index: WordIndex::new(),
            echelon: Echelon::new(false),
            kept: Vec::new(),
        }
    }

    fn offer(&mut self, el: LieElement) {
        if el.is_zero() {
            return;
        }
        let col = self.index.column(&el);
        if let Inserted::Pivot(_) = self.echelon.insert(Sparse(col), self.kept.len()) {
            self.kept.push(el);
        }
    }
}

/// Basis of the degree-`degree` part of the ideal generated by `gens`.
///
/// The ideal is spanned by iterated brackets `[x1,[x2,...,[xn, g]]]` with
/// generators `xi`, so each degree is obtained from lower ones.
pub fn ideal_span_in_degree(alphabet: &Alphabet, gens: &[LieElement], degree: u32) -> Vec<LieElement> {
    let mut memo: BTreeMap<u32, Vec<LieElement>> = BTreeMap::new();
    ideal_degree_rec(alphabet, gens, degree, &mut memo)
}

pub(crate) fn ideal_degree_rec(
    alphabet: &Alphabet,
    gens: &[LieElement],
    degree: u32,
    memo: &mut BTreeMap<u32, Vec<LieElement>>,
) -> Vec<LieElement> {
    if let Some(v) = memo.get(&degree) {
        return v.clone();
    }
    let mut col = Collector::new();
    for g in gens.iter().filter(|g| g.degree() == degree) {
        col.offer(g.clone());
    }
    let min_gen = gens.iter().map(|g| g.degree()).min().unwrap_or(u32::MAX);
    for x in alphabet.ids() {
        let dx = alphabet.degree(x);
        if dx >= degree || degree - dx < min_gen {
            continue;
        }
        let lower = ideal_degree_rec(alphabet, gens, degree - dx, memo);
        let xe = alphabet.elem(x);
        for e in &lower {
            col.offer(xe.bracket(e));
        }
    }
    memo.insert(degree, col.kept.clone());
    col.kept
}

/// Basis of the part of the ideal generated by multihomogeneous `gens` with
/// letter multiset `multiset`.
pub fn ideal_span_in_multidegree(alphabet: &Alphabet, gens: &[LieElement], multiset: &[GenId]) -> Vec<LieElement> {
    let mut target = multiset.to_vec();
    target.sort_unstable();
    let graded: Vec<(Vec<GenId>, &LieElement)> = gens.iter().filter_map(|g| g.multidegree().map(|m| (m, g))).collect();
    let mut memo: BTreeMap<Vec<GenId>, Vec<LieElement>> = BTreeMap::new();
    ideal_multi_rec(alphabet, &graded, target, &mut memo)
}

fn ideal_multi_rec(
    alphabet: &Alphabet,
    gens: &[(Vec<GenId>, &LieElement)],
    target: Vec<GenId>,
    memo: &mut BTreeMap<Vec<GenId>, Vec<LieElement>>,
) -> Vec<LieElement> {
    if let Some(v) = memo.get(&target) {
        return v.clone();
    }
    let mut col = Collector::new();
    for (m, g) in gens {
        if *m == target {
            col.offer((*g).clone());
        }
    }
    if target.len() > 1 {
        let mut letters = target.clone();
        letters.dedup();
        for x in letters {
            let mut rest = target.clone();
            let pos = rest.iter().position(|&g| g == x).unwrap();
            rest.remove(pos);
            let lower = ideal_multi_rec(alphabet, gens, rest, memo);
            let xe = alphabet.elem(x);
            for e in &lower {
                col.offer(xe.bracket(e));
            }
        }
    }
    memo.insert(target, col.kept.clone());
    col.kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{spanning_set, Generator};

    fn al() -> Alphabet {
        Alphabet::from_generators([Generator::new("a", 3), Generator::new("b", 5)]).unwrap()
    }

    #[test]
    fn rank_of_basis() {
        let al = al();
        for d in 1..=20 {
            let els: Vec<_> = spanning_set(&al, d, None)
                .into_iter()
                .map(|t| LieElement::from_tree(&al, t))
                .collect();
            assert_eq!(span_rank(&els), els.len(), "degree {d}");
        }
    }

    #[test]
    fn membership() {
        let al = al();
        let (a, b) = (al.elem(0), al.elem(1));
        let ab = a.bracket(&b);
        assert!(member_by_rank(
            &ab.scale(&crate::linalg::rat(3)),
            std::slice::from_ref(&ab)
        ));
        // [[a,a],b] = 2[a,[a,b]]
        assert!(member_by_rank(&a.bracket(&a).bracket(&b), &[a.bracket(&ab)]));
        assert!(!member_by_rank(&b.bracket(&ab), &[a.bracket(&ab)]));
    }

    #[test]
    fn ideal_of_a_generator() {
        let al = al();
        let b = al.elem(1);
        // degree 11 of the ideal (b): [a,[a,b]] and [b,[a,a]]-type brackets
        let deg11 = ideal_span_in_degree(&al, std::slice::from_ref(&b), 11);
        let all = spanning_set(&al, 11, None);
        let with_b = all.iter().filter(|t| t.leaves().contains(&1)).count();
        assert_eq!(deg11.len(), with_b);
        let multi = ideal_span_in_multidegree(&al, &[b], &[0, 0, 1]);
        assert_eq!(multi.len(), deg11.len());
    }
}
