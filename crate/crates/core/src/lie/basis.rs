//! Super-Lyndon bases of free graded Lie algebras.
//!
//! A basis of the degree-d component is given by the standard bracketings of
//! the Lyndon words of degree d, together with `[u,u]` for every Lyndon word
//! `u` of odd degree d/2. Generators are ordered by declaration.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Alphabet, BracketTree, GenId, LieElement, Word};
use crate::error::{Error, Result};
use crate::linalg::{solve, Rational, SparseMatrix};

/// `w` is strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &[GenId]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard bracketing: `w = uv` with `v` the smallest proper suffix.
pub fn standard_bracketing(w: &[GenId]) -> BracketTree {
    debug_assert!(!w.is_empty());
    if w.len() == 1 {
        return BracketTree::Leaf(w[0]);
    }
    let split = (1..w.len()).min_by(|&i, &j| w[i..].cmp(&w[j..])).unwrap();
    BracketTree::node(standard_bracketing(&w[..split]), standard_bracketing(&w[split..]))
}

/// Which part of a degree component to enumerate.
#[derive(Clone, Debug, Default)]
pub struct SpanSpec {
    /// Restrict to the sub Lie algebra on these generators.
    pub letters: Option<Vec<GenId>>,
    pub min_weight: Option<usize>,
    pub max_weight: Option<usize>,
}

impl SpanSpec {
    pub fn weight(w: usize) -> Self {
        Self {
            letters: None,
            min_weight: Some(w),
            max_weight: Some(w),
        }
    }

    pub fn with_letters(mut self, letters: Vec<GenId>) -> Self {
        self.letters = Some(letters);
        self
    }

    fn admits(&self, weight: usize) -> bool {
        self.min_weight.is_none_or(|m| weight >= m) && self.max_weight.is_none_or(|m| weight <= m)
    }
}

/// Lyndon words of exact degree `degree` over `letters` (sorted), with length
/// at most `max_len`.
fn lyndon_words(alphabet: &Alphabet, letters: &[GenId], degree: u32, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut w: Word = Word::new();
    for (i, &first) in letters.iter().enumerate() {
        let d = alphabet.degree(first);
        if d > degree {
            continue;
        }
        w.push(first);
        extend_words(alphabet, &letters[i..], degree - d, max_len, &mut w, &mut out);
        w.pop();
    }
    out
}

fn extend_words(
    alphabet: &Alphabet,
    letters: &[GenId],
    remaining: u32,
    max_len: usize,
    w: &mut Word,
    out: &mut Vec<Word>,
) {
    if remaining == 0 {
        if is_lyndon(w) {
            out.push(w.clone());
        }
        return;
    }
    if w.len() >= max_len {
        return;
    }
    // A Lyndon word starts with its smallest letter, so later letters are
    // drawn from `letters` (which starts at the first letter).
    for &g in letters {
        let d = alphabet.degree(g);
        if d > remaining {
            continue;
        }
        w.push(g);
        if prefix_can_be_lyndon(w) {
            extend_words(alphabet, letters, remaining - d, max_len, w, out);
        }
        w.pop();
    }
}

/// Prefixes of Lyndon words are pre-necklaces: `w[i] >= w[i - p]` at the
/// Duval period `p`. A strict drop rules the prefix out.
fn prefix_can_be_lyndon(w: &[GenId]) -> bool {
    let mut p = 1;
    for i in 1..w.len() {
        match w[i].cmp(&w[i - p]) {
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Greater => p = i + 1,
            std::cmp::Ordering::Equal => {}
        }
    }
    true
}

fn sorted_letters(alphabet: &Alphabet, spec: &SpanSpec) -> Vec<GenId> {
    let mut letters: Vec<GenId> = match &spec.letters {
        Some(l) => l.clone(),
        None => alphabet.ids().collect(),
    };
    letters.sort_unstable();
    letters.dedup();
    letters
}

/// Linearly independent spanning set of the degree component, optionally
/// restricted (see `SpanSpec`). Ordered by weight, then by word.
pub fn spanning_set_with(alphabet: &Alphabet, degree: u32, spec: &SpanSpec) -> Vec<BracketTree> {
    if degree == 0 {
        return Vec::new();
    }
    let letters = sorted_letters(alphabet, spec);
    let max_len = spec.max_weight.unwrap_or(usize::MAX);
    let mut keyed: Vec<(usize, Word, BracketTree)> = lyndon_words(alphabet, &letters, degree, max_len)
        .into_iter()
        .filter(|w| spec.admits(w.len()))
        .map(|w| {
            let t = standard_bracketing(&w);
            (w.len(), w, t)
        })
        .collect();
    if degree.is_multiple_of(2) && (degree / 2) % 2 == 1 {
        let half_max = max_len / 2;
        for u in lyndon_words(alphabet, &letters, degree / 2, half_max.max(1)) {
            if !spec.admits(2 * u.len()) {
                continue;
            }
            let t = standard_bracketing(&u);
            let mut uu = u.clone();
            uu.extend_from_slice(&u);
            keyed.push((2 * u.len(), uu, BracketTree::node(t.clone(), t)));
        }
    }
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    keyed.into_iter().map(|(_, _, t)| t).collect()
}

/// Spanning set of the whole degree component, up to `max_weight`.
pub fn spanning_set(alphabet: &Alphabet, degree: u32, max_weight: Option<usize>) -> Vec<BracketTree> {
    spanning_set_with(
        alphabet,
        degree,
        &SpanSpec {
            letters: None,
            min_weight: None,
            max_weight,
        },
    )
}

/// Basis of the multilinear component on distinct letters: the right-normed
/// brackets `[t_s1,[t_s2,[...,[t_s(n-1), t_0]]]]` over all orderings of the
/// remaining letters.
pub fn multidegree_component(alphabet: &Alphabet, letters: &[GenId]) -> Result<Vec<BracketTree>> {
    let mut seen = std::collections::HashSet::new();
    for &g in letters {
        if !seen.insert(g) {
            return Err(Error::DuplicateLetter(alphabet.get(g).name.clone()));
        }
    }
    let Some((&anchor, rest)) = letters.split_first() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let mut perm: Vec<GenId> = rest.to_vec();
    permutations(&mut perm, 0, &mut |p| {
        let mut t = BracketTree::Leaf(anchor);
        for &g in p.iter().rev() {
            t = BracketTree::node(BracketTree::Leaf(g), t);
        }
        out.push(t);
    });
    Ok(out)
}

fn permutations(v: &mut Vec<GenId>, k: usize, f: &mut dyn FnMut(&[GenId])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v[k..=i].rotate_right(1);
        permutations(v, k + 1, f);
        v[k..=i].rotate_left(1);
    }
}

/// Distinct arrangements of a multiset, in lexicographic order.
fn multiset_words(counts: &mut BTreeMap<GenId, usize>, len: usize, w: &mut Word, out: &mut Vec<Word>) {
    if w.len() == len {
        out.push(w.clone());
        return;
    }
    let keys: Vec<GenId> = counts.iter().filter(|(_, &c)| c > 0).map(|(&g, _)| g).collect();
    for g in keys {
        *counts.get_mut(&g).unwrap() -= 1;
        w.push(g);
        if prefix_can_be_lyndon(w) {
            multiset_words(counts, len, w, out);
        }
        w.pop();
        *counts.get_mut(&g).unwrap() += 1;
    }
}

fn lyndon_words_of_multiset(multiset: &[GenId]) -> Vec<Word> {
    let mut counts = BTreeMap::new();
    for &g in multiset {
        *counts.entry(g).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    multiset_words(&mut counts, multiset.len(), &mut Word::new(), &mut out);
    out.retain(|w| is_lyndon(w));
    out
}

/// Super-Lyndon basis of the component with the given letter multiset.
pub fn multidegree_basis(alphabet: &Alphabet, multiset: &[GenId]) -> Vec<BracketTree> {
    let mut ms = multiset.to_vec();
    ms.sort_unstable();
    let mut out: Vec<BracketTree> = lyndon_words_of_multiset(&ms)
        .iter()
        .map(|w| standard_bracketing(w))
        .collect();
    // squares [u,u] of odd Lyndon words on half the multiset
    if !ms.is_empty() && ms.len().is_multiple_of(2) {
        let mut half = Vec::new();
        let mut ok = true;
        let mut i = 0;
        while i < ms.len() {
            if i + 1 < ms.len() && ms[i] == ms[i + 1] {
                half.push(ms[i]);
                i += 2;
            } else {
                ok = false;
                break;
            }
        }
        if ok && alphabet.word_degree(&half) % 2 == 1 {
            for u in lyndon_words_of_multiset(&half) {
                let t = standard_bracketing(&u);
                out.push(BracketTree::node(t.clone(), t));
            }
        }
    }
    out
}

pub(super) fn normalize(el: &LieElement, alphabet: &Alphabet) -> LieElement {
    let mut groups: BTreeMap<Vec<GenId>, Vec<(&Word, &Rational)>> = BTreeMap::new();
    for (w, c) in el.coords() {
        let mut m = w.to_vec();
        m.sort_unstable();
        groups.entry(m).or_default().push((w, c));
    }
    let mut terms = Vec::new();
    for (ms, entries) in groups {
        let basis = multidegree_basis(alphabet, &ms);
        let expanded: Vec<_> = basis.iter().map(|t| t.expand(alphabet).1).collect();
        let mut rows: BTreeMap<Word, usize> = BTreeMap::new();
        for c in &expanded {
            for w in c.keys() {
                let n = rows.len();
                rows.entry(w.clone()).or_insert(n);
            }
        }
        for (w, _) in &entries {
            let n = rows.len();
            rows.entry((*w).clone()).or_insert(n);
        }
        let cols = expanded
            .iter()
            .map(|c| c.iter().map(|(w, x)| (rows[w], x.clone())).collect())
            .collect();
        let m = SparseMatrix::from_columns(rows.len(), cols);
        let mut b = vec![Rational::zero(); rows.len()];
        for (w, c) in entries {
            b[rows[w]] = c.clone();
        }
        let x = solve(&m, &b)
            .expect("dimensions agree")
            .expect("canonical coordinates of a Lie element lie in the Lie span");
        for (t, c) in basis.into_iter().zip(x) {
            if !c.is_zero() {
                terms.push((t, c));
            }
        }
    }
    LieElement::from_terms(alphabet, el.degree(), terms).expect("basis trees share the degree")
}
