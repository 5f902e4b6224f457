//! Free graded Lie algebras over Q with Koszul signs.
//!
//! Elements carry two views: the bracket expressions they were built from and
//! their canonical coordinates in the tensor algebra, obtained by expanding
//! `[x, y] = xy - (-1)^{|x||y|} yx`. The free Lie algebra embeds in its
//! tensor algebra, so the coordinates are a faithful normal form.

mod basis;
mod span;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg::Rational;

pub use basis::{
    is_lyndon, multidegree_basis, multidegree_component, spanning_set, spanning_set_with, standard_bracketing, SpanSpec,
};
pub(crate) use span::ideal_degree_rec;
pub use span::{
    ideal_span_in_degree, ideal_span_in_multidegree, member_by_rank, span_rank, subspace_matrix, WordIndex,
};

pub type GenId = u16;

/// A word in the tensor algebra, as generator indices.
pub type Word = SmallVec<[GenId; 8]>;

/// Canonical coordinates: word -> coefficient, no zero entries.
pub type Coords = BTreeMap<Word, Rational>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub filtration: Option<u32>,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self {
            name: name.into(),
            degree,
            filtration: None,
        }
    }

    pub fn filtered(name: impl Into<String>, degree: u32, filtration: u32) -> Self {
        Self {
            name: name.into(),
            degree,
            filtration: Some(filtration),
        }
    }
}

/// Ordered generating set. Declaration order is the total order used by the
/// Lyndon constructions.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    gens: Vec<Generator>,
    index: HashMap<String, GenId>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_generators(gens: impl IntoIterator<Item = Generator>) -> Result<Self> {
        let mut a = Self::new();
        for g in gens {
            a.push(g)?;
        }
        Ok(a)
    }

    pub fn push(&mut self, g: Generator) -> Result<GenId> {
        if g.degree == 0 {
            return Err(Error::InvalidGenerator {
                name: g.name,
                reason: "degree must be at least 1".into(),
            });
        }
        if g.filtration == Some(0) {
            return Err(Error::InvalidGenerator {
                name: g.name,
                reason: "filtration must be at least 1".into(),
            });
        }
        if self.index.contains_key(&g.name) {
            return Err(Error::DuplicateGenerator(g.name));
        }
        if self.gens.len() >= GenId::MAX as usize {
            return Err(Error::InvalidGenerator {
                name: g.name,
                reason: "alphabet is full".into(),
            });
        }
        let id = self.gens.len() as GenId;
        self.index.insert(g.name.clone(), id);
        self.gens.push(g);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, id: GenId) -> &Generator {
        &self.gens[id as usize]
    }

    pub fn set_filtration(&mut self, id: GenId, filtration: Option<u32>) {
        self.gens[id as usize].filtration = filtration;
    }

    pub fn id(&self, name: &str) -> Option<GenId> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<GenId> {
        self.id(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn degree(&self, id: GenId) -> u32 {
        self.gens[id as usize].degree
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        0..self.gens.len() as GenId
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    pub fn word_degree(&self, w: &[GenId]) -> u32 {
        w.iter().map(|&g| self.degree(g)).sum()
    }

    pub fn elem(&self, id: GenId) -> LieElement {
        LieElement::generator(id, self.degree(id))
    }

    /// Element for the generator called `name`.
    pub fn named(&self, name: &str) -> Result<LieElement> {
        Ok(self.elem(self.require(name)?))
    }

    pub fn tree_degree(&self, t: &BracketTree) -> u32 {
        match t {
            BracketTree::Leaf(g) => self.degree(*g),
            BracketTree::Node(l, r) => self.tree_degree(l) + self.tree_degree(r),
        }
    }

    pub fn word_string(&self, w: &[GenId]) -> String {
        w.iter()
            .map(|&g| self.get(g).name.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BracketTree {
    Leaf(GenId),
    Node(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    pub fn node(l: BracketTree, r: BracketTree) -> Self {
        BracketTree::Node(Box::new(l), Box::new(r))
    }

    /// Bracket length: the number of leaves.
    pub fn weight(&self) -> usize {
        match self {
            BracketTree::Leaf(_) => 1,
            BracketTree::Node(l, r) => l.weight() + r.weight(),
        }
    }

    pub fn leaves(&self) -> Vec<GenId> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<GenId>) {
        match self {
            BracketTree::Leaf(g) => out.push(*g),
            BracketTree::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn relabel(&self, map: &dyn Fn(GenId) -> GenId) -> Self {
        match self {
            BracketTree::Leaf(g) => BracketTree::Leaf(map(*g)),
            BracketTree::Node(l, r) => BracketTree::node(l.relabel(map), r.relabel(map)),
        }
    }

    /// Tensor-algebra expansion together with the degree of the tree.
    pub fn expand(&self, alphabet: &Alphabet) -> (u32, Coords) {
        match self {
            BracketTree::Leaf(g) => {
                let mut c = Coords::new();
                c.insert(SmallVec::from_slice(&[*g]), Rational::one());
                (alphabet.degree(*g), c)
            }
            BracketTree::Node(l, r) => {
                let (dl, cl) = l.expand(alphabet);
                let (dr, cr) = r.expand(alphabet);
                (dl + dr, commutator_coords(dl, &cl, dr, &cr))
            }
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> TreeDisplay<'a> {
        TreeDisplay { tree: self, alphabet }
    }
}

pub struct TreeDisplay<'a> {
    tree: &'a BracketTree,
    alphabet: &'a Alphabet,
}

impl fmt::Display for TreeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tree {
            BracketTree::Leaf(g) => write!(f, "{}", self.alphabet.get(*g).name),
            BracketTree::Node(l, r) => write!(f, "[{},{}]", l.display(self.alphabet), r.display(self.alphabet)),
        }
    }
}

pub(crate) fn koszul_sign(p: u32, q: u32) -> bool {
    // true when (-1)^{pq} = -1
    (p % 2 == 1) && (q % 2 == 1)
}

fn concat(a: &Word, b: &Word) -> Word {
    let mut w: Word = SmallVec::with_capacity(a.len() + b.len());
    w.extend_from_slice(a);
    w.extend_from_slice(b);
    w
}

pub(crate) fn add_into(target: &mut Coords, w: Word, c: Rational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match target.entry(w) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// `uv - (-1)^{|u||v|} vu` on coordinates.
pub(crate) fn commutator_coords(du: u32, u: &Coords, dv: u32, v: &Coords) -> Coords {
    let odd = koszul_sign(du, dv);
    let mut out = Coords::new();
    for (wu, cu) in u {
        for (wv, cv) in v {
            let c = cu * cv;
            add_into(&mut out, concat(wu, wv), c.clone());
            // - (-1)^{|u||v|} vu
            add_into(&mut out, concat(wv, wu), if odd { c } else { -c });
        }
    }
    out
}

/// Homogeneous element of a free graded Lie algebra.
#[derive(Clone, Debug)]
pub struct LieElement {
    degree: u32,
    terms: BTreeMap<BracketTree, Rational>,
    coords: Coords,
}

impl PartialEq for LieElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && (self.coords.is_empty() || self.degree == other.degree)
    }
}

impl Eq for LieElement {}

impl LieElement {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
            coords: Coords::new(),
        }
    }

    pub fn generator(id: GenId, degree: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(BracketTree::Leaf(id), Rational::one());
        let mut coords = Coords::new();
        coords.insert(SmallVec::from_slice(&[id]), Rational::one());
        Self { degree, terms, coords }
    }

    pub fn from_tree(alphabet: &Alphabet, tree: BracketTree) -> Self {
        let (degree, coords) = tree.expand(alphabet);
        let mut terms = BTreeMap::new();
        terms.insert(tree, Rational::one());
        Self { degree, terms, coords }
    }

    /// Linear combination of trees, all of degree `degree`.
    pub fn from_terms(
        alphabet: &Alphabet,
        degree: u32,
        terms: impl IntoIterator<Item = (BracketTree, Rational)>,
    ) -> Result<Self> {
        let mut out = Self::zero(degree);
        for (t, c) in terms {
            if c.is_zero() {
                continue;
            }
            let (d, coords) = t.expand(alphabet);
            if d != degree {
                return Err(Error::MixedDegrees(degree, d));
            }
            for (w, x) in coords {
                add_into(&mut out.coords, w, x * &c);
            }
            add_term(&mut out.terms, t, c);
        }
        Ok(out)
    }

    /// Assembles an element from parts that are already known to agree.
    pub(crate) fn from_parts(degree: u32, terms: BTreeMap<BracketTree, Rational>, coords: Coords) -> Self {
        Self { degree, terms, coords }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<BracketTree, Rational> {
        &self.terms
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    /// Coefficient of a single word.
    pub fn coord(&self, w: &[GenId]) -> Rational {
        self.coords.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    /// Every word has length at least two (equivalently, every term of a
    /// Lie-basis expansion has weight at least two).
    pub fn is_decomposable(&self) -> bool {
        self.coords.keys().all(|w| w.len() >= 2)
    }

    pub fn weights(&self) -> BTreeSet<usize> {
        self.coords.keys().map(|w| w.len()).collect()
    }

    /// Component of bracket length `weight`.
    pub fn weight_component(&self, weight: usize) -> Self {
        Self {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.weight() == weight)
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
            coords: self
                .coords
                .iter()
                .filter(|(w, _)| w.len() == weight)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Component of bracket length at least `weight`.
    pub fn weight_at_least(&self, weight: usize) -> Self {
        Self {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.weight() >= weight)
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
            coords: self
                .coords
                .iter()
                .filter(|(w, _)| w.len() >= weight)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of each generator in the linear part.
    pub fn linear_part(&self) -> BTreeMap<GenId, Rational> {
        self.coords
            .iter()
            .filter(|(w, _)| w.len() == 1)
            .map(|(w, c)| (w[0], c.clone()))
            .collect()
    }

    /// Generators occurring in the canonical coordinates.
    pub fn support(&self) -> BTreeSet<GenId> {
        self.coords.keys().flat_map(|w| w.iter().copied()).collect()
    }

    /// Membership in the sub Lie algebra generated by `allowed`: an element of
    /// L(V) lies in L(S) exactly when its tensor coordinates only use letters
    /// of S.
    pub fn lies_in(&self, allowed: &dyn Fn(GenId) -> bool) -> bool {
        self.coords.keys().all(|w| w.iter().all(|&g| allowed(g)))
    }

    /// Letter multiset of each word, when all words share one.
    pub fn multidegree(&self) -> Option<Vec<GenId>> {
        let mut it = self.coords.keys().map(|w| {
            let mut v: Vec<GenId> = w.to_vec();
            v.sort_unstable();
            v
        });
        let first = it.next()?;
        if it.all(|m| m == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Splits the element by letter multiset.
    pub fn multidegree_components(&self) -> BTreeMap<Vec<GenId>, LieElement> {
        let mut out: BTreeMap<Vec<GenId>, LieElement> = BTreeMap::new();
        for (t, c) in &self.terms {
            let mut m = t.leaves();
            m.sort_unstable();
            let e = out.entry(m).or_insert_with(|| Self::zero(self.degree));
            add_term(&mut e.terms, t.clone(), c.clone());
        }
        for (w, c) in &self.coords {
            let mut m = w.to_vec();
            m.sort_unstable();
            let e = out.entry(m).or_insert_with(|| Self::zero(self.degree));
            e.coords.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(t, x)| (t.clone(), x * c)).collect(),
            coords: self.coords.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    fn check_same_degree(&self, other: &Self) -> u32 {
        if self.is_zero() && self.terms.is_empty() {
            return other.degree;
        }
        if other.is_zero() && other.terms.is_empty() {
            return self.degree;
        }
        assert_eq!(self.degree, other.degree, "adding Lie elements of different degrees");
        self.degree
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &Self) {
        if c.is_zero() {
            return;
        }
        self.degree = self.check_same_degree(other);
        for (t, x) in &other.terms {
            add_term(&mut self.terms, t.clone(), x * c);
        }
        for (w, x) in &other.coords {
            add_into(&mut self.coords, w.clone(), x * c);
        }
    }

    /// Graded bracket `[self, other]`.
    pub fn bracket(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        if self.is_zero() || other.is_zero() {
            return Self::zero(degree);
        }
        let mut terms = BTreeMap::new();
        for (tl, cl) in &self.terms {
            for (tr, cr) in &other.terms {
                add_term(&mut terms, BracketTree::node(tl.clone(), tr.clone()), cl * cr);
            }
        }
        Self {
            degree,
            terms,
            coords: commutator_coords(self.degree, &self.coords, other.degree, &other.coords),
        }
    }

    /// Relabels generators (for embedding into a larger alphabet with the same
    /// degrees).
    pub fn relabel(&self, map: &dyn Fn(GenId) -> GenId) -> Self {
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(t, c)| (t.relabel(map), c.clone())).collect(),
            coords: self
                .coords
                .iter()
                .map(|(w, c)| (w.iter().map(|&g| map(g)).collect(), c.clone()))
                .collect(),
        }
    }

    /// Image under the Lie morphism sending generator `g` to `images(g)`.
    /// Images must preserve degrees.
    pub fn substitute(&self, images: &dyn Fn(GenId) -> LieElement) -> Self {
        let mut cache: HashMap<GenId, LieElement> = HashMap::new();
        let mut out = Self::zero(self.degree);
        for (t, c) in &self.terms {
            let v = eval_tree(t, images, &mut cache);
            out.add_scaled(c, &v);
        }
        out.degree = self.degree;
        out
    }

    /// Prints the bracket expressions as built; see `normalized` for a
    /// canonical expression.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> ElementDisplay<'a> {
        ElementDisplay { el: self, alphabet }
    }

    /// Re-expresses the element in the super-Lyndon basis, multidegree by
    /// multidegree. The result has the same coordinates and canonical terms.
    pub fn normalized(&self, alphabet: &Alphabet) -> Self {
        basis::normalize(self, alphabet)
    }
}

fn eval_tree(
    t: &BracketTree,
    images: &dyn Fn(GenId) -> LieElement,
    cache: &mut HashMap<GenId, LieElement>,
) -> LieElement {
    match t {
        BracketTree::Leaf(g) => cache.entry(*g).or_insert_with(|| images(*g)).clone(),
        BracketTree::Node(l, r) => {
            let a = eval_tree(l, images, cache);
            let b = eval_tree(r, images, cache);
            a.bracket(&b)
        }
    }
}

pub(crate) fn add_term(terms: &mut BTreeMap<BracketTree, Rational>, t: BracketTree, c: Rational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(t) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl Add for &LieElement {
    type Output = LieElement;
    fn add(self, rhs: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), rhs);
        out
    }
}

impl Sub for &LieElement {
    type Output = LieElement;
    fn sub(self, rhs: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), rhs);
        out
    }
}

impl Neg for &LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        self.scale(&-Rational::one())
    }
}

impl Mul<&LieElement> for &Rational {
    type Output = LieElement;
    fn mul(self, rhs: &LieElement) -> LieElement {
        rhs.scale(self)
    }
}

pub struct ElementDisplay<'a> {
    el: &'a LieElement,
    alphabet: &'a Alphabet,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.el.terms.iter().filter(|(_, c)| !c.is_zero()).collect();
        if terms.is_empty() || self.el.is_zero() {
            return write!(f, "0");
        }
        for (i, (t, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if !mag.is_one() {
                write!(f, "{} ", mag)?;
            }
            write!(f, "{}", t.display(self.alphabet))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn ab(da: u32, db: u32) -> Alphabet {
        Alphabet::from_generators([Generator::new("a", da), Generator::new("b", db)]).unwrap()
    }

    #[test]
    fn odd_self_bracket_is_nonzero() {
        let al = ab(3, 5);
        let a = al.elem(0);
        let aa = a.bracket(&a);
        let w: Word = SmallVec::from_slice(&[0, 0]);
        assert_eq!(aa.coords().len(), 1);
        assert_eq!(aa.coord(&w), rat(2));
    }

    #[test]
    fn even_self_bracket_vanishes() {
        let al = ab(2, 5);
        let a = al.elem(0);
        assert!(a.bracket(&a).is_zero());
    }

    #[test]
    fn odd_brackets_commute() {
        let al = ab(3, 11);
        let (a, c) = (al.elem(0), al.elem(1));
        assert_eq!(c.bracket(&a), a.bracket(&c));
    }

    #[test]
    fn jacobi_on_single_odd_generator() {
        let al = ab(3, 5);
        let a = al.elem(0);
        assert!(a.bracket(&a.bracket(&a)).is_zero());
    }

    #[test]
    fn display_and_degree() {
        let al = ab(3, 5);
        let (a, b) = (al.elem(0), al.elem(1));
        let x = &a.bracket(&a).bracket(&b) - &a.bracket(&a.bracket(&b));
        assert_eq!(x.degree(), 11);
        assert_eq!(format!("{}", x.display(&al)), "-[a,[a,b]] + [[a,a],b]");
        assert_eq!(format!("{}", x.normalized(&al).display(&al)), "[a,[a,b]]");
        let y = &a.bracket(&b).scale(&ratio(-3, 4)) + &b.bracket(&a);
        assert_eq!(format!("{}", y.display(&al)), "-3/4 [a,b] + [b,a]");
    }

    #[test]
    fn support_membership() {
        let al = ab(3, 5);
        let (a, b) = (al.elem(0), al.elem(1));
        let x = a.bracket(&b);
        assert!(x.lies_in(&|g| g <= 1));
        assert!(!x.lies_in(&|g| g == 0));
        assert!(a.bracket(&a).lies_in(&|g| g == 0));
    }
}
