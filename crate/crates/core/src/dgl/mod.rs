//! Free differential graded Lie algebras given by generators and the
//! differentials of the generators.

mod certify;
mod homology;
mod minimal;
mod quotient;
pub mod random;

use std::collections::{BTreeMap, HashMap};

use serde_json::json;

use crate::certificate::{Certificate, Kind, Status};
use crate::error::{Error, Result};
use crate::format::print_dgl;
use crate::lie::{add_into, add_term, Alphabet, BracketTree, Coords, GenId, Generator, LieElement, Word};
use crate::linalg::Rational;

pub use certify::{
    boundary_certificate, decomposition_certificate, minimalize_certificate, recheck, substitution_certificate,
};
pub use homology::{
    boundary_system, homology_dimension, homology_dimensions, indecomposables_homology, solve_boundary, BoundarySystem,
    SearchSpace,
};
pub use minimal::{minimalize, quadratic_part, Minimalized};
pub use quotient::{ideal_contains, quotient_by_differential_ideal, QuotientComplex};

/// A free dgl `(L(V), d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DglPresentation {
    alphabet: Alphabet,
    differential: Vec<LieElement>,
}

impl DglPresentation {
    /// All differentials zero.
    pub fn new(alphabet: Alphabet) -> Self {
        let differential = alphabet
            .generators()
            .iter()
            .map(|g| LieElement::zero(g.degree.saturating_sub(1)))
            .collect();
        Self { alphabet, differential }
    }

    pub fn from_differentials(alphabet: Alphabet, differential: Vec<LieElement>) -> Result<Self> {
        if differential.len() != alphabet.len() {
            return Err(Error::DimensionMismatch {
                expected: alphabet.len(),
                got: differential.len(),
            });
        }
        let mut p = Self::new(alphabet);
        for (id, d) in differential.into_iter().enumerate() {
            p.set_differential(id as GenId, d)?;
        }
        Ok(p)
    }

    pub fn set_differential(&mut self, id: GenId, d: LieElement) -> Result<()> {
        let g = self.alphabet.get(id);
        let expected = g.degree.saturating_sub(1);
        if !d.is_zero() && d.degree() != expected {
            return Err(Error::DegreeMismatch {
                name: g.name.clone(),
                expected,
                got: d.degree(),
            });
        }
        let n = self.alphabet.len();
        if d.support().iter().any(|&x| x as usize >= n) {
            return Err(Error::UnknownGenerator(format!("letter in d({})", g.name)));
        }
        self.differential[id as usize] = if d.is_zero() { LieElement::zero(expected) } else { d };
        Ok(())
    }

    /// Adds a generator with the given differential.
    pub fn add_generator(&mut self, g: Generator, d: LieElement) -> Result<GenId> {
        let expected = g.degree.saturating_sub(1);
        if !d.is_zero() && d.degree() != expected {
            return Err(Error::DegreeMismatch {
                name: g.name,
                expected,
                got: d.degree(),
            });
        }
        if d.support().iter().any(|&x| x as usize > self.len()) {
            return Err(Error::UnknownGenerator(format!("letter in d({})", g.name)));
        }
        let id = self.alphabet.push(g)?;
        self.differential.push(LieElement::zero(expected));
        self.set_differential(id, d)?;
        Ok(id)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub fn differential(&self, id: GenId) -> &LieElement {
        &self.differential[id as usize]
    }

    pub fn differentials(&self) -> &[LieElement] {
        &self.differential
    }

    pub fn differential_of(&self, name: &str) -> Result<&LieElement> {
        Ok(self.differential(self.alphabet.require(name)?))
    }

    /// Every differential is decomposable.
    pub fn is_minimal(&self) -> bool {
        self.differential.iter().all(|d| d.is_decomposable())
    }

    /// Every differential is a sum of brackets of length two.
    pub fn is_quadratic(&self) -> bool {
        self.differential
            .iter()
            .all(|d| d.coords().keys().all(|w| w.len() == 2))
    }

    /// The filtration recorded on the generators, if every generator has one.
    pub fn filtration(&self) -> Option<FiltrationAssignment> {
        let stages: Option<Vec<u32>> = self.alphabet.generators().iter().map(|g| g.filtration).collect();
        stages.map(|s| FiltrationAssignment { stages: s })
    }

    pub fn with_filtration(&self, f: &FiltrationAssignment) -> Result<Self> {
        if f.stages.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: f.stages.len(),
            });
        }
        let mut out = self.clone();
        for id in self.alphabet.ids() {
            out.alphabet.set_filtration(id, Some(f.stage(id)));
        }
        Ok(out)
    }

    pub fn without_filtration(&self) -> Self {
        let mut out = self.clone();
        for id in self.alphabet.ids() {
            out.alphabet.set_filtration(id, None);
        }
        out
    }

    /// `d` extended to the whole algebra as a derivation.
    pub fn d(&self, e: &LieElement) -> LieElement {
        extend_derivation(self, e)
    }

    /// Canonical coordinates of `d(e)`, from the coordinates of `e`.
    pub fn d_coords(&self, coords: &Coords) -> Coords {
        let mut out = Coords::new();
        for (w, c) in coords {
            let mut prefix_degree = 0u32;
            for (i, &g) in w.iter().enumerate() {
                let dg = self.differential(g);
                if !dg.is_zero() {
                    let c = if prefix_degree % 2 == 1 { -c.clone() } else { c.clone() };
                    for (u, x) in dg.coords() {
                        let mut nw: Word = Word::with_capacity(w.len() + u.len() - 1);
                        nw.extend_from_slice(&w[..i]);
                        nw.extend_from_slice(u);
                        nw.extend_from_slice(&w[i + 1..]);
                        add_into(&mut out, nw, &c * x);
                    }
                }
                prefix_degree += self.alphabet.degree(g);
            }
        }
        out
    }

    fn d_tree(
        &self,
        t: &BracketTree,
        memo: &mut HashMap<BracketTree, Vec<(BracketTree, Rational)>>,
    ) -> Vec<(BracketTree, Rational)> {
        if let Some(v) = memo.get(t) {
            return v.clone();
        }
        let out = match t {
            BracketTree::Leaf(g) => self
                .differential(*g)
                .terms()
                .iter()
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
            BracketTree::Node(l, r) => {
                let mut out = Vec::new();
                for (x, c) in self.d_tree(l, memo) {
                    out.push((BracketTree::node(x, (**r).clone()), c));
                }
                let odd = self.alphabet.tree_degree(l) % 2 == 1;
                for (y, c) in self.d_tree(r, memo) {
                    out.push((BracketTree::node((**l).clone(), y), if odd { -c } else { c }));
                }
                out
            }
        };
        memo.insert(t.clone(), out.clone());
        out
    }

    /// Renames every generator by appending a prime.
    pub fn primed(&self) -> Self {
        let mut out = self.clone();
        out.alphabet = Alphabet::from_generators(self.alphabet.generators().iter().map(|g| Generator {
            name: format!("{}'", g.name),
            ..g.clone()
        }))
        .expect("priming keeps names distinct");
        out
    }

    /// Free product: generators of `other` are appended and relabelled.
    pub fn coproduct(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        let shift = self.len() as GenId;
        for g in other.alphabet.generators() {
            out.alphabet.push(g.clone())?;
        }
        for d in &other.differential {
            out.differential.push(d.relabel(&|x| x + shift));
        }
        Ok(out)
    }

    /// The same dgl with generators listed in `order` (a permutation of the
    /// current ids). Returns the presentation and the map old id -> new id.
    pub fn reordered(&self, order: &[GenId]) -> Result<(Self, Vec<GenId>)> {
        let n = self.len();
        let mut new_of_old = vec![GenId::MAX; n];
        for (new, &old) in order.iter().enumerate() {
            if old as usize >= n || new_of_old[old as usize] != GenId::MAX {
                return Err(Error::InvalidParameter("order is not a permutation".into()));
            }
            new_of_old[old as usize] = new as GenId;
        }
        if order.len() != n {
            return Err(Error::InvalidParameter("order is not a permutation".into()));
        }
        let alphabet = Alphabet::from_generators(order.iter().map(|&o| self.alphabet.get(o).clone()))?;
        let differential = order
            .iter()
            .map(|&o| self.differential(o).relabel(&|x| new_of_old[x as usize]))
            .collect();
        Ok((Self { alphabet, differential }, new_of_old))
    }
}

/// `d(e)` by the derivation rule `d[x,y] = [dx,y] + (-1)^{|x|}[x,dy]`.
pub fn extend_derivation(p: &DglPresentation, e: &LieElement) -> LieElement {
    let degree = e.degree().saturating_sub(1);
    if e.is_zero() {
        return LieElement::zero(degree);
    }
    let mut memo = HashMap::new();
    let mut terms = BTreeMap::new();
    for (t, c) in e.terms() {
        for (x, y) in p.d_tree(t, &mut memo) {
            add_term(&mut terms, x, y * c);
        }
    }
    let coords = p.d_coords(e.coords());
    LieElement::from_parts(degree, terms, coords)
}

/// First generator (in order) of degree at most `cap` with `d(d g) != 0`.
pub fn d_squared_failure(p: &DglPresentation, cap: u32) -> Option<GenId> {
    p.alphabet
        .ids()
        .find(|&g| p.alphabet.degree(g) <= cap && !p.d_coords(p.differential(g).coords()).is_empty())
}

/// Certificate that `d(d g) = 0` for every generator of degree at most `cap`.
pub fn check_d_squared(p: &DglPresentation, cap: u32) -> Certificate {
    let failure = d_squared_failure(p, cap);
    let checked = p.alphabet.ids().filter(|&g| p.alphabet.degree(g) <= cap).count();
    let mut cert = Certificate::new(Kind::DSquared, None, p.alphabet());
    cert.status = if failure.is_none() { Status::Pass } else { Status::Fail };
    cert.witness("presentation", json!(print_dgl(p)));
    if let Some(g) = failure {
        let al = p.alphabet();
        let dd = p.d(p.differential(g));
        cert.witness("first_failure", json!(al.get(g).name));
        cert.witness("dd", json!(dd.normalized(al).display(al).to_string()));
    }
    cert.dimension("degree_cap", cap as u64);
    cert.dimension("generators_checked", checked as u64);
    cert.seal();
    cert
}

/// Ensures `d^2 = 0` on generators up to `cap`.
pub(crate) fn require_d_squared(p: &DglPresentation, cap: u32) -> Result<()> {
    match d_squared_failure(p, cap) {
        None => Ok(()),
        Some(g) => Err(Error::Unverified(p.alphabet.get(g).name.clone())),
    }
}

/// Filtered degrees of the generators of a presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationAssignment {
    stages: Vec<u32>,
}

impl FiltrationAssignment {
    pub fn new(stages: Vec<u32>) -> Result<Self> {
        if let Some(i) = stages.iter().position(|&s| s == 0) {
            return Err(Error::InvalidParameter(format!("generator {i} has filtration 0")));
        }
        Ok(Self { stages })
    }

    pub fn from_named(alphabet: &Alphabet, named: &BTreeMap<String, u32>) -> Result<Self> {
        let mut stages = Vec::with_capacity(alphabet.len());
        for g in alphabet.generators() {
            stages.push(
                *named
                    .get(&g.name)
                    .ok_or_else(|| Error::MissingFiltration(g.name.clone()))?,
            );
        }
        Self::new(stages)
    }

    pub fn stage(&self, id: GenId) -> u32 {
        self.stages[id as usize]
    }

    pub fn stages(&self) -> &[u32] {
        &self.stages
    }

    /// The largest filtered degree; 0 when there are no generators.
    pub fn length(&self) -> u32 {
        self.stages.iter().copied().max().unwrap_or(0)
    }

    pub fn generators_at(&self, stage: u32) -> Vec<GenId> {
        (0..self.stages.len() as GenId)
            .filter(|&g| self.stage(g) == stage)
            .collect()
    }

    pub fn to_named(&self, alphabet: &Alphabet) -> BTreeMap<String, u32> {
        alphabet
            .generators()
            .iter()
            .zip(&self.stages)
            .map(|(g, &s)| (g.name.clone(), s))
            .collect()
    }
}

/// Checks the decomposition condition `d V_(i) ⊂ L(V_(<i))`; stage-one
/// generators must be cycles.
pub fn verify_filtration(p: &DglPresentation, f: &FiltrationAssignment) -> Result<()> {
    if f.stages.len() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: f.stages.len(),
        });
    }
    for g in p.alphabet.ids() {
        let s = f.stage(g);
        if !p.differential(g).lies_in(&|x| f.stage(x) < s) {
            return Err(Error::VerificationFailed(format!(
                "d({}) is not in the subalgebra of filtration < {}",
                p.alphabet.get(g).name,
                s
            )));
        }
    }
    Ok(())
}

/// Greedy decomposition: stage 1 for cycles, then stage i for every generator
/// whose differential lies in the subalgebra on the generators placed so far.
/// `None` if some generator can never be placed.
pub fn infer_decomposition(p: &DglPresentation) -> Option<FiltrationAssignment> {
    let n = p.len();
    let mut stages = vec![0u32; n];
    let mut placed = 0;
    let mut stage = 1;
    while placed < n {
        let round: Vec<usize> = (0..n)
            .filter(|&g| {
                stages[g] == 0
                    && p.differential(g as GenId)
                        .lies_in(&|x| stages[x as usize] != 0 && stages[x as usize] < stage)
            })
            .collect();
        if round.is_empty() {
            return None;
        }
        for &g in &round {
            stages[g] = stage;
        }
        placed += round.len();
        stage += 1;
    }
    Some(FiltrationAssignment { stages })
}

/// Inverse of a triangular substitution `g -> g + c_g`: the images of the old
/// generators in terms of the new ones.
pub fn inverse_substitution(
    p: &DglPresentation,
    subst: &BTreeMap<GenId, LieElement>,
) -> Result<BTreeMap<GenId, LieElement>> {
    let al = &p.alphabet;
    let mut corrections: BTreeMap<GenId, LieElement> = BTreeMap::new();
    for (&g, img) in subst {
        if g as usize >= p.len() {
            return Err(Error::UnknownGenerator(format!("#{g}")));
        }
        let name = &al.get(g).name;
        if img.degree() != al.degree(g) && !img.is_zero() {
            return Err(Error::DegreeMismatch {
                name: name.clone(),
                expected: al.degree(g),
                got: img.degree(),
            });
        }
        let corr = img - &al.elem(g);
        if corr.support().contains(&g) {
            return Err(Error::NonInvertible(format!(
                "the correction of `{name}` involves `{name}`"
            )));
        }
        corrections.insert(g, corr);
    }
    // psi(g) = g - psi(c_g), resolved in dependency order
    let mut inverse: BTreeMap<GenId, LieElement> = BTreeMap::new();
    let mut visiting = vec![false; p.len()];
    fn resolve(
        g: GenId,
        al: &Alphabet,
        corrections: &BTreeMap<GenId, LieElement>,
        inverse: &mut BTreeMap<GenId, LieElement>,
        visiting: &mut Vec<bool>,
    ) -> Result<()> {
        if inverse.contains_key(&g) {
            return Ok(());
        }
        let Some(corr) = corrections.get(&g) else {
            return Ok(());
        };
        if visiting[g as usize] {
            return Err(Error::NonInvertible(format!(
                "cyclic dependency through `{}`",
                al.get(g).name
            )));
        }
        visiting[g as usize] = true;
        for x in corr.support() {
            resolve(x, al, corrections, inverse, visiting)?;
        }
        let image = |x: GenId| inverse.get(&x).cloned().unwrap_or_else(|| al.elem(x));
        let inv = &al.elem(g) - &corr.substitute(&image);
        visiting[g as usize] = false;
        inverse.insert(g, inv);
        Ok(())
    }
    for &g in corrections.keys() {
        resolve(g, al, &corrections, &mut inverse, &mut visiting)?;
    }
    Ok(inverse)
}

fn apply_map(al: &Alphabet, map: &BTreeMap<GenId, LieElement>, e: &LieElement) -> LieElement {
    e.substitute(&|x| map.get(&x).cloned().unwrap_or_else(|| al.elem(x)))
}

/// Change of generators `g -> subst(g)`: each listed generator is replaced by
/// the given element, which must be the generator plus a correction not
/// involving it, with no cyclic dependencies between corrections. The result
/// expresses the same dgl on the new generators, which keep the old names.
/// Filtration annotations are dropped.
pub fn substitute_generators(p: &DglPresentation, subst: &BTreeMap<GenId, LieElement>) -> Result<DglPresentation> {
    let inverse = inverse_substitution(p, subst)?;
    let al = &p.alphabet;
    let mut out = p.without_filtration();
    for g in al.ids() {
        let image = subst.get(&g).cloned().unwrap_or_else(|| al.elem(g));
        let d_old = p.d(&image);
        let d_new = apply_map(al, &inverse, &d_old).normalized(al);
        out.set_differential(g, d_new)?;
    }
    // back-substitution recovers the original differential
    let forward: BTreeMap<GenId, LieElement> = subst.clone();
    for g in al.ids() {
        let back_image = inverse.get(&g).cloned().unwrap_or_else(|| al.elem(g));
        let d_back = apply_map(al, &forward, &out.d(&back_image));
        if &d_back != p.differential(g) {
            return Err(Error::VerificationFailed(format!(
                "inverse substitution does not restore d({})",
                al.get(g).name
            )));
        }
    }
    Ok(out)
}

/// Helper for building substitution maps by name.
pub fn substitution_by_name(p: &DglPresentation, named: &[(&str, LieElement)]) -> Result<BTreeMap<GenId, LieElement>> {
    named
        .iter()
        .map(|(n, e)| Ok((p.alphabet.require(n)?, e.clone())))
        .collect()
}
