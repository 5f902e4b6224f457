//! Minimal models by splitting off contractible pieces.
//!
//! In each degree the generators split as `W = K ⊕ R ⊕ B` with `B = d1(R)`
//! the image of the linear part `d1` and `K ⊕ B = ker d1`. The generating
//! set `K ∪ R ∪ d(R)` is again free, so the ideal `J` generated by `R` and
//! `d(R)` is contractible and `L(W) -> L(W)/J ≅ L(K)` is a quasi-isomorphism
//! onto a minimal dgl. Generators are ordered by decreasing filtration, so
//! each vector of `K` has the filtration of its leading generator.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_traits::Zero;

use super::{require_d_squared, verify_filtration, DglPresentation, FiltrationAssignment};
use crate::error::{Error, Result};
use crate::lie::{Alphabet, GenId, Generator, LieElement};
use crate::linalg::{kernel_basis, unit, Echelon, Inserted, Sparse, SparseMatrix, SparseVec};

/// Result of `minimalize`.
#[derive(Clone, Debug)]
pub struct Minimalized {
    pub presentation: DglPresentation,
    /// Filtration of the new generators, when the input was filtered.
    pub filtration: Option<FiltrationAssignment>,
    /// Image of every input generator under the quotient map.
    pub projection: Vec<LieElement>,
    /// Length of the input filtration, when present.
    pub input_length: Option<u32>,
}

impl Minimalized {
    /// The quotient map commutes with the differentials on every input
    /// generator.
    pub fn check_chain_map(&self, input: &DglPresentation) -> Result<()> {
        let al = input.alphabet();
        for g in al.ids() {
            let lhs = input
                .differential(g)
                .substitute(&|x| self.projection[x as usize].clone());
            let rhs = self.presentation.d(&self.projection[g as usize]);
            if lhs != rhs {
                return Err(Error::VerificationFailed(format!(
                    "projection does not commute with d on `{}`",
                    al.get(g).name
                )));
            }
        }
        Ok(())
    }

    /// The quadratic part of the new differential respects the new filtration
    /// (a decomposition of length at most the input length), and every new
    /// differential lies in the subalgebra on generators of filtration below
    /// the input length.
    pub fn check_filtration_properties(&self) -> Result<()> {
        let (Some(f), Some(k)) = (&self.filtration, self.input_length) else {
            return Err(Error::MissingFiltration("input".into()));
        };
        let quad = quadratic_part(&self.presentation);
        verify_filtration(&quad, f)?;
        if f.length() > k {
            return Err(Error::VerificationFailed(format!(
                "quadratic part has length {} > {k}",
                f.length()
            )));
        }
        let al = self.presentation.alphabet();
        for g in al.ids() {
            if !self.presentation.differential(g).lies_in(&|x| f.stage(x) < k) {
                return Err(Error::VerificationFailed(format!(
                    "d({}) leaves the subalgebra of filtration < {k}",
                    al.get(g).name
                )));
            }
        }
        Ok(())
    }
}

/// The dgl with only the bracket-length-two part of each differential.
pub fn quadratic_part(p: &DglPresentation) -> DglPresentation {
    let mut out = p.clone();
    for g in p.alphabet().ids() {
        out.set_differential(g, p.differential(g).weight_component(2))
            .expect("same degree");
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Part {
    Boundary,
    Kernel,
    Complement,
}

/// Splitting of one degree.
struct Split {
    /// Generators of this degree, by decreasing filtration.
    order: Vec<GenId>,
    /// Basis vectors (coordinates along `order`) and their kinds.
    vectors: Vec<(Part, SparseVec)>,
    /// Rows of the complement unit vectors.
    complement_rows: Vec<usize>,
}

fn linear_columns(p: &DglPresentation, sources: &[GenId], targets: &[GenId]) -> Vec<SparseVec> {
    let row: BTreeMap<GenId, usize> = targets.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    sources
        .iter()
        .map(|&g| {
            let mut col: SparseVec = p
                .differential(g)
                .linear_part()
                .into_iter()
                .map(|(x, c)| (row[&x], c))
                .collect();
            col.sort_by_key(|(i, _)| *i);
            col
        })
        .collect()
}

fn split_degree(p: &DglPresentation, order: &[GenId], below: &[GenId], above: &[GenId]) -> Split {
    let mut ech: Echelon<Sparse> = Echelon::new(false);
    let mut vectors = Vec::new();
    let mut pivots = vec![false; order.len()];
    let mut push = |ech: &mut Echelon<Sparse>, part: Part, v: SparseVec, vectors: &mut Vec<(Part, SparseVec)>| {
        if let Inserted::Pivot(lead) = ech.insert(Sparse(v), vectors.len()) {
            pivots[lead] = true;
            let stored = ech.basis().last().unwrap().0.clone();
            vectors.push((part, stored));
        }
    };
    for col in linear_columns(p, above, order) {
        push(&mut ech, Part::Boundary, col, &mut vectors);
    }
    let d_here = SparseMatrix::from_columns(below.len(), linear_columns(p, order, below));
    for k in kernel_basis(&d_here) {
        let v: SparseVec = k.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        push(&mut ech, Part::Kernel, v, &mut vectors);
    }
    let complement_rows: Vec<usize> = (0..order.len()).filter(|&r| !pivots[r]).collect();
    for &r in &complement_rows {
        vectors.push((Part::Complement, unit(r)));
    }
    Split {
        order: order.to_vec(),
        vectors,
        complement_rows,
    }
}

fn element(al: &Alphabet, order: &[GenId], v: &SparseVec, degree: u32) -> LieElement {
    let mut out = LieElement::zero(degree);
    for (r, c) in v {
        out.add_scaled(c, &al.elem(order[*r]));
    }
    out
}

/// A minimal dgl quasi-isomorphic to `p`. Every generator must have degree at
/// most `cap`.
pub fn minimalize(p: &DglPresentation, cap: u32) -> Result<Minimalized> {
    let al = p.alphabet();
    let max_degree = al.generators().iter().map(|g| g.degree).max().unwrap_or(0);
    if max_degree > cap {
        return Err(Error::CapTooSmall {
            cap,
            needed: max_degree,
        });
    }
    require_d_squared(p, cap)?;
    let input_filtration = p.filtration();
    let filt = |g: GenId| input_filtration.as_ref().map_or(1, |f| f.stage(g));

    let mut by_degree: BTreeMap<u32, Vec<GenId>> = BTreeMap::new();
    for g in al.ids() {
        by_degree.entry(al.degree(g)).or_default().push(g);
    }
    for gens in by_degree.values_mut() {
        gens.sort_by_key(|&g| (Reverse(filt(g)), g));
    }
    let empty = Vec::new();
    let gens_in = |n: u32| by_degree.get(&n).unwrap_or(&empty);

    let mut splits: BTreeMap<u32, Split> = BTreeMap::new();
    for (&n, order) in &by_degree {
        let below = if n > 1 { gens_in(n - 1) } else { &empty };
        splits.insert(n, split_degree(p, order, below, gens_in(n + 1)));
    }

    // new generators, listed in the order of their leading input generator
    let mut kernel: Vec<(GenId, u32, usize)> = Vec::new();
    for (&n, s) in &splits {
        for (i, (part, v)) in s.vectors.iter().enumerate() {
            if *part == Part::Kernel {
                kernel.push((s.order[v[0].0], n, i));
            }
        }
    }
    kernel.sort();
    let mut out_alphabet = Alphabet::new();
    let mut new_id: BTreeMap<(u32, usize), GenId> = BTreeMap::new();
    for &(lead, n, i) in &kernel {
        let g = al.get(lead);
        let id = out_alphabet.push(Generator {
            name: g.name.clone(),
            degree: n,
            filtration: input_filtration.as_ref().map(|_| filt(lead)),
        })?;
        new_id.insert((n, i), id);
    }

    // projection of every input generator, by increasing degree
    let mut projection: Vec<Option<LieElement>> = vec![None; al.len()];
    let mut out = DglPresentation::new(out_alphabet.clone());
    for (&n, s) in &splits {
        let mut full: Echelon<Sparse> = Echelon::new(true);
        for (i, (_, v)) in s.vectors.iter().enumerate() {
            full.insert(Sparse(v.clone()), i);
        }
        // preimages of boundary vectors among complement generators above
        let mut images: Vec<LieElement> = Vec::with_capacity(s.vectors.len());
        let above = splits.get(&(n + 1));
        let preimage_echelon = above.map(|a| {
            let sources: Vec<GenId> = a.complement_rows.iter().map(|&r| a.order[r]).collect();
            let mut e: Echelon<Sparse> = Echelon::new(true);
            for (j, col) in linear_columns(p, &sources, &s.order).into_iter().enumerate() {
                e.insert(Sparse(col), j);
            }
            (sources, e)
        });
        for (i, (part, v)) in s.vectors.iter().enumerate() {
            let img = match part {
                Part::Kernel => out_alphabet.elem(new_id[&(n, i)]),
                Part::Complement => LieElement::zero(n),
                Part::Boundary => {
                    let (sources, e) = preimage_echelon.as_ref().expect("boundaries come from above");
                    let comb = e.express(Sparse(v.clone())).expect("boundary vectors have preimages");
                    let mut dr = LieElement::zero(n);
                    for (j, c) in comb {
                        dr.add_scaled(&c, p.differential(sources[j]));
                    }
                    let higher = dr.weight_at_least(2);
                    -&higher.substitute(&|x| projection[x as usize].clone().expect("lower degree"))
                }
            };
            images.push(img);
        }
        for (r, &g) in s.order.iter().enumerate() {
            let comb = full.express(Sparse(unit(r))).expect("the split is a basis");
            let mut img = LieElement::zero(n);
            for (j, c) in comb {
                img.add_scaled(&c, &images[j]);
            }
            projection[g as usize] = Some(img.normalized(&out_alphabet));
        }
        for (i, (part, v)) in s.vectors.iter().enumerate() {
            if *part != Part::Kernel {
                continue;
            }
            let z = element(al, &s.order, v, n);
            let dz = p.d(&z);
            let image = dz.substitute(&|x| projection[x as usize].clone().expect("lower degree"));
            out.set_differential(new_id[&(n, i)], image.normalized(&out_alphabet))?;
        }
    }

    let projection: Vec<LieElement> = projection
        .into_iter()
        .map(|x| x.expect("every degree handled"))
        .collect();
    let filtration = out.filtration();
    let result = Minimalized {
        presentation: out,
        filtration,
        projection,
        input_length: input_filtration.as_ref().map(|f| f.length()),
    };
    if !result.presentation.is_minimal() {
        return Err(Error::VerificationFailed(
            "output differential is not decomposable".into(),
        ));
    }
    result.check_chain_map(p)?;
    Ok(result)
}
