//! The two-sphere-bundle style construction: connected sum `L`, product
//! model `L'`, the elements `f`, `alpha`, `alpha_hat`, `gamma`, and the dgl
//! obtained by adding a top generator `v`.

mod cat;
mod claim;
mod prop51;

use std::collections::BTreeMap;

use crate::dgl::{
    infer_decomposition, solve_boundary, verify_filtration, DglPresentation, FiltrationAssignment, SearchSpace,
};
use crate::error::{Error, Result};
use crate::lie::{GenId, Generator, LieElement};
use crate::linalg::Rational;
use crate::quillen::lstar_a;

pub use cat::{cat_certificate, recheck_cat};
pub use claim::{claim_certificate, recheck_claim, rho2_ideal, rho2_nonzero, verify_claim_identity};
pub use prop51::{check_prop51, prop51_system, recheck_prop51, Prop51Options, Prop51System};

fn require_k(k: u32) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("k = {k}; need k >= 3")));
    }
    Ok(())
}

/// `d a_k` in `L_*(A_k)`, on the generators `a, a2, ..., a(k-1)` (ids 0..k-1).
fn da_k(k: u32) -> Result<LieElement> {
    let l = lstar_a(k)?;
    Ok(l.presentation.differential((k - 1) as GenId).clone())
}

/// `L = (L(a, a2, ..., a(k-1), b, c), d)` with `d c = -[b,b] - d a_k`, the
/// other differentials those of `L_*(A_k)` and `L_*(B_k)`. Filtration:
/// `a, b` in stage 1, `a_i` in stage `i`, `c` in stage `k`.
pub fn build_connected_sum(k: u32) -> Result<DglPresentation> {
    require_k(k)?;
    let la = lstar_a(k)?;
    let mut p = DglPresentation::new(Default::default());
    for i in 1..k {
        let g = la.presentation.alphabet().get((i - 1) as GenId);
        p.add_generator(
            Generator::filtered(g.name.clone(), g.degree, i),
            la.presentation.differential((i - 1) as GenId).clone(),
        )?;
    }
    let b = p.add_generator(Generator::filtered("b", 2 * k - 1, 1), LieElement::zero(2 * k - 2))?;
    let bb = p.alphabet().elem(b).bracket(&p.alphabet().elem(b));
    let dc = -&(&bb + &da_k(k)?);
    p.add_generator(Generator::filtered("c", 4 * k - 1, k), dc)?;
    Ok(p)
}

/// `f` of bracket length two on `a, ..., a(k-1)` with `d f = [a, d a_k]`.
pub fn compute_f(k: u32, l: &DglPresentation) -> Result<LieElement> {
    let al = l.alphabet();
    let a = al.named("a")?;
    let target = a.bracket(&da_k(k)?);
    let letters: Vec<GenId> = (0..k - 1).map(|i| i as GenId).collect();
    let space = SearchSpace::weight(2).with_letters(letters);
    solve_boundary(l, &target, &space)?
        .ok_or_else(|| Error::VerificationFailed("[a, d a_k] is not a boundary of bracket length 2".into()))
}

/// `L ⊔ L' ⊔ L(s(x*y'))` for `x` and `y'` in the first filtration stage of
/// each factor, with `d s(x*y') = [x, y']` and the `s` generators in stage 2.
pub fn build_product_model(l: &DglPresentation, l2: &DglPresentation) -> Result<DglPresentation> {
    let missing = |p: &DglPresentation| {
        p.alphabet()
            .generators()
            .iter()
            .find(|g| g.filtration.is_none())
            .map(|g| Error::MissingFiltration(g.name.clone()))
    };
    if let Some(e) = missing(l).or_else(|| missing(l2)) {
        return Err(e);
    }
    let shift = l.len() as GenId;
    let mut p = l.coproduct(l2)?;
    let first = |q: &DglPresentation| -> Vec<GenId> {
        q.alphabet()
            .ids()
            .filter(|&g| q.alphabet().get(g).filtration == Some(1))
            .collect()
    };
    for x in first(l) {
        for y in first(l2) {
            let (gx, gy) = (l.alphabet().get(x).clone(), l2.alphabet().get(y).clone());
            let d = p.alphabet().elem(x).bracket(&p.alphabet().elem(y + shift));
            p.add_generator(
                Generator::filtered(format!("s({}*{})", gx.name, gy.name), gx.degree + gy.degree + 1, 2),
                d,
            )?;
        }
    }
    Ok(p)
}

fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::from_integer(1.into())
    } else {
        Rational::from_integer(1.into())
    }
}

/// `gamma` of bracket length five on the first stages and the `s`
/// generators, with `d gamma = (-1)^(n+1) [alpha, alpha']`, `n = |alpha|`.
pub fn compute_gamma(product: &DglPresentation, alpha: &LieElement, alpha_p: &LieElement) -> Result<LieElement> {
    let al = product.alphabet();
    let n = alpha.degree();
    let target = alpha.bracket(alpha_p).scale(&sign(n.is_multiple_of(2)));
    let letters: Vec<GenId> = al
        .ids()
        .filter(|&g| al.get(g).filtration == Some(1) || al.get(g).name.starts_with("s("))
        .collect();
    let space = SearchSpace::weight(5).with_letters(letters);
    solve_boundary(product, &target, &space)?
        .ok_or_else(|| Error::VerificationFailed("[alpha, alpha'] is not a boundary of bracket length 5".into()))
}

/// All pieces of the construction for one `k`.
#[derive(Clone, Debug)]
pub struct LkBundle {
    pub k: u32,
    pub l: DglPresentation,
    pub l_prime: DglPresentation,
    /// `L'` in the notation of the construction: `L ⊔ L' ⊔ L(s(...))`.
    pub product: DglPresentation,
    /// Elements below live in `product` (and in `lk`, which extends it).
    pub alpha: LieElement,
    pub alpha_hat: LieElement,
    pub f: LieElement,
    pub alpha_p: LieElement,
    pub alpha_hat_p: LieElement,
    pub f_p: LieElement,
    pub gamma: LieElement,
    /// `product ⊔ L(v)` with `d v = [alpha, alpha_hat'] + gamma`.
    pub lk: DglPresentation,
    pub filtration: FiltrationAssignment,
}

impl LkBundle {
    /// `n = |alpha|`.
    pub fn n(&self) -> u32 {
        self.alpha.degree()
    }

    pub fn el(&self, name: &str) -> Result<LieElement> {
        self.lk.alphabet().named(name)
    }
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::VerificationFailed(what.to_string()))
    }
}

pub fn build_lk(k: u32) -> Result<LkBundle> {
    let l = build_connected_sum(k)?;
    let f = compute_f(k, &l)?;
    let al = l.alphabet();
    let (a, b, c) = (al.named("a")?, al.named("b")?, al.named("c")?);
    let alpha = a.bracket(&b.bracket(&b));
    let alpha_hat = &a.bracket(&c) - &f;
    check(l.d(&f) == a.bracket(&da_k(k)?), "d f = [a, d a_k]")?;
    check(l.d(&alpha_hat) == alpha, "d alpha_hat = alpha")?;

    let l_prime = l.primed();
    let product = build_product_model(&l, &l_prime)?;
    let shift = l.len() as GenId;
    let prime = |e: &LieElement| e.relabel(&|x| x + shift);
    let (alpha_p, alpha_hat_p, f_p) = (prime(&alpha), prime(&alpha_hat), prime(&f));
    let gamma = compute_gamma(&product, &alpha, &alpha_p)?;
    let n = alpha.degree();
    check(
        product.d(&gamma) == alpha.bracket(&alpha_p).scale(&sign(n % 2 == 0)),
        "d gamma = (-1)^(n+1) [alpha, alpha']",
    )?;

    let mut lk = product.clone();
    let dv = &alpha.bracket(&alpha_hat_p) + &gamma;
    lk.add_generator(Generator::filtered("v", 2 * n + 2, k + 1), dv.clone())?;
    check(lk.d(&dv).is_zero(), "d d v = 0")?;
    let filtration = lk.filtration().expect("every generator is filtered");
    verify_filtration(&lk, &filtration)?;
    Ok(LkBundle {
        k,
        l,
        l_prime,
        product,
        alpha,
        alpha_hat,
        f,
        alpha_p,
        alpha_hat_p,
        f_p,
        gamma,
        lk,
        filtration,
    })
}

/// Greedy decomposition lengths, keyed by generator name.
pub fn greedy_stages(p: &DglPresentation) -> Option<BTreeMap<String, u32>> {
    infer_decomposition(p).map(|f| f.to_named(p.alphabet()))
}

#[cfg(test)]
mod tests;
