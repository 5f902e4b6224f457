//! The bracket identity behind the nontriviality of the second obstruction,
//! and the ideal membership test for its image.

use serde_json::json;

use super::LkBundle;
use crate::certificate::{Certificate, Kind, Status};
use crate::dgl::{extend_derivation, ideal_contains, DglPresentation};
use crate::error::{Error, Result};
use crate::format::{parse_dgl, parse_element, print_dgl};
use crate::lie::{multidegree_component, Alphabet, GenId, LieElement};

/// With `x = [[a,c],[a',c']]`:
/// `E = [alpha,[a',c']] - d x + d([f,[a',c']] + [[a,c],f']) + [[a,c],alpha']`
/// lies in the subalgebra on generators of filtration `< k` and equals
/// `[f,alpha'] + [f,d f'] + [alpha,f'] + [d f,f']`.
pub fn verify_claim_identity(bundle: &LkBundle) -> Result<Certificate> {
    claim_certificate(&bundle.product, bundle.k, &bundle.f)
}

fn primed(al: &Alphabet, e: &LieElement) -> Result<LieElement> {
    let ids: Vec<Option<GenId>> = al.ids().map(|g| al.id(&format!("{}'", al.get(g).name))).collect();
    if let Some(g) = e.support().into_iter().find(|&g| ids[g as usize].is_none()) {
        return Err(Error::UnknownGenerator(format!("{}'", al.get(g).name)));
    }
    Ok(e.relabel(&|g| ids[g as usize].expect("checked")))
}

/// The claim checks on the product model `p` with the given `f`.
pub fn claim_certificate(p: &DglPresentation, k: u32, f: &LieElement) -> Result<Certificate> {
    let al = p.alphabet();
    let el = |n: &str| al.named(n);
    let (a, b, c, ap, cp) = (el("a")?, el("b")?, el("c")?, el("a'")?, el("c'")?);
    let alpha = a.bracket(&b.bracket(&b));
    let alpha_p = primed(al, &alpha)?;
    let f_p = primed(al, f)?;
    let (alpha, alpha_p, f, f_p) = (&alpha, &alpha_p, f, &f_p);
    let ac = a.bracket(&c);
    let acp = ap.bracket(&cp);
    let x = ac.bracket(&acp);
    let dx = p.d(&x);

    let expanded = &ac.bracket(&(alpha_p + &p.d(f_p))) + &(alpha + &p.d(f)).bracket(&acp);
    let derivation_ok = dx == expanded && dx == extend_derivation(p, &x);

    let correction = &f.bracket(&acp) + &ac.bracket(f_p);
    let e = &(&(&alpha.bracket(&acp) - &dx) + &p.d(&correction)) + &ac.bracket(alpha_p);
    let stage = |g: GenId| al.get(g).filtration.unwrap_or(u32::MAX);
    let in_low = e.lies_in(&|g| stage(g) < k);
    let closed = [
        f.bracket(alpha_p),
        f.bracket(&p.d(f_p)),
        alpha.bracket(f_p),
        p.d(f).bracket(f_p),
    ]
    .iter()
    .fold(LieElement::zero(e.degree()), |acc, t| &acc + t);
    let closed_ok = e == closed;

    let ids = [al.require("a")?, al.require("c")?, al.require("a'")?, al.require("c'")?];
    let multilinear = multidegree_component(al, &ids)?.len();

    let rho2 = rho2_nonzero(p, k)?;

    let mut cert = Certificate::new(Kind::Claim, Some(k), al);
    cert.status = if derivation_ok && in_low && closed_ok && multilinear == 6 && rho2 {
        Status::Pass
    } else {
        Status::Fail
    };
    cert.witness("presentation", json!(print_dgl(p)));
    cert.witness("f", json!(f.display(al).to_string()));
    cert.witness("E", json!(e.normalized(al).display(al).to_string()));
    cert.witness("E_closed_form", json!("[f,alpha'] + [f,d f'] + [alpha,f'] + [d f,f']"));
    cert.witness("derivation_expansion", json!(derivation_ok));
    cert.witness("E_in_low_subalgebra", json!(in_low));
    cert.witness("E_matches_closed_form", json!(closed_ok));
    cert.witness("rho2_class_nonzero", json!(rho2));
    cert.dimension("multilinear_a_c_a'_c'", multilinear as u64);
    cert.dimension("degree", x.degree() as u64);
    cert.seal();
    Ok(cert)
}

/// Re-runs the claim checks from the embedded presentation and `f`.
pub fn recheck_claim(cert: &Certificate) -> Result<bool> {
    let k = cert.k.ok_or_else(|| Error::VerificationFailed("missing k".into()))?;
    let p = parse_dgl(cert.str_witness("presentation")?)?.presentation;
    let f = parse_element(p.alphabet(), cert.str_witness("f")?)?;
    let again = claim_certificate(&p, k, &f)?;
    Ok(again.status == cert.status
        && again.witnesses == cert.witnesses
        && again.generator_order == cert.generator_order)
}

/// The ideal of `L'` killed when passing to the second stage of the
/// obstruction: the `s` generators, the mixed brackets of first-stage
/// generators, `[a,c']`, `[a,a'_i]` for `2 <= i <= k-1`, and `[a',a']`.
pub fn rho2_ideal(p: &DglPresentation, k: u32) -> Result<Vec<LieElement>> {
    let al = p.alphabet();
    let el = |n: &str| al.named(n);
    let mut gens = Vec::new();
    for g in al.generators() {
        if g.name.starts_with("s(") {
            gens.push(el(&g.name)?);
        }
    }
    for x in ["a", "b"] {
        for y in ["a'", "b'"] {
            gens.push(el(x)?.bracket(&el(y)?));
        }
    }
    let a = el("a")?;
    gens.push(a.bracket(&el("c'")?));
    for i in 2..k {
        gens.push(a.bracket(&el(&format!("a{i}'"))?));
    }
    gens.push(el("a'")?.bracket(&el("a'")?));
    Ok(gens)
}

/// `[[a,[b,b]],[a',c']]` is not in the ideal generated by [`rho2_ideal`].
pub fn rho2_nonzero(p: &DglPresentation, k: u32) -> Result<bool> {
    let al = p.alphabet();
    let (a, b) = (al.named("a")?, al.named("b")?);
    let target = a
        .bracket(&b.bracket(&b))
        .bracket(&al.named("a'")?.bracket(&al.named("c'")?));
    Ok(!ideal_contains(p, &rho2_ideal(p, k)?, &target)?)
}
