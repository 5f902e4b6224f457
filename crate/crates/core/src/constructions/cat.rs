//! Category bound: after adding a cycle `w` and changing generators, the dgl
//! `L_k ⊔ L(w)` has a decomposition of length `k`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{sign, LkBundle};
use crate::certificate::{Certificate, Kind, Status};
use crate::dgl::{infer_decomposition, substitute_generators, verify_filtration, FiltrationAssignment};
use crate::error::{Error, Result};
use crate::format::{parse_dgl, parse_element, print_dgl};
use crate::lie::{Generator, LieElement};

/// `w -> w + alpha_hat`, `v -> v - [w + alpha_hat, alpha_hat']`, then
/// `d v = gamma + (-1)^n [w, alpha']` and the greedy decomposition of the
/// result has length at most `k`.
pub fn cat_certificate(bundle: &LkBundle) -> Result<Certificate> {
    let n = bundle.n();
    let mut m = bundle.lk.without_filtration();
    let w = m.add_generator(Generator::new("w", n + 1), LieElement::zero(n))?;
    let v = m.alphabet().require("v")?;
    let we = m.alphabet().elem(w);
    let w_img = &we + &bundle.alpha_hat;
    let v_img = &m.alphabet().elem(v) - &w_img.bracket(&bundle.alpha_hat_p);
    let subst = BTreeMap::from([(w, w_img.clone()), (v, v_img.clone())]);
    let q = substitute_generators(&m, &subst)?;

    let expected = &bundle.gamma + &we.bracket(&bundle.alpha_p).scale(&sign(n % 2 == 1));
    let identity = q.differential(v) == &expected;
    let before =
        infer_decomposition(&bundle.lk).ok_or_else(|| Error::VerificationFailed("no decomposition of L_k".into()))?;
    let after = infer_decomposition(&q)
        .ok_or_else(|| Error::VerificationFailed("no decomposition after substitution".into()))?;
    verify_filtration(&q, &after)?;

    let al = m.alphabet();
    let mut cert = Certificate::new(Kind::Cat, Some(bundle.k), al);
    cert.status = if identity && after.length() <= bundle.k {
        Status::Pass
    } else {
        Status::Fail
    };
    cert.witness("original", json!(print_dgl(&m)));
    cert.witness("presentation", json!(print_dgl(&q)));
    cert.witness(
        "substitution",
        json!({
            "w": w_img.display(al).to_string(),
            "v": v_img.display(al).to_string(),
        }),
    );
    cert.witness("gamma", json!(bundle.gamma.display(al).to_string()));
    cert.witness("alpha_prime", json!(bundle.alpha_p.display(al).to_string()));
    cert.witness("d_v", json!(q.differential(v).display(al).to_string()));
    cert.witness("identity_holds", json!(identity));
    cert.witness("filtration_before", json!(before.to_named(bundle.lk.alphabet())));
    cert.witness("filtration_after", json!(after.to_named(al)));
    cert.dimension("n", n as u64);
    cert.dimension("length_before", before.length() as u64);
    cert.dimension("length_after", after.length() as u64);
    cert.seal();
    Ok(cert)
}

fn str_at<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    v.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::VerificationFailed(format!("missing `{key}`")))
}

/// Recomputes the change of generators from the stored map, compares with the
/// stored result, and checks the identity and the stored decomposition.
pub fn recheck_cat(cert: &Certificate) -> Result<bool> {
    let k = cert.k.ok_or_else(|| Error::VerificationFailed("missing k".into()))?;
    let m = parse_dgl(cert.str_witness("original")?)?.presentation;
    let q = parse_dgl(cert.str_witness("presentation")?)?.presentation;
    let al = m.alphabet();
    let sub = cert
        .witnesses
        .get("substitution")
        .ok_or_else(|| Error::VerificationFailed("missing `substitution`".into()))?;
    let (w, v) = (al.require("w")?, al.require("v")?);
    let subst = BTreeMap::from([
        (w, parse_element(al, str_at(sub, "w")?)?),
        (v, parse_element(al, str_at(sub, "v")?)?),
    ]);
    if substitute_generators(&m, &subst)? != q {
        return Ok(false);
    }
    let n = cert.dimensions.get("n").copied().unwrap_or(0) as u32;
    let gamma = parse_element(al, cert.str_witness("gamma")?)?;
    let alpha_p = parse_element(al, cert.str_witness("alpha_prime")?)?;
    let expected = &gamma + &al.elem(w).bracket(&alpha_p).scale(&sign(n % 2 == 1));
    if q.differential(v) != &expected || alpha_p.degree() != n {
        return Ok(false);
    }
    let named: BTreeMap<String, u32> =
        serde_json::from_value(cert.witnesses.get("filtration_after").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::VerificationFailed(e.to_string()))?;
    let after = FiltrationAssignment::from_named(al, &named)?;
    Ok(verify_filtration(&q, &after).is_ok() && after.length() <= k && cert.generator_order == al.names())
}
