//! Certificates for the general dgl operations, and their re-checks.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use super::{
    boundary_system, check_d_squared, infer_decomposition, minimalize, substitute_generators, verify_filtration,
    DglPresentation, FiltrationAssignment, SearchSpace,
};
use crate::certificate::{Certificate, Kind, Status};
use crate::error::{Error, Result};
use crate::format::{format_rational, parse_dgl, parse_element, parse_rational, print_dgl};
use crate::lie::{Alphabet, GenId, LieElement, Word};
use crate::linalg::{verify_witness, Elimination, Rational};

fn space_json(al: &Alphabet, space: &SearchSpace) -> Value {
    json!({
        "letters": space.letters.as_ref().map(|l| l.iter().map(|&g| al.get(g).name.clone()).collect::<Vec<_>>()),
        "min_weight": space.min_weight,
        "max_weight": space.max_weight,
    })
}

fn space_from_json(al: &Alphabet, v: &Value) -> Result<SearchSpace> {
    let bad = || Error::VerificationFailed("malformed search space".into());
    let letters = match v.get("letters") {
        None | Some(Value::Null) => None,
        Some(Value::Array(xs)) => Some(
            xs.iter()
                .map(|x| al.require(x.as_str().ok_or_else(bad)?))
                .collect::<Result<Vec<GenId>>>()?,
        ),
        Some(_) => return Err(bad()),
    };
    let weight = |key: &str| v.get(key).and_then(Value::as_u64).map(|w| w as usize);
    Ok(SearchSpace {
        letters,
        min_weight: weight("min_weight"),
        max_weight: weight("max_weight"),
    })
}

fn element_map(al: &Alphabet, m: &BTreeMap<GenId, LieElement>) -> Value {
    let named: BTreeMap<String, String> = m
        .iter()
        .map(|(&g, e)| (al.get(g).name.clone(), e.display(al).to_string()))
        .collect();
    json!(named)
}

fn parse_element_map(al: &Alphabet, v: Option<&Value>) -> Result<BTreeMap<GenId, LieElement>> {
    let Some(Value::Object(m)) = v else {
        return Err(Error::VerificationFailed("missing element map".into()));
    };
    m.iter()
        .map(|(name, e)| {
            let text = e
                .as_str()
                .ok_or_else(|| Error::VerificationFailed(format!("entry `{name}` is not a string")))?;
            Ok((al.require(name)?, parse_element(al, text)?))
        })
        .collect()
}

fn word_key(al: &Alphabet, w: &[GenId]) -> String {
    al.word_string(w)
}

fn parse_word(al: &Alphabet, s: &str) -> Result<Word> {
    s.split(' ').map(|n| al.require(n)).collect()
}

/// `Pass` with a preimage in the search space, or `Fail` with a vector `y`
/// on the words of `d(space)` such that `y . d(t) = 0` for every spanning
/// tree `t` and `y . target != 0`.
pub fn boundary_certificate(p: &DglPresentation, target: &LieElement, space: &SearchSpace) -> Result<Certificate> {
    if !p.d(target).is_zero() {
        return Err(Error::NotACycle);
    }
    let al = p.alphabet();
    let degree = target.degree() + 1;
    let sys = boundary_system(p, degree, space, target);
    let elim = Elimination::default();
    let mut cert = Certificate::new(Kind::Boundary, None, al);
    match elim.solve(&sys.matrix, &sys.rhs)? {
        Some(x) => {
            let e = sys.element(p, degree, &x).normalized(al);
            if &p.d(&e) != target {
                return Err(Error::VerificationFailed(
                    "boundary solution does not reproduce the target".into(),
                ));
            }
            cert.status = Status::Pass;
            cert.witness("solution", json!(e.display(al).to_string()));
        }
        None => {
            let y = elim
                .infeasibility_witness(&sys.matrix, &sys.rhs)?
                .ok_or_else(|| Error::VerificationFailed("no solution and no Farkas vector".into()))?;
            if !verify_witness(&sys.matrix, &sys.rhs, &y) {
                return Err(Error::VerificationFailed("Farkas vector fails its checks".into()));
            }
            let words = sys.rows.words();
            let map: BTreeMap<String, String> = y
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (word_key(al, &words[i]), format_rational(c)))
                .collect();
            cert.status = Status::Fail;
            cert.witness("farkas", json!(map));
        }
    }
    cert.witness("presentation", json!(print_dgl(p)));
    cert.witness("target", json!(target.display(al).to_string()));
    cert.witness("search_space", space_json(al, space));
    cert.dimension("degree", degree as u64);
    cert.dimension("unknowns", sys.matrix.n_cols() as u64);
    cert.dimension("equations", sys.matrix.n_rows() as u64);
    cert.seal();
    Ok(cert)
}

fn recheck_boundary(cert: &Certificate) -> Result<bool> {
    let p = parse_dgl(cert.str_witness("presentation")?)?.presentation;
    if p.alphabet().names() != cert.generator_order {
        return Ok(false);
    }
    let al = p.alphabet();
    let target = parse_element(al, cert.str_witness("target")?)?;
    let space = space_from_json(al, cert.witnesses.get("search_space").unwrap_or(&Value::Null))?;
    match cert.status {
        Status::Pass => {
            let e = parse_element(al, cert.str_witness("solution")?)?;
            let letters_ok = space.letters.as_ref().is_none_or(|l| e.lies_in(&|g| l.contains(&g)));
            let weights_ok = e
                .weights()
                .iter()
                .all(|&w| space.min_weight.is_none_or(|m| w >= m) && space.max_weight.is_none_or(|m| w <= m));
            Ok(letters_ok && weights_ok && p.d(&e) == target)
        }
        Status::Fail => {
            let sys = boundary_system(&p, target.degree() + 1, &space, &target);
            let Some(Value::Object(m)) = cert.witnesses.get("farkas") else {
                return Ok(false);
            };
            let mut y = vec![Rational::zero(); sys.rows.len()];
            for (word, c) in m {
                let Some(i) = sys.rows.get(&parse_word(al, word)?) else {
                    return Ok(false);
                };
                y[i] = parse_rational(c.as_str().unwrap_or(""))?;
            }
            Ok(verify_witness(&sys.matrix, &sys.rhs, &y))
        }
        _ => Ok(false),
    }
}

/// Checks a given filtration, or infers the greedy one.
pub fn decomposition_certificate(p: &DglPresentation, given: Option<&FiltrationAssignment>) -> Result<Certificate> {
    let al = p.alphabet();
    let mut cert = Certificate::new(Kind::Decomposition, None, al);
    let f = match given {
        Some(f) => {
            verify_filtration(p, f)?;
            Some(f.clone())
        }
        None => infer_decomposition(p),
    };
    cert.witness("presentation", json!(print_dgl(&p.without_filtration())));
    cert.witness("source", json!(if given.is_some() { "given" } else { "greedy" }));
    match f {
        Some(f) => {
            cert.status = Status::Pass;
            cert.witness("filtration", json!(f.to_named(al)));
            cert.dimension("length", f.length() as u64);
        }
        None => cert.status = Status::Fail,
    }
    cert.seal();
    Ok(cert)
}

fn named_filtration(al: &Alphabet, v: Option<&Value>) -> Result<FiltrationAssignment> {
    let named: BTreeMap<String, u32> = serde_json::from_value(v.cloned().unwrap_or(Value::Null))
        .map_err(|e| Error::VerificationFailed(format!("filtration: {e}")))?;
    FiltrationAssignment::from_named(al, &named)
}

fn recheck_decomposition(cert: &Certificate) -> Result<bool> {
    let p = parse_dgl(cert.str_witness("presentation")?)?.presentation;
    if p.alphabet().names() != cert.generator_order {
        return Ok(false);
    }
    match cert.status {
        Status::Pass => {
            let f = named_filtration(p.alphabet(), cert.witnesses.get("filtration"))?;
            Ok(verify_filtration(&p, &f).is_ok() && cert.dimensions.get("length") == Some(&(f.length() as u64)))
        }
        Status::Fail => Ok(infer_decomposition(&p).is_none()),
        _ => Ok(false),
    }
}

/// Change of generators with the resulting presentation and the greedy
/// lengths before and after.
pub fn substitution_certificate(p: &DglPresentation, subst: &BTreeMap<GenId, LieElement>) -> Result<Certificate> {
    let q = substitute_generators(p, subst)?;
    let al = p.alphabet();
    let mut cert = Certificate::new(Kind::Substitution, None, al);
    cert.status = Status::Pass;
    cert.witness("original", json!(print_dgl(p)));
    cert.witness("substitution", element_map(al, subst));
    cert.witness("presentation", json!(print_dgl(&q)));
    for (key, r) in [("length_before", p), ("length_after", &q)] {
        if let Some(f) = infer_decomposition(r) {
            cert.dimension(key, f.length() as u64);
        }
    }
    cert.seal();
    Ok(cert)
}

fn recheck_substitution(cert: &Certificate) -> Result<bool> {
    let p = parse_dgl(cert.str_witness("original")?)?.presentation;
    if p.alphabet().names() != cert.generator_order {
        return Ok(false);
    }
    let q = parse_dgl(cert.str_witness("presentation")?)?.presentation;
    let subst = parse_element_map(p.alphabet(), cert.witnesses.get("substitution"))?;
    Ok(substitute_generators(&p, &subst)? == q)
}

/// Minimal model through `cap`, with the projection of every input
/// generator and, for filtered input, the induced filtration.
pub fn minimalize_certificate(p: &DglPresentation, cap: u32) -> Result<Certificate> {
    let m = minimalize(p, cap)?;
    m.check_chain_map(p)?;
    let filtered_ok = match &m.filtration {
        Some(_) => m.check_filtration_properties().is_ok(),
        None => true,
    };
    let al = p.alphabet();
    let mut cert = Certificate::new(Kind::Minimalize, None, al);
    cert.status = if m.presentation.is_minimal() && filtered_ok {
        Status::Pass
    } else {
        Status::Fail
    };
    let out = match &m.filtration {
        Some(f) => m.presentation.with_filtration(f)?,
        None => m.presentation.clone(),
    };
    let projection: BTreeMap<GenId, LieElement> = al.ids().map(|g| (g, m.projection[g as usize].clone())).collect();
    let oal = out.alphabet();
    let named: BTreeMap<String, String> = projection
        .iter()
        .map(|(&g, e)| (al.get(g).name.clone(), e.display(oal).to_string()))
        .collect();
    cert.witness("input", json!(print_dgl(p)));
    cert.witness("presentation", json!(print_dgl(&out)));
    cert.witness("projection", json!(named));
    cert.dimension("degree_cap", cap as u64);
    cert.dimension("input_generators", p.len() as u64);
    cert.dimension("output_generators", out.len() as u64);
    if let (Some(f), Some(k)) = (&m.filtration, m.input_length) {
        cert.dimension("input_length", k as u64);
        cert.dimension("output_length", f.length() as u64);
    }
    cert.seal();
    Ok(cert)
}

fn recheck_minimalize(cert: &Certificate) -> Result<bool> {
    let p = parse_dgl(cert.str_witness("input")?)?.presentation;
    if p.alphabet().names() != cert.generator_order {
        return Ok(false);
    }
    let out = parse_dgl(cert.str_witness("presentation")?)?.presentation;
    let Some(Value::Object(m)) = cert.witnesses.get("projection") else {
        return Ok(false);
    };
    let mut proj = Vec::with_capacity(p.len());
    for g in p.alphabet().ids() {
        let name = &p.alphabet().get(g).name;
        let Some(text) = m.get(name).and_then(Value::as_str) else {
            return Ok(false);
        };
        proj.push(parse_element(out.alphabet(), text)?);
    }
    let commutes = p
        .alphabet()
        .ids()
        .all(|g| p.differential(g).substitute(&|x| proj[x as usize].clone()) == out.d(&proj[g as usize]));
    let cap = cert.dimensions.get("degree_cap").copied().unwrap_or(0) as u32;
    Ok(commutes && out.is_minimal() && check_d_squared(&out, cap).passed())
}

fn recheck_d_squared(cert: &Certificate) -> Result<bool> {
    let p = parse_dgl(cert.str_witness("presentation")?)?.presentation;
    if p.alphabet().names() != cert.generator_order {
        return Ok(false);
    }
    let cap = cert.dimensions.get("degree_cap").copied().unwrap_or(0) as u32;
    Ok(check_d_squared(&p, cap).status == cert.status)
}

/// Re-checks a certificate from its stored witnesses: the digest, the
/// generator order, and the kind-specific identities. Returns `false` for a
/// certificate that does not check out.
pub fn recheck(cert: &Certificate) -> Result<bool> {
    if !cert.is_sealed() {
        return Ok(false);
    }
    use crate::constructions::{recheck_cat, recheck_claim, recheck_prop51};
    match cert.kind {
        Kind::DSquared => recheck_d_squared(cert),
        Kind::Boundary => recheck_boundary(cert),
        Kind::Decomposition => recheck_decomposition(cert),
        Kind::Substitution => recheck_substitution(cert),
        Kind::Minimalize => recheck_minimalize(cert),
        Kind::Cat => recheck_cat(cert),
        Kind::Prop51 => recheck_prop51(cert),
        Kind::Claim => recheck_claim(cert),
    }
}
