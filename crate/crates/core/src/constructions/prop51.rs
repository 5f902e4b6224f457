//! The obstruction system: is there `x` of bracket length four in `L'` with
//! `d x` agreeing with `d v` on every word that involves a top-stage
//! generator?

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::LkBundle;
use crate::budget::Budget;
use crate::certificate::{Certificate, Kind, Status};
use crate::dgl::DglPresentation;
use crate::error::{Error, Result};
use crate::format::{format_rational, parse_dgl, parse_element, parse_rational, print_dgl};
use crate::lie::{spanning_set_with, Alphabet, BracketTree, Coords, GenId, LieElement, SpanSpec, WordIndex};
use crate::linalg::modular::modular_feasible;
use crate::linalg::{Elimination, Rational, SparseMatrix, SparseVec};

pub const UNKNOWN_WEIGHT: usize = 4;

#[derive(Clone, Debug, Default)]
pub struct Prop51Options {
    pub budget: Budget,
    /// Generator order for `L'` by name; `v` always comes last.
    pub order: Option<Vec<String>>,
    /// Use `d [[a,c],[a',c']]` as the right-hand side instead of `d v`.
    pub control: bool,
    pub timings: bool,
}

#[derive(Clone, Debug)]
pub struct Prop51System {
    pub trees: Vec<BracketTree>,
    pub matrix: SparseMatrix,
    pub rhs: Vec<Rational>,
    pub rows: WordIndex,
}

impl Prop51System {
    pub fn element(&self, alphabet: &Alphabet, degree: u32, x: &[Rational]) -> LieElement {
        let terms = self
            .trees
            .iter()
            .zip(x)
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (t.clone(), c.clone()));
        LieElement::from_terms(alphabet, degree, terms).expect("trees share the degree")
    }
}

fn project(c: &Coords, high: &BTreeSet<GenId>) -> Coords {
    c.iter()
        .filter(|(w, _)| w.iter().any(|g| high.contains(g)))
        .map(|(w, x)| (w.clone(), x.clone()))
        .collect()
}

/// Columns: the projected differentials of a spanning set of bracket length
/// four in `degree`; rows: the words involving a generator of `high`.
pub fn prop51_system(
    p: &DglPresentation,
    rhs: &LieElement,
    high: &BTreeSet<GenId>,
    budget: &Budget,
) -> Result<Prop51System> {
    let degree = rhs.degree() + 1;
    let trees = spanning_set_with(p.alphabet(), degree, &SpanSpec::weight(UNKNOWN_WEIGHT));
    budget.check("assembly")?;
    let cols: Vec<Coords> = trees
        .par_iter()
        .map(|t| project(&p.d_coords(&t.expand(p.alphabet()).1), high))
        .collect();
    budget.check("assembly")?;
    let mut rows = WordIndex::new();
    let sparse: Vec<SparseVec> = cols
        .iter()
        .map(|c| {
            let mut v: SparseVec = c.iter().map(|(w, x)| (rows.index(w), x.clone())).collect();
            v.sort_by_key(|(i, _)| *i);
            v
        })
        .collect();
    let mut b = Vec::new();
    for (w, x) in project(rhs.coords(), high) {
        b.push((rows.index(&w), x));
    }
    let n = rows.len();
    let mut dense = vec![Rational::zero(); n];
    for (i, x) in b {
        dense[i] = x;
    }
    Ok(Prop51System {
        trees,
        matrix: SparseMatrix::from_columns(n, sparse),
        rhs: dense,
        rows,
    })
}

/// Family one: `y . M_j = 0` for every column. Family two: `y . b != 0`.
fn farkas_holds(sys: &Prop51System, y: &[Rational]) -> bool {
    sys.matrix.left_mul_vec(y).iter().all(Zero::is_zero)
        && !sys
            .rhs
            .iter()
            .zip(y)
            .fold(Rational::zero(), |acc, (b, c)| acc + b * c)
            .is_zero()
}

fn sparse_y(sys: &Prop51System, al: &Alphabet, y: &[Rational]) -> Value {
    let map: BTreeMap<String, Value> = y
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (al.word_string(&sys.rows.words()[i]), Value::String(format_rational(c))))
        .collect();
    json!(map)
}

struct Setup {
    lk: DglPresentation,
    product: DglPresentation,
    rhs: LieElement,
    high: BTreeSet<GenId>,
}

fn drop_last(p: &DglPresentation) -> Result<DglPresentation> {
    let n = p.len() - 1;
    let al = Alphabet::from_generators(p.alphabet().generators()[..n].iter().cloned())?;
    DglPresentation::from_differentials(al, p.differentials()[..n].to_vec())
}

fn control_element(al: &Alphabet) -> Result<LieElement> {
    parse_element(al, "[[a,c],[a',c']]")
}

fn setup(lk: DglPresentation, k: u32, control: bool) -> Result<Setup> {
    let al = lk.alphabet();
    let v = al.require("v")?;
    if v as usize != lk.len() - 1 {
        return Err(Error::InvalidParameter("`v` must be the last generator".into()));
    }
    let product = drop_last(&lk)?;
    if !product.is_quadratic() {
        return Err(Error::InvalidParameter("differentials of L' must be quadratic".into()));
    }
    let rhs = if control {
        product.d(&control_element(product.alphabet())?)
    } else {
        lk.differential(v).clone()
    };
    let pal = product.alphabet();
    let mut high = BTreeSet::new();
    for g in pal.ids() {
        match pal.get(g).filtration {
            Some(f) if f >= k => {
                high.insert(g);
            }
            Some(_) => {}
            None => return Err(Error::MissingFiltration(pal.get(g).name.clone())),
        }
    }
    Ok(Setup { lk, product, rhs, high })
}

fn ordered_lk(bundle: &LkBundle, order: &Option<Vec<String>>) -> Result<DglPresentation> {
    let Some(names) = order else {
        return Ok(bundle.lk.clone());
    };
    let al = bundle.lk.alphabet();
    let mut ids = names.iter().map(|n| al.require(n)).collect::<Result<Vec<_>>>()?;
    let v = al.require("v")?;
    if ids.contains(&v) {
        return Err(Error::InvalidParameter("`v` is always last".into()));
    }
    ids.push(v);
    Ok(bundle.lk.reordered(&ids)?.0)
}

fn status_name(s: Option<bool>) -> &'static str {
    match s {
        Some(true) => "FEASIBLE",
        Some(false) => "INFEASIBLE",
        None => "UNDETERMINED",
    }
}

/// Decides the system exactly and returns a certificate: a Farkas vector
/// when infeasible, a solution `x` when feasible. A modular pre-pass must
/// agree with the exact answer.
pub fn check_prop51(bundle: &LkBundle, opts: &Prop51Options) -> Result<Certificate> {
    let k = bundle.k;
    let s = setup(ordered_lk(bundle, &opts.order)?, k, opts.control)?;
    let pal = s.product.alphabet();
    let mut cert = Certificate::new(Kind::Prop51, Some(k), pal);
    if opts.timings {
        cert.enable_timings();
    }
    let t = Instant::now();
    let sys = prop51_system(&s.product, &s.rhs, &s.high, &opts.budget)?;
    cert.timing("assembly", t.elapsed());
    let partial = |stage: &str| Error::BudgetExhausted {
        stage: format!(
            "{stage} ({} unknowns, {} equations)",
            sys.matrix.n_cols(),
            sys.matrix.n_rows()
        ),
    };

    let t = Instant::now();
    let modular = modular_feasible(&sys.matrix, &sys.rhs);
    cert.timing("modular", t.elapsed());
    opts.budget.check("modular").map_err(|_| partial("modular pre-pass"))?;

    let t = Instant::now();
    let elim = Elimination::with_budget(opts.budget);
    let exact = elim
        .solve(&sys.matrix, &sys.rhs)
        .map_err(|_| partial("exact elimination"))?;
    cert.timing("exact", t.elapsed());

    let t = Instant::now();
    match exact {
        Some(x) => {
            let degree = s.rhs.degree() + 1;
            let xe = sys.element(pal, degree, &x).normalized(pal);
            if project(s.product.d(&xe).coords(), &s.high) != project(s.rhs.coords(), &s.high) {
                return Err(Error::VerificationFailed(
                    "solution does not reproduce the projected target".into(),
                ));
            }
            cert.status = Status::Feasible;
            cert.witness("solution", json!(xe.display(pal).to_string()));
        }
        None => {
            let y = elim
                .infeasibility_witness(&sys.matrix, &sys.rhs)
                .map_err(|_| partial("Farkas extraction"))?
                .ok_or_else(|| Error::VerificationFailed("no solution and no Farkas vector".into()))?;
            if !farkas_holds(&sys, &y) {
                return Err(Error::VerificationFailed("Farkas vector fails its checks".into()));
            }
            cert.status = Status::Infeasible;
            cert.witness("farkas", sparse_y(&sys, pal, &y));
        }
    }
    cert.timing("verification", t.elapsed());
    let exact_feasible = cert.status == Status::Feasible;
    if let Some(m) = modular {
        if m != exact_feasible {
            return Err(Error::VerificationFailed(
                "modular pre-pass disagrees with exact elimination".into(),
            ));
        }
    }

    cert.witness("presentation", json!(print_dgl(&s.lk)));
    cert.witness("control", json!(opts.control));
    cert.witness("rhs", json!(if opts.control { "d [[a,c],[a',c']]" } else { "d v" }));
    cert.witness(
        "unknowns",
        json!("bracket length 4 in L' (all generators except v); d is homogeneous of bracket length +1, so other lengths decouple"),
    );
    cert.witness(
        "equations",
        json!("coefficients of words containing a generator of filtration k"),
    );
    cert.witness("modular_status", json!(status_name(modular)));
    cert.dimension("degree", (s.rhs.degree() + 1) as u64);
    cert.dimension("unknowns", sys.matrix.n_cols() as u64);
    cert.dimension("equations", sys.matrix.n_rows() as u64);
    cert.dimension("nonzeros", sys.matrix.nnz() as u64);
    cert.dimension("generators", pal.len() as u64);
    cert.seal();
    Ok(cert)
}

/// Rebuilds the system from the embedded presentation and checks the stored
/// witness by dot products (or by substituting the stored solution back).
pub fn recheck_prop51(cert: &Certificate) -> Result<bool> {
    let k = cert.k.ok_or_else(|| Error::VerificationFailed("missing k".into()))?;
    let lk = parse_dgl(cert.str_witness("presentation")?)?.presentation;
    let control = cert.witnesses.get("control").and_then(Value::as_bool).unwrap_or(false);
    let s = setup(lk, k, control)?;
    let pal = s.product.alphabet();
    if pal.names() != cert.generator_order {
        return Ok(false);
    }
    match cert.status {
        Status::Infeasible => {
            let sys = prop51_system(&s.product, &s.rhs, &s.high, &Budget::unlimited())?;
            let Some(Value::Object(entries)) = cert.witnesses.get("farkas") else {
                return Ok(false);
            };
            let mut y = vec![Rational::zero(); sys.rows.len()];
            for (word, c) in entries {
                let w = word
                    .split(' ')
                    .map(|n| pal.require(n))
                    .collect::<Result<crate::lie::Word>>()?;
                let c = parse_rational(c.as_str().unwrap_or(""))?;
                // a word outside the system only meets zero columns
                if let Some(i) = sys.rows.get(&w) {
                    y[i] = c;
                } else if !c.is_zero() {
                    return Ok(false);
                }
            }
            Ok(farkas_holds(&sys, &y)
                && sys.matrix.n_cols() as u64 == cert.dimensions.get("unknowns").copied().unwrap_or(0))
        }
        Status::Feasible => {
            let x = parse_element(pal, cert.str_witness("solution")?)?;
            let in_span = x.weights().iter().all(|&w| w == UNKNOWN_WEIGHT);
            Ok(in_span && project(s.product.d(&x).coords(), &s.high) == project(s.rhs.coords(), &s.high))
        }
        _ => Ok(false),
    }
}
