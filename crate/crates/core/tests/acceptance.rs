//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use dglforge::certificate::Status;
use dglforge::constructions::{build_lk, cat_certificate, check_prop51, compute_f, Prop51Options};
use dglforge::dgl::random::{random_filtered_dgl, RandomDglConfig};
use dglforge::dgl::{
    check_d_squared, homology_dimensions, infer_decomposition, minimalize, substitute_generators, substitution_by_name,
    DglPresentation,
};
use dglforge::format::{parse_dgl, parse_element, parse_rational};
use dglforge::lie::{
    multidegree_component, spanning_set, spanning_set_with, Alphabet, Generator, LieElement, SpanSpec,
};
use dglforge::quillen::{lstar_a, lstar_b};
use dglforge::Budget;
use num_traits::Zero;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn el(p: &DglPresentation, s: &str) -> Result<LieElement, String> {
    e(parse_element(p.alphabet(), s))
}

fn lstar_reproduction() -> Outcome {
    for k in 3..=6u32 {
        let l = e(lstar_a(k))?.presentation;
        for i in 1..=k {
            let g = l.alphabet().get((i - 1) as u16);
            ensure(g.degree == 4 * i - 1, format!("|a{i}| = {} for k = {k}", g.degree))?;
        }
        for (name, expected) in [("a2", "[a,a]"), ("a3", "[a,a2]"), ("a4", "[a2,a2] + 4[a,a3]")] {
            if l.alphabet().id(name).is_some() {
                ensure(
                    e(l.differential_of(name))? == &el(&l, expected)?,
                    format!("d {name} != {expected} for k = {k}"),
                )?;
            }
        }
        let b = e(lstar_b(k))?.presentation;
        ensure(
            e(b.differential_of("b2"))? == &el(&b, "[b,b]")?,
            format!("d b2 for k = {k}"),
        )?;
        ensure(b.alphabet().degree(0) == 2 * k - 1, "|b|")?;
    }
    Ok("k = 3..6".into())
}

fn homology_concentration() -> Outcome {
    for k in [3u32, 4] {
        let p = e(lstar_a(k - 1))?.presentation;
        let h = e(homology_dimensions(&p, 4 * k, Budget::unlimited()))?;
        for (i, &dim) in h.iter().enumerate() {
            let n = i as u32 + 1;
            let want = usize::from(n == 3 || n == 4 * k - 2);
            ensure(
                dim == want,
                format!("k = {k}: H_{n} has dimension {dim}, expected {want}"),
            )?;
        }
    }
    Ok("k = 3, 4 through degree 4k".into())
}

fn construction_soundness() -> Outcome {
    for k in [3u32, 4, 5] {
        let b = e(build_lk(k))?;
        ensure(
            check_d_squared(&b.lk, 8 * k + 5).passed(),
            format!("d^2 fails for k = {k}"),
        )?;
        ensure(b.lk.d(&b.alpha_hat) == b.alpha, "d alpha_hat")?;
        ensure(b.lk.d(b.lk.differential(b.lk.len() as u16 - 1)).is_zero(), "d d v")?;
    }
    Ok("k = 3, 4, 5 through degree 8k+5".into())
}

fn f_witness() -> Outcome {
    let b = e(build_lk(3))?;
    let l = &b.l;
    let degrees: Vec<u32> = l.alphabet().generators().iter().map(|g| g.degree).collect();
    // the bracket-length-two part of degree 14 on a, a2 is spanned by [a2,a2]
    let pairs: Vec<Poly> = [(0, 0), (0, 1), (1, 1)]
        .into_iter()
        .filter(|&(i, j)| degrees[i] + degrees[j] == 14)
        .map(|(i, j)| bracket(&degrees, &letter(i), &letter(j)))
        .collect();
    ensure(rank(&pairs) == 1, "degree 14 quadratic space is not one-dimensional")?;
    let f = e(compute_f(3, l))?;
    let a2a2 = bracket(&degrees, &letter(1), &letter(1));
    ensure(
        from_coords(f.coords()) == add(&Poly::new(), &a2a2, &q(1, 4)),
        "f != 1/4 [a2,a2]",
    )?;
    // d(1/4 [a2,a2]) = 1/4 ([[a,a],a2] - [a2,[a,a]]) = [a,[a,a2]]
    let aa = bracket(&degrees, &letter(0), &letter(0));
    let df = add(
        &bracket(&degrees, &aa, &letter(1)),
        &bracket(&degrees, &letter(1), &aa),
        &q(-1, 1),
    );
    let df = add(&Poly::new(), &df, &q(1, 4));
    let target = bracket(&degrees, &letter(0), &bracket(&degrees, &letter(0), &letter(1)));
    ensure(
        df == target && from_coords(l.d(&f).coords()) == target,
        "d f != [a,[a,a2]]",
    )?;
    for k in [4u32, 5] {
        let b = e(build_lk(k))?;
        let a = e(b.l.alphabet().named("a"))?;
        let dak = e(lstar_a(k))?.presentation.differential(k as u16 - 1).clone();
        ensure(b.l.d(&b.f) == a.bracket(&dak), format!("d f != [a, d a_k] for k = {k}"))?;
        ensure(b.f.degree() == 4 * k + 2, "|f|")?;
    }
    Ok("f = 1/4 [a2,a2] for k = 3; d f = [a, d a_k] for k = 4, 5".into())
}

fn gamma_witness() -> Outcome {
    for k in [3u32, 4] {
        let b = e(build_lk(k))?;
        let al = b.product.alphabet();
        ensure(
            b.product.d(&b.gamma) == b.alpha.bracket(&b.alpha_p),
            format!("d gamma for k = {k}"),
        )?;
        let allowed = |g: u16| {
            let gen = al.get(g);
            gen.filtration == Some(1) || gen.name.starts_with("s(")
        };
        ensure(b.gamma.lies_in(&allowed), "gamma leaves W(1) + W'(1) + s(...)")?;
        ensure(
            b.gamma.weights().iter().all(|&w| w == 5),
            "gamma has terms outside bracket length 5",
        )?;
        ensure(b.gamma.degree() == 8 * k + 3, "|gamma|")?;
    }
    Ok("k = 3, 4".into())
}

fn cat_gap() -> Outcome {
    let mut lengths = Vec::new();
    for k in [3u32, 4] {
        let b = e(build_lk(k))?;
        let before = infer_decomposition(&b.lk).ok_or("no greedy decomposition")?.length();
        ensure(before == k + 1, format!("greedy length {before} for k = {k}"))?;
        let cert = e(cat_certificate(&b))?;
        ensure(cert.status == Status::Pass, "cat certificate did not pass")?;
        let q = e(parse_dgl(cert.witnesses["presentation"].as_str().unwrap_or("")))?.presentation;
        let after = infer_decomposition(&q)
            .ok_or("no decomposition after substitution")?
            .length();
        ensure(after <= k, format!("length {after} after substitution for k = {k}"))?;
        // d v' = gamma + (-1)^n [w', alpha'] with n odd
        let expected = &b.gamma - &e(q.alphabet().named("w"))?.bracket(&b.alpha_p);
        ensure(e(q.differential_of("v"))? == &expected, "d v' identity")?;
        ensure(b.n() % 2 == 1, "n is odd")?;
        lengths.push(format!("k={k}: {before} -> {after}"));
    }
    Ok(lengths.join(", "))
}

fn prop51() -> Outcome {
    let b = e(build_lk(3))?;
    let t = Instant::now();
    let cert = e(check_prop51(&b, &Prop51Options::default()))?;
    ensure(cert.status == Status::Infeasible, format!("status {:?}", cert.status))?;
    let al = b.product.alphabet();
    let Some(Value::Object(y)) = cert.witnesses.get("farkas") else {
        return Err("no Farkas vector".into());
    };
    let y: BTreeMap<Vec<usize>, _> = y
        .iter()
        .map(|(w, c)| {
            let word = w.split(' ').map(|n| al.id(n).unwrap() as usize).collect();
            (word, parse_rational(c.as_str().unwrap()).unwrap())
        })
        .collect();
    let dot = |x: &Poly| {
        x.iter()
            .filter_map(|(w, c)| y.get(w).map(|yc| c * yc))
            .fold(dglforge::linalg::Rational::zero(), |a, t| a + t)
    };
    // every Farkas entry sits on a word containing c or c'
    let (c, cp) = (al.id("c").unwrap() as usize, al.id("c'").unwrap() as usize);
    ensure(
        y.keys().all(|w| w.contains(&c) || w.contains(&cp)),
        "Farkas entry outside the equations",
    )?;
    let trees = spanning_set_with(al, 28, &SpanSpec::weight(4));
    for t in &trees {
        let x = LieElement::from_tree(al, t.clone());
        ensure(dot(&from_coords(b.product.d(&x).coords())).is_zero(), "y . d(x) != 0")?;
    }
    let dv = b.lk.differential(b.lk.len() as u16 - 1);
    ensure(!dot(&from_coords(dv.coords())).is_zero(), "y . d v = 0")?;
    ensure(cert.dimensions["unknowns"] == trees.len() as u64, "recorded dimensions")?;

    let control = e(check_prop51(
        &b,
        &Prop51Options {
            control: true,
            ..Default::default()
        },
    ))?;
    ensure(control.status == Status::Feasible, "control is not FEASIBLE")?;
    let x = el(&b.product, control.witnesses["solution"].as_str().unwrap_or(""))?;
    let x0 = el(&b.product, "[[a,c],[a',c']]")?;
    let diff = b.product.d(&(&x - &x0));
    let low = |g: u16| al.get(g).filtration.unwrap() < 3;
    ensure(diff.lies_in(&low), "control witness does not reproduce d x0")?;
    Ok(format!(
        "INFEASIBLE, {} unknowns x {} equations, {} Farkas entries, {:.1}s; control FEASIBLE",
        cert.dimensions["unknowns"],
        cert.dimensions["equations"],
        y.len(),
        t.elapsed().as_secs_f64()
    ))
}

fn section2() -> Outcome {
    let p = e(parse_dgl(
        "gen a 1\ngen b 3\ngen e 4\ngen f 6\nd b = [a,a]\nd f = [a,e] + [a,[a,b]]\n",
    ))?
    .presentation;
    let before = infer_decomposition(&p).ok_or("no decomposition")?.length();
    let subst = e(substitution_by_name(&p, &[("e", el(&p, "e + [a,b]")?)]))?;
    let q = e(substitute_generators(&p, &subst))?;
    let after = infer_decomposition(&q).ok_or("no decomposition after")?.length();
    ensure(before == 3 && after == 2, format!("lengths {before} -> {after}"))?;
    Ok("greedy length 3 -> 2".into())
}

fn multilinear() -> Outcome {
    let degrees = [3u32, 11, 3, 11];
    let al = e(Alphabet::from_generators(
        ["a", "c", "a'", "c'"]
            .iter()
            .zip(degrees)
            .map(|(n, d)| Generator::new(*n, d)),
    ))?;
    let basis = e(multidegree_component(&al, &[0, 1, 2, 3]))?;
    let polys: Vec<Poly> = basis
        .iter()
        .map(|t| from_coords(LieElement::from_tree(&al, t.clone()).coords()))
        .collect();
    // oracle: all bracketings of the four letters in every order span the component
    let mut all = Vec::new();
    let perms = permutations(&[0, 1, 2, 3]);
    for p in &perms {
        for poly in bracketings(&degrees, p) {
            all.push(poly);
        }
    }
    let dim = rank(&all);
    ensure(
        basis.len() == 6 && rank(&polys) == 6 && dim == 6,
        format!("dimension {} (oracle {dim})", basis.len()),
    )?;
    let mut both = all.clone();
    both.extend(polys);
    ensure(rank(&both) == 6, "basis outside the oracle span")?;
    Ok("6 on {a,c,a',c'}".into())
}

fn permutations(xs: &[usize]) -> Vec<Vec<usize>> {
    if xs.len() <= 1 {
        return vec![xs.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..xs.len() {
        let mut rest = xs.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn bracketings(degrees: &[u32], letters: &[usize]) -> Vec<Poly> {
    if letters.len() == 1 {
        return vec![letter(letters[0])];
    }
    let mut out = Vec::new();
    for split in 1..letters.len() {
        for l in bracketings(degrees, &letters[..split]) {
            for r in bracketings(degrees, &letters[split..]) {
                out.push(bracket(degrees, &l, &r));
            }
        }
    }
    out
}

fn minimal_models() -> Outcome {
    let cfg = RandomDglConfig::default();
    let cap = 15;
    let mut with_linear = 0;
    let seeds = 0..24u64;
    for seed in seeds.clone() {
        let p = random_filtered_dgl(seed, &cfg);
        let k = p.filtration().ok_or("unfiltered instance")?.length();
        ensure(k <= 3, "filtration longer than 3")?;
        if !p.is_minimal() {
            with_linear += 1;
        }
        let m = e(minimalize(&p, cap))?;
        ensure(m.presentation.is_minimal(), format!("seed {seed}: output not minimal"))?;
        e(m.check_chain_map(&p))?;
        e(m.check_filtration_properties()).map_err(|x| format!("seed {seed}: {x}"))?;
        let hp = e(homology_dimensions(&p, cap, Budget::unlimited()))?;
        let hm = e(homology_dimensions(&m.presentation, cap, Budget::unlimited()))?;
        ensure(hp == hm, format!("seed {seed}: homology {hp:?} vs {hm:?}"))?;
    }
    ensure(
        with_linear >= 10,
        format!("only {with_linear} instances have a linear part"),
    )?;
    Ok(format!(
        "{} instances ({with_linear} with linear part), cap {cap}",
        seeds.count()
    ))
}

fn oracle_equivalence() -> Outcome {
    let cases: [(&[u32], u32); 6] = [
        (&[1], 20),
        (&[2, 3], 20),
        (&[3, 4, 5], 20),
        (&[1, 2], 12),
        (&[2, 3, 3], 16),
        (&[1, 1, 2], 8),
    ];
    for (degrees, max) in cases {
        let al = e(Alphabet::from_generators(
            degrees
                .iter()
                .enumerate()
                .map(|(i, &d)| Generator::new(format!("x{i}"), d)),
        ))?;
        let oracle = lie_dimensions(degrees, max);
        for n in 1..=max {
            let got = spanning_set(&al, n, None).len();
            ensure(
                got == oracle[n as usize - 1],
                format!("{degrees:?} degree {n}: {got} vs {}", oracle[n as usize - 1]),
            )?;
        }
    }
    Ok("6 alphabets, degrees up to 20".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("lstar reproduction", lstar_reproduction),
        ("homology concentration", homology_concentration),
        ("construction soundness", construction_soundness),
        ("f witness", f_witness),
        ("gamma witness", gamma_witness),
        ("cat/Cl gap certificates", cat_gap),
        ("obstruction system infeasible", prop51),
        ("greedy length not invariant", section2),
        ("multilinear dimension", multilinear),
        ("minimal model properties", minimal_models),
        ("spanning set oracle", oracle_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
