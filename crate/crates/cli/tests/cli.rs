use std::path::Path;
use std::process::Command;

use dglforge::certificate::{Certificate, Status};
use dglforge::dgl::check_d_squared;
use dglforge::format::parse_dgl;
use dglforge_cli::{run, EXIT_BUDGET, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};
use tempfile::TempDir;

fn dglforge(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("dglforge").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

fn cert(p: &str) -> Certificate {
    Certificate::from_json(&std::fs::read_to_string(p).unwrap()).unwrap()
}

const SECTION2: &str = "# example with a non-invariant greedy length\ngen a 1\ngen b 3\ngen e 4\ngen f 6\nd b = [a,a]\nd e = 0\nd f = [a,e] + [a,[a,b]]\n";

#[test]
fn build_lk_file_passes_d_squared() {
    let dir = TempDir::new().unwrap();
    let lk = path(&dir, "lk3.dgl");
    assert_eq!(dglforge(&["build-lk", "--k", "3", "--out", &lk]).0, EXIT_OK);
    let p = parse_dgl(&std::fs::read_to_string(&lk).unwrap()).unwrap().presentation;
    assert_eq!(p.len(), 13);
    assert!(check_d_squared(&p, 29).passed());
    let (code, out) = dglforge(&["check-d2", &lk, "--max-degree", "29"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("PASS"));
    let (code, out) = dglforge(&["decompose", &lk]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("length 4\n"), "{out}");
    let (code, out) = dglforge(&["decompose", &lk, "--given"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("length 4\n"), "{out}");
}

#[test]
fn prop51_certificate_and_recheck() {
    let dir = TempDir::new().unwrap();
    let json = path(&dir, "cert.json");
    let (code, out) = dglforge(&["check-prop51", "--k", "3", "--json", &json]);
    assert_eq!(code, EXIT_OK, "{out}");
    let c = cert(&json);
    assert_eq!(c.status, Status::Infeasible);
    assert!(c.timings.is_none());
    assert_eq!(dglforge(&["recheck", &json]).0, EXIT_OK);

    let text = std::fs::read_to_string(&json).unwrap();
    let keys: Vec<usize> = [
        "\"kind\"",
        "\"k\"",
        "\"generator_order\"",
        "\"status\"",
        "\"witnesses\"",
        "\"dimensions\"",
        "\"timings\"",
        "\"tool_version\"",
    ]
    .iter()
    .map(|k| text.find(k).unwrap())
    .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));

    let tampered = write(&dir, "bad.json", &text.replace("\"1/2\"", "\"3/2\""));
    assert_ne!(text, std::fs::read_to_string(&tampered).unwrap());
    assert_eq!(dglforge(&["recheck", &tampered]).0, EXIT_NEGATIVE);

    let json = path(&dir, "control.json");
    assert_eq!(
        dglforge(&["check-prop51", "--k", "3", "--control", "--json", &json]).0,
        EXIT_OK
    );
    assert_eq!(cert(&json).status, Status::Feasible);
    assert_eq!(dglforge(&["recheck", &json]).0, EXIT_OK);
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.json"), path(&dir, "b.json"));
    assert_eq!(dglforge(&["cat-cert", "--k", "3", "--json", &a]).0, EXIT_OK);
    assert_eq!(dglforge(&["cat-cert", "--k", "3", "--json", &b]).0, EXIT_OK);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(dglforge(&["recheck", &a]).0, EXIT_OK);
    assert_eq!(
        dglforge(&["build-lk", "--k", "3"]).1,
        dglforge(&["build-lk", "--k", "3"]).1
    );
}

#[test]
fn section2_substitution() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "s2.dgl", SECTION2);
    let (code, out) = dglforge(&["decompose", &file]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("length 3\n"));
    let out_file = path(&dir, "s2b.dgl");
    let json = path(&dir, "sub.json");
    let (code, out) = dglforge(&[
        "substitute",
        &file,
        "--map",
        "e=e+[a,b]",
        "--out",
        &out_file,
        "--json",
        &json,
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.contains("length before: 3") && out.contains("length after: 2"),
        "{out}"
    );
    let (_, out) = dglforge(&["decompose", &out_file]);
    assert!(out.starts_with("length 2\n"));
    assert_eq!(dglforge(&["recheck", &json]).0, EXIT_OK);
    assert_eq!(dglforge(&["substitute", &file, "--map", "b=2b"]).0, EXIT_NEGATIVE);
}

#[test]
fn boundaries_and_homology() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "a3.dgl",
        "gen a 3\ngen a2 7\ngen a3 11\nd a2 = [a,a]\nd a3 = [a,a2]\n",
    );
    let json = path(&dir, "b.json");
    let (code, out) = dglforge(&[
        "solve-boundary",
        &file,
        "--target",
        "[a,[a,a2]]",
        "--max-weight",
        "2",
        "--json",
        &json,
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("x = "), "{out}");
    assert_eq!(dglforge(&["recheck", &json]).0, EXIT_OK);
    let (_, out) = dglforge(&["solve-boundary", &file, "--target", "[a,[a,a2]]", "--letters", "a,a2"]);
    assert!(out.starts_with("x = 1/4 [a2,a2]\n"), "{out}");
    let a2 = write(&dir, "a2.dgl", "gen a 3\ngen a2 7\nd a2 = [a,a]\n");
    assert_eq!(
        dglforge(&["solve-boundary", &a2, "--target", "[a,a2]"]).0,
        EXIT_NEGATIVE
    );
    assert_eq!(dglforge(&["solve-boundary", &a2, "--target", "a2"]).0, EXIT_USAGE);
    let json = path(&dir, "h.json");
    let (code, out) = dglforge(&["homology", &a2, "--max-degree", "12", "--json", &json]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("H_3 = 1") && out.contains("H_10 = 1"), "{out}");
    let h: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(h["homology"]["10"], 1);
}

#[test]
fn lstar_and_minimalize() {
    let (code, out) = dglforge(&["build-lstar", "--k", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.contains("d a4 = [a2,a2] + 4 [a,a3]") || out.contains("d a4 = 4 [a,a3] + [a2,a2]"),
        "{out}"
    );
    let (_, out) = dglforge(&["build-lstar", "--family", "b", "--k", "3"]);
    assert!(out.contains("gen b 5") && out.contains("d b2 = [b,b]"), "{out}");

    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "m.dgl",
        "gen a 3 filt 1\ngen u 6 filt 1\ngen w 7 filt 2\ngen z 14 filt 3\nd w = u - [a,a]\nd z = [u,w] - [[a,a],w]\n",
    );
    let json = path(&dir, "m.json");
    let (code, out) = dglforge(&["minimalize", &file, "--max-degree", "15", "--json", &json]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(
        out.contains("gen a 3") && out.contains("gen z 14") && !out.contains("gen u"),
        "{out}"
    );
    assert_eq!(dglforge(&["recheck", &json]).0, EXIT_OK);
    assert_eq!(dglforge(&["minimalize", &file, "--max-degree", "10"]).0, EXIT_USAGE);
}

#[test]
fn usage_and_parse_errors() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.dgl", "gen a 3\ngen b 4\nd b = [a,a] + x\n");
    assert_eq!(dglforge(&["check-d2", &bad]).0, EXIT_USAGE);
    let bad = write(&dir, "deg.dgl", "gen a 3\ngen b 5\nd b = [a,a]\n");
    assert_eq!(dglforge(&["check-d2", &bad]).0, EXIT_USAGE);
    assert_eq!(dglforge(&["check-d2", &path(&dir, "missing.dgl")]).0, EXIT_USAGE);
    assert_eq!(dglforge(&["no-such-command"]).0, EXIT_USAGE);
    assert_eq!(dglforge(&["build-lk", "--k", "2"]).0, EXIT_USAGE);
    let not_d2 = write(&dir, "nd2.dgl", "gen a 3\ngen b 4\ngen c 8\nd b = a\nd c = [b,a]\n");
    assert_eq!(dglforge(&["check-d2", &not_d2]).0, EXIT_NEGATIVE);
}

#[test]
fn budget_exhaustion() {
    assert_eq!(
        dglforge(&["check-prop51", "--k", "3", "--budget-seconds", "0"]).0,
        EXIT_BUDGET
    );
}

#[test]
fn binary_reports_parse_location() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.dgl", "gen a 3\ngen b 4\nd b = [a,a] + x\n");
    let out = Command::new(env!("CARGO_BIN_EXE_dglforge"))
        .args(["--quiet", "check-d2", &bad])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.dgl:3:"), "{err}");
    assert!(out.stdout.is_empty());
    assert!(Path::new(&bad).exists());
}
