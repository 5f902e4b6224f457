use super::*;
use crate::certificate::Status;
use crate::dgl::check_d_squared;
use crate::format::parse_element;
use crate::linalg::ratio;

#[test]
fn connected_sum_degrees() {
    let l = build_connected_sum(3).unwrap();
    let degs: Vec<u32> = l.alphabet().generators().iter().map(|g| g.degree).collect();
    assert_eq!(degs, vec![3, 7, 5, 11]);
    assert_eq!(l.alphabet().names(), vec!["a", "a2", "b", "c"]);
    let dc = parse_element(l.alphabet(), "-[b,b] - [a,a2]").unwrap();
    assert_eq!(l.differential_of("c").unwrap(), &dc);
    assert!(check_d_squared(&l, 12).passed());
    assert!(build_connected_sum(2).is_err());
}

#[test]
fn f_for_k3() {
    let l = build_connected_sum(3).unwrap();
    let f = compute_f(3, &l).unwrap();
    let al = l.alphabet();
    assert_eq!(
        f,
        al.named("a2")
            .unwrap()
            .bracket(&al.named("a2").unwrap())
            .scale(&ratio(1, 4))
    );
}

#[test]
fn product_model_s_generators() {
    let l = build_connected_sum(3).unwrap();
    let p = build_product_model(&l, &l.primed()).unwrap();
    let s: Vec<(String, u32)> = p
        .alphabet()
        .generators()
        .iter()
        .filter(|g| g.name.starts_with("s("))
        .map(|g| (g.name.clone(), g.degree))
        .collect();
    assert_eq!(
        s,
        vec![
            ("s(a*a')".to_string(), 7),
            ("s(a*b')".to_string(), 9),
            ("s(b*a')".to_string(), 9),
            ("s(b*b')".to_string(), 11)
        ]
    );
    assert!(build_product_model(&l.without_filtration(), &l).is_err());
}

#[test]
fn lk_k3_structure() {
    let b = build_lk(3).unwrap();
    assert_eq!(b.n(), 13);
    assert_eq!(b.lk.alphabet().degree(b.lk.alphabet().require("v").unwrap()), 28);
    assert!(check_d_squared(&b.lk, 28).passed());
    let greedy = infer_decomposition(&b.lk).unwrap();
    assert_eq!(greedy.length(), 4);
    assert_eq!(b.filtration.length(), 4);
}

#[test]
fn cat_certificate_k3() {
    let b = build_lk(3).unwrap();
    let cert = cat_certificate(&b).unwrap();
    assert_eq!(cert.status, Status::Pass);
    assert_eq!(cert.dimensions["length_after"], 3);
    assert_eq!(cert.dimensions["length_before"], 4);
    assert!(recheck_cat(&cert).unwrap());
    let stages = &cert.witnesses["filtration_after"];
    assert_eq!(stages["w"], 2);
    assert_eq!(stages["v"], 3);
}

#[test]
fn claim_k3() {
    let b = build_lk(3).unwrap();
    let cert = verify_claim_identity(&b).unwrap();
    assert_eq!(cert.status, Status::Pass, "{}", cert.to_json());
}

#[test]
fn prop51_k3_infeasible_and_control_feasible() {
    let b = build_lk(3).unwrap();
    let cert = check_prop51(&b, &Prop51Options::default()).unwrap();
    assert_eq!(cert.status, Status::Infeasible);
    assert_eq!(cert.witnesses["modular_status"], "INFEASIBLE");
    assert!(recheck_prop51(&cert).unwrap());
    let control = check_prop51(
        &b,
        &Prop51Options {
            control: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(control.status, Status::Feasible);
    assert!(recheck_prop51(&control).unwrap());
    eprintln!("{:?}", cert.dimensions);
}

#[test]
fn prop51_stable_under_reordering() {
    let b = build_lk(3).unwrap();
    let mut order = b.product.alphabet().names();
    order.reverse();
    let cert = check_prop51(
        &b,
        &Prop51Options {
            order: Some(order.clone()),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(cert.status, Status::Infeasible);
    assert_eq!(cert.generator_order, order);
    assert!(crate::dgl::recheck(&cert).unwrap());
}

#[test]
fn prop51_tampered_farkas_fails() {
    let b = build_lk(3).unwrap();
    let mut cert = check_prop51(&b, &Prop51Options::default()).unwrap();
    let serde_json::Value::Object(mut y) = cert.witnesses["farkas"].clone() else {
        panic!("farkas map");
    };
    let key = y.keys().next().unwrap().clone();
    y.insert(key, serde_json::json!("12345"));
    cert.witness("farkas", serde_json::Value::Object(y));
    cert.seal();
    assert!(!crate::dgl::recheck(&cert).unwrap());
}

#[test]
fn claim_recheck_and_ideal_class() {
    let b = build_lk(3).unwrap();
    let cert = verify_claim_identity(&b).unwrap();
    assert!(crate::dgl::recheck(&cert).unwrap());
    assert!(rho2_nonzero(&b.product, 3).unwrap());
}
