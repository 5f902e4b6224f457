mod common;

use common::*;
use dglforge::lie::{spanning_set, Alphabet, Generator, LieElement};

fn alphabet(degrees: &[u32]) -> Alphabet {
    Alphabet::from_generators(
        degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| Generator::new(format!("x{i}"), d)),
    )
    .unwrap()
}

fn check(degrees: &[u32], max: u32) {
    let al = alphabet(degrees);
    let expected = lie_dimensions(degrees, max);
    for n in 1..=max {
        let trees = spanning_set(&al, n, None);
        assert_eq!(trees.len(), expected[n as usize - 1], "degrees {degrees:?}, degree {n}");
        let polys: Vec<Poly> = trees
            .iter()
            .map(|t| from_coords(LieElement::from_tree(&al, t.clone()).coords()))
            .collect();
        assert_eq!(rank(&polys), trees.len(), "spanning set is dependent in degree {n}");
    }
}

#[test]
fn one_generator() {
    check(&[1], 20);
    check(&[2], 20);
    check(&[3], 20);
}

#[test]
fn two_generators() {
    check(&[2, 3], 20);
    check(&[3, 5], 20);
    check(&[1, 2], 12);
    check(&[1, 1], 9);
}

#[test]
fn three_generators() {
    check(&[3, 4, 5], 20);
    check(&[2, 3, 3], 16);
}

#[test]
fn bracket_expansion_agrees() {
    let degrees = [1, 2, 3];
    let al = alphabet(&degrees);
    let x: Vec<LieElement> = (0..3).map(|i| al.elem(i)).collect();
    let p: Vec<Poly> = (0..3).map(letter).collect();
    let lib = x[0].bracket(&x[1].bracket(&x[2])).bracket(&x[0]);
    let oracle = bracket(
        &degrees,
        &bracket(&degrees, &p[0], &bracket(&degrees, &p[1], &p[2])),
        &p[0],
    );
    assert_eq!(from_coords(lib.coords()), oracle);
}
