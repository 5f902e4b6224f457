//! Independent reference computations: a plain tensor-algebra expansion and
//! Gaussian elimination, sharing no code with the library's Lie routines.

#![allow(dead_code)]

use std::collections::BTreeMap;

use dglforge::linalg::Rational;
use num_traits::{One, Zero};

pub type Poly = BTreeMap<Vec<usize>, Rational>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn letter(i: usize) -> Poly {
    BTreeMap::from([(vec![i], Rational::one())])
}

pub fn word_degree(degrees: &[u32], w: &[usize]) -> u32 {
    w.iter().map(|&i| degrees[i]).sum()
}

fn mul(x: &Poly, y: &Poly) -> Poly {
    let mut out = Poly::new();
    for (u, a) in x {
        for (v, b) in y {
            let mut w = u.clone();
            w.extend_from_slice(v);
            *out.entry(w).or_insert_with(Rational::zero) += a * b;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn add(x: &Poly, y: &Poly, c: &Rational) -> Poly {
    let mut out = x.clone();
    for (w, b) in y {
        *out.entry(w.clone()).or_insert_with(Rational::zero) += c * b;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Degree of a homogeneous polynomial (0 for zero).
pub fn degree(degrees: &[u32], x: &Poly) -> u32 {
    x.keys().next().map(|w| word_degree(degrees, w)).unwrap_or(0)
}

/// `xy - (-1)^{|x||y|} yx` for homogeneous `x`, `y`.
pub fn bracket(degrees: &[u32], x: &Poly, y: &Poly) -> Poly {
    let (dx, dy) = (degree(degrees, x), degree(degrees, y));
    let sign = if (dx * dy) % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    };
    add(&mul(x, y), &mul(y, x), &sign)
}

/// Rank of a list of polynomials by row reduction on their coefficient rows.
pub fn rank(vectors: &[Poly]) -> usize {
    let mut basis: Vec<Poly> = Vec::new();
    for v in vectors {
        if let Some(r) = reduce(&basis, v) {
            basis.push(r);
        }
    }
    basis.len()
}

/// The residual of `v` against an echelon list (leading word = first key),
/// or `None` if it reduces to zero.
pub fn reduce(basis: &[Poly], v: &Poly) -> Option<Poly> {
    let mut r = v.clone();
    loop {
        let (lead, c) = r.iter().next().map(|(w, c)| (w.clone(), c.clone()))?;
        match basis.iter().find(|b| b.keys().next() == Some(&lead)) {
            Some(b) => {
                let bc = b[&lead].clone();
                r = add(&r, b, &(-(c / bc)));
            }
            None => return Some(r),
        }
    }
}

/// Reduced echelon insertion keeping leading words distinct.
pub fn insert(basis: &mut Vec<Poly>, v: &Poly) -> bool {
    match reduce(basis, v) {
        Some(r) => {
            basis.push(r);
            true
        }
        None => false,
    }
}

/// Dimensions of the free graded Lie algebra in degrees `1..=max` by closure:
/// degree `n` is spanned by the generators of degree `n` and all brackets of
/// spanning elements of degrees `i` and `n - i`.
pub fn lie_dimensions(degrees: &[u32], max: u32) -> Vec<usize> {
    let mut spans: Vec<Vec<Poly>> = vec![Vec::new(); max as usize + 1];
    for n in 1..=max {
        let mut basis = Vec::new();
        for (i, &d) in degrees.iter().enumerate() {
            if d == n {
                insert(&mut basis, &letter(i));
            }
        }
        for i in 1..n {
            for x in &spans[i as usize] {
                for y in &spans[(n - i) as usize] {
                    insert(&mut basis, &bracket(degrees, x, y));
                }
            }
        }
        spans[n as usize] = basis;
    }
    spans[1..].iter().map(Vec::len).collect()
}

/// The expansion of a library element, re-keyed for comparison.
pub fn from_coords(c: &dglforge::lie::Coords) -> Poly {
    c.iter()
        .map(|(w, x)| (w.iter().map(|&g| g as usize).collect(), x.clone()))
        .collect()
}
