//! The Quillen functor on finite-dimensional graded commutative algebras:
//! the free dgl on the desuspended dual with quadratic differential dual to
//! the multiplication.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::dgl::DglPresentation;
use crate::error::{Error, Result};
use crate::lie::{Alphabet, BracketTree, GenId, Generator, LieElement};
use crate::linalg::Rational;

type Product = Vec<(usize, Rational)>;

/// Basis element 0 is the unit; products with it are implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedAlgebra {
    names: Vec<String>,
    degrees: Vec<u32>,
    products: BTreeMap<(usize, usize), Product>,
}

impl TruncatedAlgebra {
    /// `basis` excludes the unit; `products[(i, j)]` (1-based indices into the
    /// augmentation basis) lists the nonzero products.
    pub fn new(basis: Vec<(String, u32)>, products: BTreeMap<(usize, usize), Product>) -> Result<Self> {
        let mut names = vec!["1".to_string()];
        let mut degrees = vec![0];
        for (n, d) in basis {
            if d == 0 {
                return Err(Error::InvalidAlgebra(format!("{n} has degree 0")));
            }
            names.push(n);
            degrees.push(d);
        }
        let a = Self {
            names,
            degrees,
            products,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn product(&self, i: usize, j: usize) -> Product {
        if i == 0 {
            return vec![(j, Rational::one())];
        }
        if j == 0 {
            return vec![(i, Rational::one())];
        }
        self.products.get(&(i, j)).cloned().unwrap_or_default()
    }

    fn mul_vec(&self, x: &Product, j: usize) -> BTreeMap<usize, Rational> {
        let mut out = BTreeMap::new();
        for (i, c) in x {
            for (k, d) in self.product(*i, j) {
                *out.entry(k).or_insert_with(Rational::zero) += c * d;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        for (&(i, j), prod) in &self.products {
            if i == 0 || j == 0 || i >= n || j >= n {
                return Err(Error::InvalidAlgebra(format!("product index ({i},{j}) out of range")));
            }
            for (k, _) in prod {
                if *k >= n || self.degrees[*k] != self.degrees[i] + self.degrees[j] {
                    return Err(Error::InvalidAlgebra(format!(
                        "{}*{} is not homogeneous",
                        self.names[i], self.names[j]
                    )));
                }
            }
        }
        for i in 1..n {
            for j in 1..n {
                let sign = if self.degrees[i] % 2 == 1 && self.degrees[j] % 2 == 1 {
                    -Rational::one()
                } else {
                    Rational::one()
                };
                let mut lhs: BTreeMap<usize, Rational> = self.product(i, j).into_iter().collect();
                lhs.retain(|_, v| !v.is_zero());
                let mut rhs: BTreeMap<usize, Rational> =
                    self.product(j, i).into_iter().map(|(k, c)| (k, c * &sign)).collect();
                rhs.retain(|_, v| !v.is_zero());
                if lhs != rhs {
                    return Err(Error::InvalidAlgebra(format!(
                        "{}*{} is not graded commutative",
                        self.names[i], self.names[j]
                    )));
                }
                for k in 1..n {
                    let left = self.mul_vec(&self.product(i, j), k);
                    let jk: Product = self.product(j, k);
                    let mut right: BTreeMap<usize, Rational> = BTreeMap::new();
                    for (m, c) in jk {
                        for (r, d) in self.product(i, m) {
                            *right.entry(r).or_insert_with(Rational::zero) += &c * d;
                        }
                    }
                    right.retain(|_, v| !v.is_zero());
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "product not associative on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `Q[u]/u^power` with `|u| = gen_degree` (even).
pub fn truncated_monogenic(gen_degree: u32, power: u32) -> Result<TruncatedAlgebra> {
    if gen_degree == 0 || gen_degree % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "generator degree {gen_degree} must be even and positive"
        )));
    }
    if power < 2 {
        return Err(Error::InvalidParameter(format!("power {power} must be at least 2")));
    }
    let top = power as usize - 1;
    let basis = (1..=top)
        .map(|i| {
            (
                if i == 1 { "u".to_string() } else { format!("u^{i}") },
                gen_degree * i as u32,
            )
        })
        .collect();
    let mut products = BTreeMap::new();
    for i in 1..=top {
        for j in 1..=top {
            if i + j <= top {
                products.insert((i, j), vec![(i + j, Rational::one())]);
            }
        }
    }
    TruncatedAlgebra::new(basis, products)
}

/// Output of the Quillen functor together with the dual-basis scaling used.
#[derive(Clone, Debug)]
pub struct Lstar {
    pub presentation: DglPresentation,
    /// Generator `i` is `scaling[i]` times the desuspended dual basis vector.
    pub scaling: Vec<Rational>,
}

fn content(values: impl Iterator<Item = Rational>) -> Option<Rational> {
    let mut num = num_bigint::BigInt::zero();
    let mut den = num_bigint::BigInt::one();
    let mut any = false;
    for v in values {
        if v.is_zero() {
            continue;
        }
        any = true;
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    any.then(|| Rational::new(num.abs(), den))
}

/// The free dgl on `s^{-1}` of the dual of the augmentation ideal, with
/// differential dual to the product: for dual basis vectors,
/// `d x_n = 1/2 sum_{i,j} (-1)^{|e_i|} c^n_{ij} [x_i, x_j]` where
/// `e_i e_j = sum_n c^n_{ij} e_n`. Each generator is then rescaled (by a
/// positive factor, in order of degree) so its differential has coprime
/// integer coefficients in the Lyndon basis.
///
/// Generators are named `prefix`, `prefix2`, `prefix3`, ... following the
/// basis order of `a`.
pub fn lstar(a: &TruncatedAlgebra, prefix: &str) -> Result<Lstar> {
    let n = a.dim();
    let mut alphabet = Alphabet::new();
    for i in 1..n {
        let deg = a.degree(i);
        if deg < 2 {
            return Err(Error::InvalidAlgebra(format!(
                "{} has degree {deg}; the algebra must be simply connected",
                a.name(i)
            )));
        }
        let name = if i == 1 {
            prefix.to_string()
        } else {
            format!("{prefix}{i}")
        };
        alphabet.push(Generator::new(name, deg - 1))?;
    }
    let gen = |i: usize| (i - 1) as GenId;
    let mut p = DglPresentation::new(alphabet.clone());
    let mut scaling = vec![Rational::one(); n - 1];
    let mut order: Vec<usize> = (1..n).collect();
    order.sort_by_key(|&i| (a.degree(i), i));
    let half = Rational::new(1.into(), 2.into());
    for &target in &order {
        let mut terms: Vec<(BracketTree, Rational)> = Vec::new();
        for i in 1..n {
            for j in 1..n {
                for (k, c) in a.product(i, j) {
                    if k != target || c.is_zero() {
                        continue;
                    }
                    let sign = if a.degree(i) % 2 == 1 {
                        -Rational::one()
                    } else {
                        Rational::one()
                    };
                    let coeff = &half * sign * c / (&scaling[i - 1] * &scaling[j - 1]);
                    terms.push((
                        BracketTree::node(BracketTree::Leaf(gen(i)), BracketTree::Leaf(gen(j))),
                        coeff,
                    ));
                }
            }
        }
        let deg = a.degree(target) - 2;
        let d = LieElement::from_terms(&alphabet, deg, terms)?.normalized(&alphabet);
        if let Some(c) = content(d.terms().values().cloned()) {
            let lambda = Rational::one() / c;
            p.set_differential(gen(target), d.scale(&lambda))?;
            scaling[target - 1] = lambda;
        }
    }
    Ok(Lstar {
        presentation: p,
        scaling,
    })
}

/// `L_*(Q[u]/u^(k+1))` with `|u| = 4`: generators `a, a2, ..., ak`.
pub fn lstar_a(k: u32) -> Result<Lstar> {
    lstar(&truncated_monogenic(4, k + 1)?, "a")
}

/// `L_*(Q[v]/v^3)` with `|v| = 2k`: generators `b, b2`.
pub fn lstar_b(k: u32) -> Result<Lstar> {
    lstar(&truncated_monogenic(2 * k, 3)?, "b")
}
