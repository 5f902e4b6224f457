//! Rank over prime fields, used as a fast pre-pass before exact elimination.
//!
//! The rank modulo p never exceeds the rank over Q, and agrees with it for
//! all but finitely many primes.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Rational, SparseMatrix};

/// Primes just below 2^31, so products fit in u64.
pub const DEFAULT_PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn int_mod(x: &BigInt, p: u64) -> u64 {
    let m = x.mod_floor(&BigInt::from(p));
    m.to_u64().expect("residue fits")
}

/// Reduces a rational modulo p; `None` when p divides the denominator.
pub fn reduce_mod(x: &Rational, p: u64) -> Option<u64> {
    let d = int_mod(x.denom(), p);
    if d == 0 {
        return None;
    }
    let n = int_mod(x.numer(), p);
    Some(n * inv_mod(d, p) % p)
}

fn reduce_column(col: &[(usize, Rational)], p: u64) -> Option<Vec<(usize, u64)>> {
    let mut out = Vec::with_capacity(col.len());
    for (i, x) in col {
        let v = reduce_mod(x, p)?;
        if v != 0 {
            out.push((*i, v));
        }
    }
    Some(out)
}

fn axpy_mod(x: &[(usize, u64)], c: u64, y: &[(usize, u64)], p: u64) -> Vec<(usize, u64)> {
    // x - c*y
    let neg = (p - c % p) % p;
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i]);
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, neg * y[j].1 % p));
            j += 1;
        } else {
            let v = (x[i].1 + neg * y[j].1) % p;
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of `m` modulo `p`, or `None` if some entry's denominator vanishes mod p.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> Option<usize> {
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for col in m.columns() {
        let mut v = reduce_column(col, p)?;
        while let Some(&(lead, val)) = v.first() {
            match pivots.get(&lead) {
                Some(piv) => v = axpy_mod(&v, val, piv, p),
                None => {
                    let inv = inv_mod(val, p);
                    for e in v.iter_mut() {
                        e.1 = e.1 * inv % p;
                    }
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

/// Ranks modulo each usable prime in `primes`, skipping primes that divide a
/// denominator.
pub fn multi_modular_rank(m: &SparseMatrix, primes: &[u64]) -> Vec<(u64, usize)> {
    primes
        .iter()
        .filter_map(|&p| rank_mod_p(m, p).map(|r| (p, r)))
        .collect()
}

/// Lower bound on the rational rank: the maximum of the modular ranks.
pub fn modular_rank_bound(m: &SparseMatrix) -> usize {
    multi_modular_rank(m, &DEFAULT_PRIMES)
        .into_iter()
        .map(|(_, r)| r)
        .max()
        .unwrap_or(0)
}

/// Modular estimate of whether `m x = b` is consistent.
pub fn modular_feasible(m: &SparseMatrix, b: &[Rational]) -> Option<bool> {
    let aug = m.with_column(b);
    let mut verdict = None;
    for &p in &DEFAULT_PRIMES {
        if let (Some(r), Some(ra)) = (rank_mod_p(m, p), rank_mod_p(&aug, p)) {
            verdict = Some(r == ra);
            break;
        }
    }
    verdict
}
