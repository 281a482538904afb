//! Brute-force reference implementations.
//!
//! Everything here is deliberately naive and shares no code with the
//! `rauzy-squares` library, so the two can be cross-checked.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Every distinct factor of `w` of length `len`.
pub fn factors_of_length(w: &[u8], len: usize) -> BTreeSet<Vec<u8>> {
    if len > w.len() {
        return BTreeSet::new();
    }
    (0..=w.len() - len).map(|i| w[i..i + len].to_vec()).collect()
}

/// Every distinct factor of `w`, including the empty word.
pub fn all_factors(w: &[u8]) -> BTreeSet<Vec<u8>> {
    (0..=w.len()).flat_map(|l| factors_of_length(w, l)).collect()
}

/// O(n^3) square enumeration: test every (start, even length) pair letter by letter.
pub fn naive_distinct_squares(w: &[u8]) -> BTreeSet<Vec<u8>> {
    let n = w.len();
    let mut out = BTreeSet::new();
    for start in 0..n {
        let mut len = 2;
        while start + len <= n {
            let half = len / 2;
            let mut eq = true;
            for k in 0..half {
                if w[start + k] != w[start + half + k] {
                    eq = false;
                    break;
                }
            }
            if eq {
                out.insert(w[start..start + len].to_vec());
            }
            len += 2;
        }
    }
    out
}

pub fn naive_count_squares(w: &[u8]) -> usize {
    naive_distinct_squares(w).len()
}

/// All rotations of `x`, rotation `i` (0-based) starting at `x[i]`.
pub fn rotations(x: &[u8]) -> Vec<Vec<u8>> {
    (0..x.len())
        .map(|i| x[i..].iter().chain(&x[..i]).copied().collect())
        .collect()
}

/// Smallest p such that w[i] == w[i + p] for all valid i.
pub fn naive_smallest_period(w: &[u8]) -> usize {
    (1..=w.len())
        .find(|&p| (p..w.len()).all(|i| w[i] == w[i - p]))
        .unwrap_or(0)
}

pub fn naive_is_primitive(w: &[u8]) -> bool {
    let n = w.len();
    !(1..n).any(|d| n.is_multiple_of(d) && w.chunks(d).all(|c| c == &w[..d]))
}

/// Lyndon test by comparing against every other rotation.
pub fn naive_is_lyndon(w: &[u8]) -> bool {
    if w.is_empty() {
        return false;
    }
    rotations(w).iter().skip(1).all(|r| w < r.as_slice())
}

/// Lyndon factors by filtering all factors.
pub fn naive_lyndon_factors(w: &[u8]) -> BTreeSet<Vec<u8>> {
    all_factors(w)
        .into_iter()
        .filter(|f| naive_is_lyndon(f))
        .collect()
}

/// Length-m word cyclically repeating `x`.
pub fn cyclic_prefix(x: &[u8], m: usize) -> Vec<u8> {
    (0..m).map(|i| x[i % x.len()]).collect()
}

/// Rank over the rationals of the given integer row vectors via dense
/// Gauss-Jordan elimination on `BigRational`.
#[allow(clippy::needless_range_loop)]
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = BigRational::one() / m[rank][c].clone();
        for k in 0..cols {
            m[rank][k] = &m[rank][k] * &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..cols {
                    let sub = &f * &m[rank][k];
                    m[r][k] = &m[r][k] - sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Maximum number of distinct squares over every binary word of length `n`
/// (all 2^n words, no canonicalization).
pub fn naive_binary_max_squares(n: usize) -> usize {
    let mut best = 0;
    for bits in 0u64..(1u64 << n) {
        let w: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
        let mut seen = HashSet::new();
        for s in 0..n {
            for h in 1..=(n - s) / 2 {
                if w[s..s + h] == w[s + h..s + 2 * h] {
                    seen.insert(&w[s..s + 2 * h]);
                }
            }
        }
        best = best.max(seen.len());
    }
    best
}

/// Every word of length `n` over letters `b'a'..b'a'+sigma`.
pub fn all_words(n: usize, sigma: u8) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..sigma).map(move |c| {
                    let mut v = w.clone();
                    v.push(b'a' + c);
                    v
                })
            })
            .collect();
    }
    out
}
