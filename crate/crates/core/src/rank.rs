//! Exact rank of integer vectors over the rationals.
//!
//! Fraction-free sparse elimination: each incoming vector is reduced against
//! the current pivot rows with `v <- p_c * v - v_c * p` and divided by the
//! gcd of its entries. Arithmetic runs on `i128` with overflow checks and
//! restarts on `BigInt` if any intermediate would overflow.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rauzy::CycleVector;

trait Exact: Clone + Zero + PartialEq {
    fn from_i64(v: i64) -> Self;
    /// `a * x - b * y`, or `None` on overflow.
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd_with(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_unit(&self) -> bool;
}

impl Exact for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }

    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }

    fn gcd_with(&self, other: &Self) -> Self {
        self.gcd(other)
    }

    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }

    fn is_unit(&self) -> bool {
        self.abs() == 1
    }
}

impl Exact for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }

    fn gcd_with(&self, other: &Self) -> Self {
        self.gcd(other)
    }

    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }

    fn is_unit(&self) -> bool {
        self.abs() == BigInt::from(1)
    }
}

type SparseRow<T> = Vec<(usize, T)>;

/// `a * x - b * y` over sorted sparse rows, dropping zeros.
fn combine<T: Exact>(a: &T, x: &SparseRow<T>, b: &T, y: &SparseRow<T>) -> Option<SparseRow<T>> {
    let zero = T::zero();
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (col, xv, yv) = match (x.get(i), y.get(j)) {
            (Some((cx, vx)), Some((cy, vy))) if cx == cy => {
                i += 1;
                j += 1;
                (*cx, vx, vy)
            }
            (Some((cx, vx)), Some((cy, _))) if cx < cy => {
                i += 1;
                (*cx, vx, &zero)
            }
            (Some((cx, vx)), None) => {
                i += 1;
                (*cx, vx, &zero)
            }
            (_, Some((cy, vy))) => {
                j += 1;
                (*cy, &zero, vy)
            }
            (None, None) => unreachable!(),
        };
        let v = T::mul_sub(a, xv, b, yv)?;
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    Some(out)
}

fn make_primitive<T: Exact>(row: &mut SparseRow<T>) {
    let mut g = T::zero();
    for (_, v) in row.iter() {
        g = g.gcd_with(v);
        if g.is_unit() {
            return;
        }
    }
    if !g.is_zero() {
        for (_, v) in row.iter_mut() {
            *v = v.div_exact(&g);
        }
    }
}

fn rank_with<T: Exact>(rows: &[SparseRow<i64>]) -> Option<usize> {
    let mut pivots: BTreeMap<usize, SparseRow<T>> = BTreeMap::new();
    for row in rows {
        let mut v: SparseRow<T> = row
            .iter()
            .filter(|(_, x)| *x != 0)
            .map(|&(c, x)| (c, T::from_i64(x)))
            .collect();
        while let Some((lead, lead_val)) = v.first().cloned() {
            match pivots.get(&lead) {
                Some(p) => {
                    v = combine(&p[0].1, &v, &lead_val, p)?;
                    make_primitive(&mut v);
                }
                None => {
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

/// Rank over ℚ of integer vectors given as sparse `(column, value)` rows with
/// strictly increasing columns.
pub fn sparse_rank(rows: &[Vec<(usize, i64)>]) -> usize {
    rank_with::<i128>(rows)
        .or_else(|| rank_with::<BigInt>(rows))
        .expect("BigInt elimination cannot overflow")
}

/// Number of linearly independent cycle-vectors.
pub fn independence_rank(vs: &[CycleVector]) -> Result<usize> {
    if let Some(first) = vs.first() {
        if let Some(bad) = vs.iter().find(|v| v.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: bad.dim(),
            });
        }
    }
    let rows: Vec<Vec<(usize, i64)>> = vs.iter().map(|v| v.entries().collect()).collect();
    Ok(sparse_rank(&rows))
}
