//! Exact evaluation of the conjectured bound `⌈n + 1 - √n - log₂ √n⌉`.
//!
//! With `f(n) = √n + ½·log₂ n` the bound is `n + 1 - ⌊f(n)⌋`. When `n` is a
//! power of 4, `f(n) = 2^j + j` is an integer. Otherwise `f(n)` is
//! irrational and `⌊f(n)⌋` is found from a rigorous fixed-point enclosure
//! whose precision doubles until the enclosure excludes every integer.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

const START_BITS: u32 = 128;
const MAX_BITS: u32 = 1 << 14;

/// `⌈n + 1 - √n - log₂ √n⌉` for `n >= 1`.
pub fn conjecture_rhs(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "n",
            value: 0,
            max: u64::MAX as usize,
        });
    }
    Ok(n as i64 + 1 - floor_f(n)?)
}

fn power_of_four_exponent(n: u64) -> Option<u32> {
    (n.is_power_of_two() && n.trailing_zeros().is_multiple_of(2)).then(|| n.trailing_zeros() / 2)
}

/// `⌊√n + ½·log₂ n⌋`.
fn floor_f(n: u64) -> Result<i64> {
    if let Some(j) = power_of_four_exponent(n) {
        return Ok((1i64 << j) + j as i64);
    }
    let mut bits = START_BITS;
    while bits <= MAX_BITS {
        let (lo, hi) = twice_f_bounds(n, bits);
        // 2f scaled by 2^bits; floor(f) = floor(value / 2^(bits+1)).
        let (flo, fhi) = (&lo >> (bits + 1), &hi >> (bits + 1));
        if flo == fhi {
            return Ok(i64::try_from(flo).expect("floor of f(n) fits in i64"));
        }
        bits *= 2;
    }
    Err(Error::Precision(format!("floor(sqrt({n}) + log2({n})/2)")))
}

/// Bounds on `(2√n + log₂ n)·2^bits`.
fn twice_f_bounds(n: u64, bits: u32) -> (BigInt, BigInt) {
    let (slo, shi) = sqrt_bounds(n, bits);
    let (llo, lhi) = log2_bounds(n, bits);
    (2 * slo + llo, 2 * shi + lhi)
}

/// Bounds on `√n·2^bits`.
fn sqrt_bounds(n: u64, bits: u32) -> (BigInt, BigInt) {
    let scaled = BigInt::from(n) << (2 * bits);
    let s = scaled.sqrt();
    if &s * &s == scaled {
        (s.clone(), s)
    } else {
        let hi = &s + 1;
        (s, hi)
    }
}

/// Bounds on `log₂(n)·2^bits`.
///
/// Writes `n = 2^k·y` with `y ∈ [1, 2)` and extracts the binary digits of
/// `log₂ y` by repeated squaring, once rounding down and once rounding up.
/// With `V_i = digits_i + 2^-i·log₂ y_i` the rounded-down track never
/// increases `V` and the rounded-up track never decreases it, so
/// `digits_lo <= log₂ y < digits_hi + 2^-bits`.
fn log2_bounds(n: u64, bits: u32) -> (BigInt, BigInt) {
    let k = 63 - n.leading_zeros();
    let one = BigInt::one() << bits;
    let two = &one << 1;
    let y0 = (BigInt::from(n) << bits) >> k;

    let mut y = y0.clone();
    let mut digits_lo = BigInt::from(0);
    for i in 1..=bits {
        y = (&y * &y) >> bits;
        if y >= two {
            y >>= 1;
            digits_lo += BigInt::one() << (bits - i);
        }
    }

    let mut y = y0;
    let mut digits_hi = BigInt::from(0);
    let mask = &one - 1;
    for i in 1..=bits {
        let sq = &y * &y;
        let round_up = (&sq & &mask) != BigInt::from(0);
        y = (sq >> bits) + if round_up { 1 } else { 0 };
        if y >= two {
            let odd = (&y & BigInt::one()) == BigInt::one();
            y = (y >> 1) + if odd { 1 } else { 0 };
            digits_hi += BigInt::one() << (bits - i);
        }
    }

    let base = BigInt::from(k) << bits;
    (&base + digits_lo, base + digits_hi + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        assert_eq!(conjecture_rhs(8).unwrap(), 5);
        assert_eq!(conjecture_rhs(1).unwrap(), 1);
        assert_eq!(conjecture_rhs(4).unwrap(), 2);
        assert_eq!(conjecture_rhs(16).unwrap(), 11);
        assert!(conjecture_rhs(0).is_err());
    }

    #[test]
    fn enclosures_contain_float_values() {
        for n in [2u64, 3, 5, 7, 8, 10, 1000, 123_457] {
            let (lo, hi) = log2_bounds(n, 128);
            let scale = 2f64.powi(128);
            let l = (n as f64).log2();
            let lo = lo.to_string().parse::<f64>().unwrap() / scale;
            let hi = hi.to_string().parse::<f64>().unwrap() / scale;
            assert!(lo <= l + 1e-12 && l - 1e-12 <= hi, "n = {n}");
            let (slo, shi) = sqrt_bounds(n, 128);
            assert!(&shi - &slo <= BigInt::one());
        }
    }

    #[test]
    fn enclosure_width_is_tiny() {
        for n in [3u64, 8, 20, 99] {
            let (lo, hi) = twice_f_bounds(n, START_BITS);
            // 2^-100 < 1e-30
            assert!(hi - lo < BigInt::one() << (START_BITS - 100));
        }
    }

    /// Independent float route, only where the float value is far from an
    /// integer boundary.
    #[test]
    fn agrees_with_float_evaluation_away_from_integers() {
        let mut checked = 0;
        for n in 1u64..=40_000 {
            let x = n as f64 + 1.0 - (n as f64).sqrt() - 0.5 * (n as f64).log2();
            if (x - x.round()).abs() > 1e-6 {
                assert_eq!(conjecture_rhs(n).unwrap(), x.ceil() as i64, "n = {n}");
                checked += 1;
            }
        }
        assert!(checked > 39_000);
    }

    #[test]
    fn powers_of_four_take_the_exact_path() {
        for j in 0..10u32 {
            let n = 1u64 << (2 * j);
            assert_eq!(conjecture_rhs(n).unwrap(), n as i64 + 1 - (1i64 << j) - j as i64);
        }
    }
}
