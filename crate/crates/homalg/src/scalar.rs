//! Exact rational scalars: the ground field of every computation here.
//!
//! `Rat` is an arbitrary-precision rational, always reduced, with positive
//! denominator. Values are parsed from and printed to `"p/q"` strings (just
//! `"p"` when the denominator is 1), which is also the wire format used by
//! all input files.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use std::str::FromStr;

pub type Rat = BigRational;

/// Build a rational from machine integers. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    BigRational::from(BigInt::from(num))
}

/// Render as `p/q`, or `p` when the denominator is one.
pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p"` or `"p/q"`. The sign may sit on either component; the result
/// is reduced with a positive denominator.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|e| format!("bad numerator {:?}: {}", num, e))?;
    let d = BigInt::from_str(den).map_err(|e| format!("bad denominator {:?}: {}", den, e))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {:?}", s));
    }
    Ok(BigRational::new(n, d))
}

/// Sign of a permutation given as the image vector of `0..n`.
pub fn perm_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            at = perm[at];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Parity sign of the number of inversions of a sequence of distinct keys:
/// the sign of the permutation sorting it ascending.
pub fn sort_sign<T: Ord>(keys: &[T]) -> i32 {
    let mut inv = 0usize;
    for i in 0..keys.len() {
        for j in i + 1..keys.len() {
            assert!(keys[i] != keys[j], "sort_sign on repeated keys");
            if keys[i] > keys[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn sign_rat(sign: i32) -> Rat {
    match sign.signum() {
        1 => Rat::one(),
        -1 => -Rat::one(),
        _ => Rat::zero(),
    }
}
