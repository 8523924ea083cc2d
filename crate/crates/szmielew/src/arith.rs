//! Small number-theory helpers shared across the crate.

use std::collections::BTreeMap;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization of `n >= 1` as prime -> exponent; `1` maps to the
/// empty factorization.
pub(crate) fn factorize(n: u64) -> BTreeMap<u64, u64> {
    assert!(n >= 1, "cannot factorize 0");
    let mut out = BTreeMap::new();
    let mut rest = n;
    let mut d = 2u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= rest) {
        while rest % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        *out.entry(rest).or_insert(0) += 1;
    }
    out
}

/// base^exp mod m, for m >= 1.
pub(crate) fn pow_mod(base: u64, exp: u32, m: u64) -> u64 {
    debug_assert!(m >= 1);
    let m = m as u128;
    let mut acc: u128 = 1 % m;
    let mut b = base as u128 % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// Writes `n` as `p^k` with `p` prime and `k >= 1`, if possible.
pub(crate) fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = factorize(n.max(1));
    if n < 2 || f.len() != 1 {
        return None;
    }
    let (&p, &k) = f.iter().next().unwrap();
    Some((p, k as u32))
}
