//! Small number-theoretic helpers shared by the sequence and realization code.

use num_integer::Integer;

/// Divisors of `n` in increasing order. `divisors(0)` is empty.
pub fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The Möbius function.
pub fn mobius(mut n: u64) -> i64 {
    assert!(n > 0, "mobius(0) is undefined");
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|j| j.gcd(&n) == 1).count() as u64
}

pub fn lcm_all<I: IntoIterator<Item = u64>>(values: I) -> u64 {
    values.into_iter().fold(1, |acc, v| acc.lcm(&v))
}
