//! Integer number theory used by the field layer and the closed forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow};

use crate::error::{Error, Result};

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b, mut acc) = (a % m, b % m, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Miller–Rabin; deterministic for every 64-bit input.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        let b = b as u128;
        if n == b {
            return true;
        }
        if n % b == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &b in &MR_BASES {
        let mut x = pow_mod(b as u128, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = (x.max(y) - x.min(y)).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factor(n: u128) -> Vec<(u128, u32)> {
    let mut primes = Vec::new();
    let mut rest = n;
    for p in 2u128..1000 {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            primes.push((p, e));
        }
    }
    let mut stack = vec![rest];
    let mut large = Vec::new();
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime(x) {
            large.push(x);
            continue;
        }
        let d = pollard_rho(x);
        stack.push(d);
        stack.push(x / d);
    }
    large.sort_unstable();
    for p in large {
        match primes.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => primes.push((p, 1)),
        }
    }
    primes
}

/// 2-adic valuation; `None` for zero.
pub fn v2(n: u64) -> Option<u32> {
    (n != 0).then(|| n.trailing_zeros())
}

/// `(q^m - 1, q^ell + 1)` by the 2-adic three-case rule, checked against Euclid.
pub fn gcd_power(q: &BigInt, m: u32, ell: u32) -> Result<BigInt> {
    if *q < BigInt::from(2) || m == 0 {
        return Err(Error::InvalidSpec(format!("gcd_power needs q >= 2 and m >= 1 (q={q}, m={m})")));
    }
    let rule = match (v2(m as u64), v2(ell as u64)) {
        (Some(vm), Some(vl)) if vm > vl => Pow::pow(q, m.gcd(&ell)) + BigInt::one(),
        _ if q.is_odd() => BigInt::from(2),
        _ => BigInt::one(),
    };
    let euclid = (Pow::pow(q, m) - BigInt::one()).gcd(&(Pow::pow(q, ell) + BigInt::one()));
    if rule != euclid {
        return Err(Error::Internal(format!("gcd_power({q},{m},{ell}): rule {rule} != euclid {euclid}")));
    }
    Ok(rule)
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}
