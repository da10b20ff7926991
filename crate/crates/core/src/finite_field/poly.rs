//! Dense polynomials over F_p, little-endian coefficient vectors.

pub(crate) type Poly = Vec<u64>;

pub(crate) fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Remainder of `a` modulo the monic-or-not polynomial `f`.
pub(crate) fn rem(a: &[u64], f: &[u64], p: u64) -> Poly {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let df = degree(f).expect("nonzero modulus");
    let lead_inv = inv_mod(f[df], p);
    while let Some(dr) = degree(&r) {
        if dr < df {
            break;
        }
        let c = r[dr] * lead_inv % p;
        let shift = dr - df;
        for (i, &fc) in f[..=df].iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * fc % p) % p;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), f, p)
}

pub(crate) fn pow_mod(a: &[u64], mut e: u128, f: &[u64], p: u64) -> Poly {
    let mut acc = rem(&[1], f, p);
    let mut b = rem(a, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        e >>= 1;
        if e > 0 {
            b = mul_mod(&b, &b, f, p);
        }
    }
    acc
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial of degree `n`.
pub(crate) fn is_irreducible(f: &[u64], p: u64, n: usize, prime_divisors_of_n: &[u64]) -> bool {
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x: Poly = vec![0, 1];
    // frob[j] = x^(p^j) mod f
    let mut frob = vec![rem(&x, f, p)];
    for _ in 0..n {
        let next = pow_mod(frob.last().unwrap(), p as u128, f, p);
        frob.push(next);
    }
    if sub(&frob[n], &x, p) != Vec::<u64>::new() {
        return false;
    }
    prime_divisors_of_n.iter().all(|&r| {
        let h = sub(&frob[n / r as usize], &x, p);
        let g = gcd(f, &h, p);
        degree(&g) == Some(0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_irreducibles_over_f2() {
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2, 4, &[2]));
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 2, 4, &[2]));
        assert!(is_irreducible(&[1, 1, 0, 0, 0, 0, 1], 2, 6, &[2, 3]));
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2, 4, &[2]));
    }

    #[test]
    fn gcd_and_rem() {
        // (x+1)(x+2) over F_3 = x^2 + 2
        let f = mul(&[1, 1], &[2, 1], 3);
        assert_eq!(f, vec![2, 0, 1]);
        assert_eq!(rem(&f, &[1, 1], 3), Vec::<u64>::new());
        assert_eq!(gcd(&f, &[1, 1], 3), vec![1, 1]);
    }
}
