//! Closed walks and spanning trees.

use super::closed;
use crate::error::{Error, Result};
use crate::paley_graphs::GraphSpec;
use crate::scalar::{add, exact_div, from_u64, mul, neg, pow, sub, ExactInt};

/// Number of closed walks of length `r ≥ 1`.
///
/// For `ℓ = m/2` with `a = q^{m/2}` this is `a k ((a−1)^{r−1} + (−1)^r)`
/// for Γ and `a^r k ((a−1)^{r−1} + (−1)^r)` for the complement.
pub fn closed_walks<T: ExactInt>(spec: &GraphSpec, r: u32) -> Result<T> {
    if r == 0 {
        return Err(Error::InvalidSpec("walk length must be positive".into()));
    }
    let c = closed::<T>(spec)?;
    let r64 = r as u64;
    let one = T::one();
    let (w, degree) = if c.half {
        let sign = if r % 2 == 0 { one.clone() } else { neg(&one)? };
        let core = add(&pow(&sub(&c.a, &one)?, r64 - 1)?, &sign)?;
        if spec.complemented {
            (mul(&mul(&pow(&c.a, r64)?, &c.k)?, &core)?, mul(&c.a, &c.k)?)
        } else {
            (mul(&mul(&c.a, &c.k)?, &core)?, c.k.clone())
        }
    } else {
        let (u, m) = c.uv()?;
        if spec.complemented {
            let kb = mul(&c.ql, &c.k)?;
            let inner = add(
                &add(&pow(&kb, r64 - 1)?, &pow(&sub(&neg(&one)?, &u)?, r64)?)?,
                &mul(&pow(&c.ql, r64 - 1)?, &pow(&u, r64)?)?,
            )?;
            (mul(&kb, &inner)?, kb)
        } else {
            let inner = add(&add(&pow(&c.k, r64 - 1)?, &mul(&c.ql, &pow(&u, r64)?)?)?, &pow(&m, r64)?)?;
            (mul(&c.k, &inner)?, c.k.clone())
        }
    };
    exact_div(&w, &degree, "walk count divisibility by the degree")?;
    Ok(w)
}

/// Number of spanning trees.
///
/// For the complement of Γ(m/2), K_{a×a}, this is `a^{2a−4} (a(a−1))^{a(a−1)}`.
pub fn spanning_trees<T: ExactInt>(spec: &GraphSpec) -> Result<T> {
    let c = closed::<T>(spec)?;
    let one = T::one();
    if c.half {
        if !spec.complemented {
            return Ok(T::zero());
        }
        let a_exp = to_u64(&c.a)?;
        let kb = mul(&c.a, &c.k)?;
        return mul(&pow(&c.a, 2 * a_exp - 4)?, &pow(&kb, to_u64(&kb)?)?);
    }
    let (u, m) = c.uv()?;
    let k_exp = to_u64(&c.k)?;
    let qk = mul(&c.ql, &c.k)?;
    let qk_exp = to_u64(&qk)?;
    let v_exp = to_u64(&c.v)?;
    let half_m = (spec.m / 2) as u64;
    let denom = add(&c.ql, &one)?;
    if !spec.complemented {
        // q^{(m/2)(q^m − 3)} υ^{q^ℓ k} ((q^{m/2} + ε q^ℓ)/(q^ℓ + 1))^k
        let ratio = exact_div(&add(&c.a, &mul(&c.eps, &c.ql)?)?, &denom, "tree ratio")?;
        let q = base::<T>(spec)?;
        let t = mul(&mul(&pow(&q, half_m * (v_exp - 3))?, &pow(&u, qk_exp)?)?, &pow(&ratio, k_exp)?)?;
        return Ok(t);
    }
    // q^{ℓk − m} q^{(m/2) q^ℓ k} μ^{q^ℓ k} (k − υ)^k
    let q = base::<T>(spec)?;
    let ell_k = (spec.ell as u64).checked_mul(k_exp).ok_or(Error::Overflow)?;
    let num = mul(&mul(&pow(&q, ell_k + half_m * qk_exp)?, &pow(&m, qk_exp)?)?, &pow(&sub(&c.k, &u)?, k_exp)?)?;
    exact_div(&num, &pow(&q, spec.m as u64)?, "complement tree count")
}

fn base<T: ExactInt>(spec: &GraphSpec) -> Result<T> {
    pow(&from_u64::<T>(spec.p)?, spec.s as u64)
}

fn to_u64<T: ExactInt>(x: &T) -> Result<u64> {
    x.to_u64().ok_or(Error::Overflow)
}
