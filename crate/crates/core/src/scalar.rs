//! Exact integer scalars.
//!
//! Closed forms are generic over [`ExactInt`], which covers `i64`, `i128`
//! and [`BigInt`]. Fixed-width arithmetic is checked and reports
//! [`Error::Overflow`] instead of wrapping.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Signed exact integer usable by every closed form.
pub trait ExactInt:
    Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Ord
    + Debug
    + Display
    + FromStr
    + Send
    + Sync
    + 'static
{
}

impl<T> ExactInt for T where
    T: Integer
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Ord
        + Debug
        + Display
        + FromStr
        + Send
        + Sync
        + 'static
{
}

pub fn from_u64<T: ExactInt>(x: u64) -> Result<T> {
    T::from_u64(x).ok_or(Error::Overflow)
}

pub fn from_i64<T: ExactInt>(x: i64) -> Result<T> {
    T::from_i64(x).ok_or(Error::Overflow)
}

pub fn add<T: ExactInt>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub fn sub<T: ExactInt>(a: &T, b: &T) -> Result<T> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub fn mul<T: ExactInt>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub fn neg<T: ExactInt>(a: &T) -> Result<T> {
    sub(&T::zero(), a)
}

pub fn pow<T: ExactInt>(base: &T, exp: u64) -> Result<T> {
    let mut acc = T::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &b)?;
        }
        e >>= 1;
        if e > 0 {
            b = mul(&b, &b)?;
        }
    }
    Ok(acc)
}

/// `a / b`, failing unless the division is exact.
pub fn exact_div<T: ExactInt>(a: &T, b: &T, what: &str) -> Result<T> {
    if b.is_zero() {
        return Err(Error::Internal(format!("{what}: division by zero")));
    }
    let (quot, rem) = a.div_rem(b);
    if !rem.is_zero() {
        return Err(Error::Internal(format!("{what}: {a} is not divisible by {b}")));
    }
    Ok(quot)
}

/// Widen any exact integer to a [`BigInt`].
pub fn to_big<T: ExactInt>(x: &T) -> BigInt {
    x.to_string().parse().expect("decimal rendering of an integer")
}

/// Narrow a [`BigInt`], reporting overflow.
pub fn from_big<T: ExactInt>(x: &BigInt) -> Result<T> {
    x.to_string().parse().map_err(|_| Error::Overflow)
}

pub fn two<T: ExactInt>() -> T {
    T::one() + T::one()
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt<T: ExactInt>(x: &T) -> Result<T> {
    if x.is_negative() {
        return Err(Error::Internal(format!("isqrt of negative {x}")));
    }
    from_big(&num_integer::Roots::sqrt(&to_big(x)))
}

/// `(-1)^e` as a scalar.
pub fn sign_pow<T: ExactInt>(e: u64) -> T {
    if e % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}
