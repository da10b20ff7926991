//! Table-backed arithmetic in F_{p^n}, n = s·m.
//!
//! Elements are addressed by their canonical integer encoding
//! `Σ c_i p^i`, where `c_i` are the coefficients of the polynomial
//! representative modulo the field's defining polynomial. Multiplication
//! goes through discrete logarithms and addition through Zech logarithms.

mod poly;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Default materialization budget for table-backed fields.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 22;

const NONE: u32 = u32::MAX;

/// Field parameters: the prime `p`, `q = p^s` and the degree `m` over F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u64,
    pub s: u32,
    pub m: u32,
}

impl FieldParams {
    pub fn new(p: u64, s: u32, m: u32) -> Result<Self> {
        if !arith::is_prime(p as u128) {
            return Err(Error::CompositeP(p));
        }
        if s == 0 || m == 0 {
            return Err(Error::InvalidSpec(format!("s and m must be positive (s={s}, m={m})")));
        }
        Ok(FieldParams { p, s, m })
    }

    /// Degree over the prime field.
    pub fn n(&self) -> u32 {
        self.s * self.m
    }

    /// `p^n` as a big integer.
    pub fn order_big(&self) -> BigInt {
        num_traits::Pow::pow(BigInt::from(self.p), self.n())
    }
}

/// A field element, stored as its canonical integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    pub modulus: Vec<u64>,
    pub alpha: u32,
}

/// A materialized finite field with log, exp and Zech tables.
#[derive(Clone)]
pub struct FieldTable {
    params: FieldParams,
    modulus: Vec<u64>,
    alpha: FieldElement,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    group_factors: Vec<(u64, u32)>,
}

impl fmt::Debug for FieldTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTable")
            .field("params", &self.params)
            .field("modulus", &self.modulus)
            .field("alpha", &self.alpha)
            .finish()
    }
}

/// Builds the field under the default budget.
pub fn build_field(params: FieldParams) -> Result<FieldTable> {
    build_field_with_budget(params, DEFAULT_MAX_ORDER)
}

pub fn build_field_with_budget(params: FieldParams, max_order: u64) -> Result<FieldTable> {
    let params = FieldParams::new(params.p, params.s, params.m)?;
    let n = params.n() as usize;
    let p = params.p;
    let order = params.order_big();
    let budget = max_order.min(u32::MAX as u64);
    let order_u64 = match u64::try_from(&order) {
        Ok(v) if v <= budget => v,
        _ => {
            return Err(Error::BudgetExceeded { order: order.to_string(), budget: max_order });
        }
    };
    let group = order_u64 - 1;
    let group_factors: Vec<(u64, u32)> = arith::factor(group as u128).into_iter().map(|(r, e)| (r as u64, e)).collect();
    let n_primes: Vec<u64> = arith::factor(n as u128).into_iter().map(|(r, _)| r as u64).collect();

    let modulus = (0..order_u64)
        .map(|c| {
            let mut f = digits_of(c, p, n);
            f.push(1);
            f
        })
        .find(|f| poly::is_irreducible(f, p, n, &n_primes))
        .ok_or_else(|| Error::Internal("no irreducible polynomial found".into()))?;

    let is_primitive = |a: &[u64]| {
        !a.is_empty()
            && group_factors.iter().all(|&(r, _)| poly::pow_mod(a, (group / r) as u128, &modulus, p) != vec![1])
    };
    let alpha = (1..order_u64)
        .find(|&c| is_primitive(&trimmed(digits_of(c, p, n))))
        .ok_or_else(|| Error::Internal("no primitive element found".into()))?;

    let mut exp = Vec::with_capacity(group as usize);
    let mut log = vec![NONE; order_u64 as usize];
    let alpha_digits = trimmed(digits_of(alpha, p, n));
    let mut cur: Vec<u64> = vec![1];
    for i in 0..group {
        let enc = encode(&cur, p) as u32;
        if log[enc as usize] != NONE {
            return Err(Error::Internal(format!("alpha={alpha} is not primitive")));
        }
        exp.push(enc);
        log[enc as usize] = i as u32;
        cur = if alpha == p { times_x(&cur, &modulus, p) } else { poly::mul_mod(&cur, &alpha_digits, &modulus, p) };
    }
    let zech = exp
        .iter()
        .map(|&e| {
            let one_plus = plus_one(e as u64, p) as usize;
            if one_plus == 0 {
                NONE
            } else {
                log[one_plus]
            }
        })
        .collect();

    Ok(FieldTable {
        params,
        modulus,
        alpha: FieldElement(alpha as u32),
        order: order_u64 as u32,
        exp,
        log,
        zech,
        group_factors,
    })
}

fn digits_of(mut c: u64, p: u64, n: usize) -> Vec<u64> {
    let mut d = Vec::with_capacity(n);
    for _ in 0..n {
        d.push(c % p);
        c /= p;
    }
    d
}

fn trimmed(mut d: Vec<u64>) -> Vec<u64> {
    poly::trim(&mut d);
    d
}

fn encode(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn plus_one(e: u64, p: u64) -> u64 {
    if e % p == p - 1 {
        e - (p - 1)
    } else {
        e + 1
    }
}

fn times_x(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64];
    out.extend_from_slice(a);
    poly::rem(&out, f, p)
}

impl FieldTable {
    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    /// Degree over the prime field.
    pub fn n(&self) -> u32 {
        self.params.n()
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.order as usize
    }

    /// Order of the multiplicative group.
    pub fn group_order(&self) -> u64 {
        self.order as u64 - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    /// Prime factorization of `p^n - 1`.
    pub fn group_factors(&self) -> &[(u64, u32)] {
        &self.group_factors
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index < self.order as u64 {
            Ok(FieldElement(index as u32))
        } else {
            Err(Error::BadElement(index))
        }
    }

    /// `alpha^i`.
    pub fn exp(&self, i: u64) -> FieldElement {
        FieldElement(self.exp[(i % self.group_order()) as usize])
    }

    pub fn log(&self, x: FieldElement) -> Result<u64> {
        match self.log[x.index()] {
            NONE => Err(Error::ZeroElement),
            l => Ok(l as u64),
        }
    }

    /// Zech logarithm `z` with `alpha^z = 1 + alpha^i`; `None` when `1 + alpha^i = 0`.
    pub fn zech(&self, i: u64) -> Option<u64> {
        match self.zech[(i % self.group_order()) as usize] {
            NONE => None,
            z => Some(z as u64),
        }
    }

    /// Little-endian coefficient vector of length `n`.
    pub fn digits(&self, x: FieldElement) -> Vec<u64> {
        digits_of(x.0 as u64, self.p(), self.n() as usize)
    }

    pub fn from_digits(&self, digits: &[u64]) -> Result<FieldElement> {
        if digits.len() > self.n() as usize || digits.iter().any(|&d| d >= self.p()) {
            return Err(Error::Parse(format!("bad coefficient vector {digits:?}")));
        }
        Ok(FieldElement(encode(digits, self.p()) as u32))
    }

    /// The element `c · 1` of the prime field.
    pub fn prime_element(&self, c: u64) -> FieldElement {
        FieldElement((c % self.p()) as u32)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p() == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let g = self.order - 1;
        let la = self.log[a.index()];
        let lb = self.log[b.index()];
        let d = if lb >= la { lb - la } else { lb + g - la };
        match self.zech[d as usize] {
            NONE => FieldElement::ZERO,
            z => FieldElement(self.exp[((la as u64 + z as u64) % g as u64) as usize]),
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p() == 2 || a.is_zero() {
            return a;
        }
        let g = self.order as u64 - 1;
        FieldElement(self.exp[((self.log[a.index()] as u64 + g / 2) % g) as usize])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let g = self.order as u64 - 1;
        let s = self.log[a.index()] as u64 + self.log[b.index()] as u64;
        FieldElement(self.exp[(s % g) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        let l = self.log(a)?;
        Ok(self.exp(self.group_order() - l))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u128) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let g = self.group_order() as u128;
        let l = self.log[a.index()] as u128;
        FieldElement(self.exp[(l * (e % g) % g) as usize])
    }

    /// `p^i mod (p^n - 1)`, the exponent of the `i`-fold Frobenius on F^*.
    pub fn frobenius_exponent(&self, i: u32) -> u128 {
        let g = self.group_order() as u128;
        let mut acc = 1u128 % g.max(1);
        for _ in 0..i {
            acc = acc * self.p() as u128 % g.max(1);
        }
        acc
    }

    /// `x^(p^i)`.
    pub fn frobenius(&self, x: FieldElement, i: u32) -> FieldElement {
        if x.is_zero() {
            return x;
        }
        if self.group_order() == 1 {
            return x;
        }
        self.pow(x, self.frobenius_exponent(i))
    }

    /// Whether `x` lies in the subfield of degree `degree` over F_p.
    pub fn in_subfield(&self, x: FieldElement, degree: u32) -> bool {
        self.n() % degree == 0 && self.frobenius(x, degree) == x
    }

    /// Elements of the subfield of degree `degree`, zero first, then by discrete log.
    pub fn subfield_elements(&self, degree: u32) -> Result<Vec<FieldElement>> {
        if degree == 0 || self.n() % degree != 0 {
            return Err(Error::NotASubfield { from: self.n(), to: degree });
        }
        let sub_group = self.p().pow(degree) - 1;
        let step = self.group_order() / sub_group;
        let mut out = vec![FieldElement::ZERO];
        out.extend((0..sub_group).map(|j| self.exp(j * step)));
        Ok(out)
    }

    /// Relative trace from the degree-`from` subfield to the degree-`to` subfield.
    pub fn trace(&self, x: FieldElement, from_degree: u32, to_degree: u32) -> Result<FieldElement> {
        if from_degree == 0 || to_degree == 0 || from_degree % to_degree != 0 || self.n() % from_degree != 0 {
            return Err(Error::NotASubfield { from: from_degree, to: to_degree });
        }
        if !self.in_subfield(x, from_degree) {
            return Err(Error::NotInSubfield { degree: from_degree });
        }
        let r = from_degree / to_degree;
        Ok((0..r).fold(FieldElement::ZERO, |acc, i| self.add(acc, self.frobenius(x, i * to_degree))))
    }

    /// Relative trace of every element of the field down to the degree-`to` subfield.
    pub fn trace_table(&self, to_degree: u32) -> Result<Vec<FieldElement>> {
        if to_degree == 0 || self.n() % to_degree != 0 {
            return Err(Error::NotASubfield { from: self.n(), to: to_degree });
        }
        let r = self.n() / to_degree;
        let exps: Vec<u128> = (0..r).map(|i| self.frobenius_exponent(i * to_degree)).collect();
        let g = self.group_order() as u128;
        Ok(self
            .elements()
            .map(|x| {
                if x.is_zero() {
                    return x;
                }
                let l = self.log[x.index()] as u128;
                exps.iter()
                    .fold(FieldElement::ZERO, |acc, &e| self.add(acc, FieldElement(self.exp[(l * e % g) as usize])))
            })
            .collect())
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut order = self.group_order();
        for &(r, _) in &self.group_factors {
            while order % r == 0 && self.pow(x, (order / r) as u128) == FieldElement::ONE {
                order /= r;
            }
        }
        Ok(order)
    }

    pub fn record(&self) -> FieldRecord {
        FieldRecord {
            p: self.params.p,
            s: self.params.s,
            m: self.params.m,
            modulus: self.modulus.clone(),
            alpha: self.alpha.0,
        }
    }

    /// Little-endian base-p digit string: one character per digit for `p <= 36`,
    /// otherwise decimal digits joined by `.`.
    pub fn to_digit_string(&self, x: FieldElement) -> String {
        let digits = self.digits(x);
        if self.p() <= 36 {
            digits.iter().map(|&d| std::char::from_digit(d as u32, 36).unwrap()).collect()
        } else {
            digits.iter().map(u64::to_string).collect::<Vec<_>>().join(".")
        }
    }

    pub fn parse_digit_string(&self, s: &str) -> Result<FieldElement> {
        let bad = || Error::Parse(format!("bad element digits {s:?}"));
        let digits: Vec<u64> = if self.p() <= 36 {
            s.chars().map(|c| c.to_digit(36).map(u64::from).ok_or_else(bad)).collect::<Result<_>>()?
        } else {
            s.split('.').map(|t| t.parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        if digits.len() != self.n() as usize {
            return Err(bad());
        }
        self.from_digits(&digits)
    }

    /// Coefficient-wise addition, independent of the Zech tables.
    pub fn add_by_digits(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p();
        let s: Vec<u64> = self.digits(a).iter().zip(self.digits(b)).map(|(x, y)| (x + y) % p).collect();
        FieldElement(encode(&s, p) as u32)
    }

    /// Polynomial multiplication modulo the defining polynomial, independent of the log tables.
    pub fn mul_by_digits(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p();
        let prod = poly::mul_mod(&trimmed(self.digits(a)), &trimmed(self.digits(b)), &self.modulus, p);
        FieldElement(encode(&prod, p) as u32)
    }
}
