//! Waring numbers, Ramanujan certification, the three Ramanujan families and
//! Ihara zeta factorizations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::gcd_power;
use crate::error::{Error, Result};
use crate::finite_field::{build_field_with_budget, FieldElement, FieldTable, DEFAULT_MAX_ORDER};
use crate::paley_graphs::{connection_set, FamilyTag, GraphSpec};
use crate::scalar::exact_div;
use crate::spectra_srg::{spectrum, srg_params, Spectrum, SrgRecord};

/// `g(k, q^m)` for `k = q^ℓ + 1`, with optional per-element decompositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaringCertificate {
    pub k_exp: BigInt,
    pub field_size: BigInt,
    pub g: u8,
    /// Indexed by element: `witnesses[a] = (x, y)` with `x^k + y^k = a`.
    pub witnesses: Option<Vec<(FieldElement, FieldElement)>>,
}

impl WaringCertificate {
    /// Re-evaluates every witness with the table arithmetic.
    pub fn verify(&self, field: &FieldTable) -> Result<bool> {
        let Some(w) = &self.witnesses else { return Ok(true) };
        let k = self.k_exp.to_u128().ok_or(Error::Overflow)?;
        if w.len() != field.order() {
            return Ok(false);
        }
        Ok(w.iter().enumerate().all(|(a, &(x, y))| {
            let sum = field.add(field.pow(x, k), field.pow(y, k));
            let len_ok = self.g == 2 || y.is_zero();
            sum.index() == a && len_ok
        }))
    }
}

impl Serialize for WaringCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("WaringCertificate", 4)?;
        st.serialize_field("k_exp", &self.k_exp.to_string())?;
        st.serialize_field("field_size", &self.field_size.to_string())?;
        st.serialize_field("g", &self.g)?;
        let w = self.witnesses.as_ref().map(|w| w.iter().map(|&(x, y)| [x.0, y.0]).collect::<Vec<_>>());
        st.serialize_field("witnesses", &w)?;
        st.end()
    }
}

pub fn waring_number(spec: &GraphSpec) -> Result<WaringCertificate> {
    waring_number_with_budget(spec, DEFAULT_MAX_ORDER)
}

/// Witnesses are only built when `q^m` fits the budget.
pub fn waring_number_with_budget(spec: &GraphSpec, max_order: u64) -> Result<WaringCertificate> {
    let spec = spec.primal();
    let g = match spec.tag() {
        FamilyTag::Complete => 1,
        FamilyTag::Proper if spec.is_half() => {
            return Err(Error::NotApplicable(format!("{spec}: S_ell does not generate the field")))
        }
        FamilyTag::Proper => 2,
        _ => return Err(Error::NotApplicable(format!("{spec}: exponent outside the q^ell+1 family"))),
    };
    let q = spec.q();
    let ql = num_traits::Pow::pow(&q, spec.ell);
    let k_exp = &ql + 1u32;
    let field_size = spec.order();
    if g == 2 {
        let half = num_traits::Pow::pow(&q, spec.m / 2) + 1u32;
        if gcd_power(&q, spec.m, spec.ell)? == half {
            log::warn!("{spec}: (k, q^m - 1) = q^(m/2) + 1");
        }
    }
    let witnesses = if field_size <= BigInt::from(max_order) {
        let field = build_field_with_budget(spec.field_params(), max_order)?;
        Some(bfs_witnesses(&spec, &field, &k_exp, g)?)
    } else {
        None
    };
    Ok(WaringCertificate { k_exp, field_size, g, witnesses })
}

/// Layer 1 is the set of k-th powers, layer 2 is its sumset.
fn bfs_witnesses(
    spec: &GraphSpec,
    field: &FieldTable,
    k_exp: &BigInt,
    g: u8,
) -> Result<Vec<(FieldElement, FieldElement)>> {
    let n = field.order();
    let big_n = field.group_order();
    let k = (k_exp % BigInt::from(big_n)).to_u64().ok_or(Error::Overflow)?;
    let mut root: Vec<Option<FieldElement>> = vec![None; n];
    for i in 0..big_n {
        let power = field.exp((i as u128 * k as u128 % big_n as u128) as u64);
        root[power.index()].get_or_insert(field.exp(i));
    }
    let layer1: Vec<FieldElement> = (0..n as u32).map(FieldElement).filter(|x| root[x.index()].is_some()).collect();
    if g == 2 {
        let conn = connection_set(spec, field)?;
        if layer1.iter().any(|x| !conn.contains(*x)) || BigInt::from(layer1.len()) != conn.cardinality {
            return Err(Error::Internal(format!("{spec}: k-th powers differ from the connection set")));
        }
    }

    let zero = FieldElement::ZERO;
    let mut out: Vec<Option<(FieldElement, FieldElement)>> = vec![None; n];
    out[0] = Some((zero, zero));
    let mut covered = 1usize;
    for &s in &layer1 {
        out[s.index()] = Some((root[s.index()].unwrap(), zero));
        covered += 1;
    }
    if g == 2 {
        'outer: for &s1 in &layer1 {
            for &s2 in &layer1 {
                let t = field.add(s1, s2);
                if out[t.index()].is_none() {
                    out[t.index()] = Some((root[s1.index()].unwrap(), root[s2.index()].unwrap()));
                    covered += 1;
                    if covered == n {
                        break 'outer;
                    }
                }
            }
        }
    }
    if covered != n {
        return Err(Error::Internal(format!("{spec}: {} elements are not sums of {g} powers", n - covered)));
    }
    Ok(out.into_iter().map(Option::unwrap).collect())
}

/// Closed Ramanujan rule: every complement is Ramanujan, and Γ is exactly
/// when its `ℓ = 1` normalization has `q ∈ {2, 3, 4}` and `m ≥ 4`.
pub fn ramanujan_closed_rule(spec: &GraphSpec) -> Result<bool> {
    spec.require_proper()?;
    if spec.complemented {
        return Ok(true);
    }
    if spec.is_half() {
        return Err(Error::Disconnected);
    }
    let norm = spec.normalized()?;
    let q = norm.q();
    Ok(q >= BigInt::from(2) && q <= BigInt::from(4) && norm.ell == 1 && norm.m >= 4)
}

/// `λ² ≤ 4(k − 1)` over the nontrivial spectrum, in big integers.
pub fn ramanujan_by_inequality(spec: &GraphSpec) -> Result<bool> {
    spec.require_proper()?;
    let spec_big = spectrum::<BigInt>(spec)?;
    if !spec_big.is_connected() {
        return Err(Error::Disconnected);
    }
    spec_big.satisfies_ramanujan_bound()
}

/// Both evaluations; disagreement is an internal error.
pub fn is_ramanujan(spec: &GraphSpec) -> Result<bool> {
    let by_ineq = ramanujan_by_inequality(spec)?;
    let closed = if spec.complemented && spec.is_half() { by_ineq } else { ramanujan_closed_rule(spec)? };
    if by_ineq != closed {
        return Err(Error::Internal(format!(
            "{spec}: closed classification says {closed}, eigenvalue bound says {by_ineq}"
        )));
    }
    Ok(by_ineq)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyRow {
    pub t: u32,
    pub spec: GraphSpec,
    pub srg: SrgRecord<BigInt>,
    pub spectrum: Spectrum<BigInt>,
}

impl FamilyRow {
    pub fn srg_string(&self) -> String {
        let (v, k, e, d) = self.srg.tuple();
        format!("({v},{k},{e},{d})")
    }

    /// `t, graph, srg, spectrum` as rendered in the family tables.
    pub fn columns(&self) -> [String; 4] {
        [self.t.to_string(), self.spec.label(), self.srg_string(), self.spectrum.to_string()]
    }
}

impl Serialize for FamilyRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (v, k, e, d) = self.srg.tuple();
        let mut st = serializer.serialize_struct("FamilyRow", 4)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("graph", &self.spec.label())?;
        st.serialize_field("srg", &[v.to_string(), k.to_string(), e.to_string(), d.to_string()])?;
        st.serialize_field("spectrum", &self.spectrum.to_string())?;
        st.end()
    }
}

/// The displayed t-formulas for each base: `(h, c, e0, d0, e0_bar)` with
/// `e = (q^{2t} + c(-q)^{t+1} - e0)/h²` and so on.
fn family_constants(q: u64) -> Option<(i64, i64, i64, i64, i64)> {
    match q {
        2 => Some((3, 1, 8, 2, 14)),
        3 => Some((4, 2, 11, 3, 27)),
        4 => Some((5, 3, 14, 4, 44)),
        _ => None,
    }
}

type Tuple = (BigInt, BigInt, BigInt, BigInt);

/// `(Γ_{q,2t}(1), co-Γ_{q,2t}(1))` parameters from the per-family displays.
pub fn family_formula(q: u64, t: u32) -> Result<(Tuple, Tuple)> {
    let (h, c, e0, d0, eb0) =
        family_constants(q).ok_or_else(|| Error::InvalidSpec(format!("family base must be 2, 3 or 4, got {q}")))?;
    let qb = BigInt::from(q);
    let v = num_traits::Pow::pow(&qb, 2 * t);
    let v1 = &v * &qb * &qb;
    let alt = |e: u32| num_traits::Pow::pow(-qb.clone(), e);
    let h = BigInt::from(h);
    let h2 = &h * &h;
    let c = BigInt::from(c);
    let k = exact_div(&(&v - 1), &h, "family k")?;
    let e = exact_div(&(&v + &c * alt(t + 1) - e0), &h2, "family e")?;
    let d = exact_div(&(&v + &c * alt(t) - d0), &h2, "family d")?;
    let kb = exact_div(&((&h - 1) * (&v - 1)), &h, "family k bar")?;
    let eb = exact_div(&(&v1 + &c * alt(t) - eb0), &h2, "family e bar")?;
    let db = exact_div(&(&v1 + &c * alt(t + 1) - d0), &h2, "family d bar")?;
    Ok(((v.clone(), k, e, d), (v, kb, eb, db)))
}

/// Rows for `Γ_{q,2t}(1)` and its complement, `t = 2..=t_max`.
pub fn family_table(q: u64, t_max: u32) -> Result<Vec<FamilyRow>> {
    let (p, s) = match q {
        2 => (2, 1),
        3 => (3, 1),
        4 => (2, 2),
        _ => return Err(Error::InvalidSpec(format!("family base must be 2, 3 or 4, got {q}"))),
    };
    let per_t: Vec<Result<Vec<FamilyRow>>> = (2..=t_max.max(1))
        .filter(|&t| t >= 2)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|t| {
            let primal = GraphSpec::new(p, s, 2 * t, 1)?;
            let (f, fb) = family_formula(q, t)?;
            let mut rows = Vec::with_capacity(2);
            for (g, expect) in [(primal, f), (primal.complement(), fb)] {
                let srg = srg_params::<BigInt>(&g)?;
                if srg.tuple() != expect {
                    return Err(Error::Internal(format!("{g}: family formula disagrees with the general parameters")));
                }
                rows.push(FamilyRow { t, spec: g, srg, spectrum: spectrum::<BigInt>(&g)? });
            }
            Ok(rows)
        })
        .collect();
    let mut out = Vec::new();
    for rows in per_t {
        out.extend(rows?);
    }
    Ok(out)
}

/// One factor `(1 − s·u + (k−1)u²)^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaFactor {
    pub s: BigInt,
    pub exponent: BigInt,
}

/// `ζ(u)^{-1} = (1 − u²)^{e−n} Π (1 − s u + (k−1)u²)^{mult}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaFactorization {
    pub degree: BigInt,
    pub square_factor_exponent: BigInt,
    pub factors: Vec<ZetaFactor>,
}

impl ZetaFactorization {
    pub fn quad_coeff(&self) -> BigInt {
        &self.degree - 1
    }

    /// `(linear, quadratic, exponent)` coefficients of each factor.
    pub fn coefficient_triples(&self) -> Vec<(BigInt, BigInt, BigInt)> {
        self.factors.iter().map(|f| (-f.s.clone(), self.quad_coeff(), f.exponent.clone())).collect()
    }

    /// Degree of the reciprocal zeta polynomial.
    pub fn total_degree(&self) -> BigInt {
        let sum: BigInt = self.factors.iter().map(|f| &f.exponent * 2).sum();
        &self.square_factor_exponent * 2 + sum
    }

    /// `ζ(u)^{-1}` at an integer point.
    pub fn reciprocal_at(&self, u: &BigInt) -> Result<BigInt> {
        let mut acc = power(BigInt::one() - u * u, &self.square_factor_exponent)?;
        for f in &self.factors {
            acc *= power(BigInt::one() - &f.s * u + self.quad_coeff() * u * u, &f.exponent)?;
        }
        Ok(acc)
    }
}

/// `base^e` for `e >= 0`; exponents beyond `u32` only for bases in `{-1, 0, 1}`.
fn power(base: BigInt, e: &BigInt) -> Result<BigInt> {
    if e.is_zero() {
        return Ok(BigInt::one());
    }
    if base.is_zero() || base.is_one() {
        return Ok(base);
    }
    if base == BigInt::from(-1) {
        return Ok(if e.is_odd() { base } else { BigInt::one() });
    }
    let e = e.to_u32().ok_or(Error::Overflow)?;
    Ok(num_traits::Pow::pow(base, e))
}

fn poly_term(coeff: &BigInt, var: &str, first: bool) -> String {
    let sign = if coeff.is_negative() { "-" } else { "+" };
    let mag = coeff.abs();
    let body = if mag.is_one() { var.to_string() } else { format!("{mag}{var}") };
    if first && !coeff.is_negative() {
        body
    } else {
        format!("{sign}{body}")
    }
}

impl fmt::Display for ZetaFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1-u^2)^{}", self.square_factor_exponent)?;
        for (lin, quad, e) in self.coefficient_triples() {
            let mut inner = "1".to_string();
            if !lin.is_zero() {
                inner += &poly_term(&lin, "u", false);
            }
            inner += &poly_term(&quad, "u^2", false);
            if e.is_one() {
                write!(f, " ({inner})")?;
            } else {
                write!(f, " ({inner})^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for ZetaFactorization {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Factor {
            linear_coeff: String,
            quad_coeff: String,
            exp: String,
        }
        let factors: Vec<Factor> = self
            .coefficient_triples()
            .into_iter()
            .map(|(l, q, e)| Factor { linear_coeff: l.to_string(), quad_coeff: q.to_string(), exp: e.to_string() })
            .collect();
        let mut st = serializer.serialize_struct("ZetaFactorization", 2)?;
        st.serialize_field("square_exp", &self.square_factor_exponent.to_string())?;
        st.serialize_field("factors", &factors)?;
        st.end()
    }
}

pub fn ihara_zeta(spec: &GraphSpec) -> Result<ZetaFactorization> {
    if spec.is_degenerate() {
        return Err(Error::DegenerateGraph);
    }
    let sp = spectrum::<BigInt>(spec)?;
    if !sp.is_connected() {
        return Err(Error::Disconnected);
    }
    let k = sp.largest().clone();
    if sp.multiplicity(&-k.clone()) > BigInt::zero() {
        return Err(Error::NotApplicable(format!("{spec} is bipartite")));
    }
    let n = spec.order();
    let edges = exact_div(&(&n * &k), &BigInt::from(2), "edge count")?;
    let square = &edges - &n;
    if k.is_even() && square != (&k / 2 - 1) * &n {
        return Err(Error::Internal(format!("{spec}: e - n differs from (k/2 - 1)n")));
    }
    let factors = sp.pairs().iter().map(|(s, mult)| ZetaFactor { s: s.clone(), exponent: mult.clone() }).collect();
    let z = ZetaFactorization { degree: k, square_factor_exponent: square, factors };
    if z.total_degree() != &edges * 2 {
        return Err(Error::Internal(format!("{spec}: zeta degree differs from 2e")));
    }
    Ok(z)
}
