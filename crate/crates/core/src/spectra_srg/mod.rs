//! Closed forms for the spectra and strongly regular parameters of
//! Γ_{q,m}(ℓ) and its complement, exact for any size.

mod bounds;
mod counts;

use std::fmt;

use num_bigint::BigInt;
use serde::ser::{Serialize, SerializeSeq, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::paley_graphs::GraphSpec;
use crate::scalar::{self, add, exact_div, from_u64, mul, neg, pow, sub, ExactInt};

pub use bounds::{invariant_bounds, InvariantBounds};
pub use counts::{closed_walks, spanning_trees};

/// Eigenvalues with multiplicities, strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Spectrum<T = BigInt> {
    pairs: Vec<(T, T)>,
}

impl<T: ExactInt> Spectrum<T> {
    /// Sorts, merges repeated eigenvalues and drops zero multiplicities.
    pub fn new(mut pairs: Vec<(T, T)>) -> Self {
        pairs.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(T, T)> = Vec::with_capacity(pairs.len());
        for (l, m) in pairs {
            match out.last_mut() {
                Some((l0, m0)) if *l0 == l => *m0 = m0.clone() + m,
                _ => out.push((l, m)),
            }
        }
        out.retain(|(_, m)| !m.is_zero());
        Spectrum { pairs: out }
    }

    pub fn pairs(&self) -> &[(T, T)] {
        &self.pairs
    }

    pub fn largest(&self) -> &T {
        &self.pairs[0].0
    }

    /// The largest eigenvalue below the degree, or the degree itself when it repeats.
    pub fn second_largest(&self) -> &T {
        if self.pairs[0].1 > T::one() || self.pairs.len() == 1 {
            &self.pairs[0].0
        } else {
            &self.pairs[1].0
        }
    }

    pub fn smallest(&self) -> &T {
        &self.pairs[self.pairs.len() - 1].0
    }

    pub fn multiplicity(&self, lambda: &T) -> T {
        self.pairs.iter().find(|(l, _)| l == lambda).map_or_else(T::zero, |(_, m)| m.clone())
    }

    /// Σ λ^j · mult.
    pub fn moment(&self, j: u32) -> Result<T> {
        self.pairs.iter().try_fold(T::zero(), |acc, (l, m)| add(&acc, &mul(&pow(l, j as u64)?, m)?))
    }

    /// Σ mult = v, Σ λ mult = 0 and Σ λ² mult = v k.
    pub fn check_moments(&self, v: &T, k: &T) -> Result<()> {
        let m0 = self.moment(0)?;
        let m1 = self.moment(1)?;
        let m2 = self.moment(2)?;
        if m0 != *v || !m1.is_zero() || m2 != mul(v, k)? {
            return Err(Error::Internal(format!(
                "spectrum {self} fails moment identities (v={v}, k={k}): {m0}, {m1}, {m2}"
            )));
        }
        Ok(())
    }

    /// Largest absolute value among eigenvalues other than ±k (k the top eigenvalue).
    pub fn nontrivial_radius(&self) -> T {
        let k = self.largest().clone();
        let mut r = T::zero();
        for (i, (l, m)) in self.pairs.iter().enumerate() {
            let trivial = (i == 0 && m.is_one()) || *l == -k.clone();
            if !trivial && l.abs() > r {
                r = l.abs();
            }
        }
        r
    }

    /// The graph is connected exactly when the degree is a simple eigenvalue.
    pub fn is_connected(&self) -> bool {
        self.pairs[0].1.is_one()
    }

    /// λ² ≤ 4(k − 1) for the nontrivial radius λ, evaluated exactly.
    pub fn satisfies_ramanujan_bound(&self) -> Result<bool> {
        let k = self.largest();
        let r = self.nontrivial_radius();
        let bound = mul(&from_u64(4)?, &sub(k, &T::one())?)?;
        Ok(mul(&r, &r)? <= bound)
    }

    pub fn to_big(&self) -> Spectrum<BigInt> {
        Spectrum { pairs: self.pairs.iter().map(|(l, m)| (scalar::to_big(l), scalar::to_big(m))).collect() }
    }
}

impl<T: fmt::Display> fmt::Display for Spectrum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(l, m)| format!("[{l}]^{m}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Serialized as `[["λ", "mult"], ...]` with decimal strings.
impl<T: fmt::Display> Serialize for Spectrum<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.pairs.len()))?;
        for (l, m) in &self.pairs {
            seq.serialize_element(&[l.to_string(), m.to_string()])?;
        }
        seq.end()
    }
}

/// The three distinct eigenvalues of a connected member (or its complement).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenvalues<T = BigInt> {
    pub k: T,
    pub upsilon: T,
    pub mu: T,
}

/// Shared quantities of a proper spec.
#[derive(Debug, Clone)]
pub(crate) struct Closed<T> {
    pub v: T,
    pub ql: T,
    /// q^{m/2}
    pub a: T,
    /// ε_ℓ = (-1)^{m_ℓ/2}
    pub eps: T,
    pub half: bool,
    pub half_odd: bool,
    pub k: T,
    pub upsilon: Option<T>,
    pub mu: Option<T>,
}

pub(crate) fn closed<T: ExactInt>(spec: &GraphSpec) -> Result<Closed<T>> {
    spec.primal().require_proper()?;
    let q = pow(&from_u64::<T>(spec.p)?, spec.s as u64)?;
    let v = pow(&q, spec.m as u64)?;
    let ql = pow(&q, spec.ell as u64)?;
    let a = pow(&q, (spec.m / 2) as u64)?;
    let half_odd = (spec.m_ell() / 2) % 2 == 1;
    let eps: T = if half_odd { -T::one() } else { T::one() };
    let half = spec.is_half();
    let one = T::one();
    let denom = add(&ql, &one)?;
    if half {
        return Ok(Closed { k: sub(&a, &one)?, v, ql, a, eps, half, half_odd, upsilon: None, mu: None });
    }
    let k = exact_div(&sub(&v, &one)?, &denom, "k")?;
    let upsilon = exact_div(&sub(&mul(&eps, &a)?, &one)?, &denom, "upsilon")?;
    let mu = exact_div(&sub(&neg(&mul(&mul(&eps, &a)?, &ql)?)?, &one)?, &denom, "mu")?;
    Ok(Closed { v, ql, a, eps, half, half_odd, k, upsilon: Some(upsilon), mu: Some(mu) })
}

impl<T: ExactInt> Closed<T> {
    pub fn uv(&self) -> Result<(T, T)> {
        match (&self.upsilon, &self.mu) {
            (Some(u), Some(m)) => Ok((u.clone(), m.clone())),
            _ => Err(Error::Disconnected),
        }
    }
}

/// `k, υ, μ` of Γ (or `k̄, ῡ, μ̄` of the complement) when `ℓ ≠ m/2`.
pub fn eigenvalues<T: ExactInt>(spec: &GraphSpec) -> Result<Eigenvalues<T>> {
    let c = closed::<T>(spec)?;
    let (u, m) = c.uv()?;
    if spec.complemented {
        let one = T::one();
        Ok(Eigenvalues { k: mul(&c.ql, &c.k)?, upsilon: sub(&neg(&one)?, &u)?, mu: sub(&neg(&one)?, &m)? })
    } else {
        Ok(Eigenvalues { k: c.k, upsilon: u, mu: m })
    }
}

/// Closed-form spectrum of a proper spec or its complement.
pub fn spectrum<T: ExactInt>(spec: &GraphSpec) -> Result<Spectrum<T>> {
    let c = closed::<T>(spec)?;
    let one = T::one();
    let pairs = match (c.half, spec.complemented) {
        (true, false) => vec![(c.k.clone(), c.a.clone()), (neg(&one)?, mul(&c.a, &c.k)?)],
        (true, true) => vec![(mul(&c.a, &c.k)?, one.clone()), (T::zero(), mul(&c.a, &c.k)?), (neg(&c.a)?, c.k.clone())],
        (false, _) => {
            let ev = eigenvalues::<T>(spec)?;
            let qk = mul(&c.ql, &c.k)?;
            vec![(ev.k, one.clone()), (ev.upsilon, qk), (ev.mu, c.k.clone())]
        }
    };
    let s = Spectrum::new(pairs);
    let degree = s.largest().clone();
    s.check_moments(&c.v, &degree)?;
    Ok(s)
}

/// Spectrum of an srg(v,k,e,d) through the quadratic A² − (e−d)A − (k−d)I = dJ.
pub fn spectrum_from_srg<T: ExactInt>(v: &T, k: &T, e: &T, d: &T) -> Result<Spectrum<T>> {
    let one = T::one();
    let two = scalar::two::<T>();
    let ed = sub(e, d)?;
    let disc = add(&mul(&ed, &ed)?, &mul(&from_u64(4)?, &sub(k, d)?)?)?;
    let root = scalar::isqrt(&disc)?;
    if mul(&root, &root)? != disc {
        return Err(Error::NotApplicable(format!("irrational eigenvalues (discriminant {disc})")));
    }
    let r = exact_div(&add(&ed, &root)?, &two, "theta")?;
    let s = exact_div(&sub(&ed, &root)?, &two, "tau")?;
    let vm1 = sub(v, &one)?;
    // f + g = v − 1 and k + f r + g s = 0
    let g = exact_div(&add(k, &mul(&vm1, &r)?)?, &sub(&r, &s)?, "multiplicity of tau")?;
    let f = sub(&vm1, &g)?;
    Ok(Spectrum::new(vec![(k.clone(), one), (r, f), (s, g)]))
}

/// Serialized with decimal strings for every integer.
impl<T: ExactInt> Serialize for SrgRecord<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SrgRecord", 9)?;
        st.serialize_field("v", &self.v.to_string())?;
        st.serialize_field("k", &self.k.to_string())?;
        st.serialize_field("e", &self.e.to_string())?;
        st.serialize_field("d", &self.d.to_string())?;
        st.serialize_field("primitive", &self.primitive)?;
        st.serialize_field("conference", &self.conference)?;
        let ls = self.latin_square.as_ref().map(|(s, u)| [s.to_string(), u.to_string()]);
        st.serialize_field("latin_square", &ls)?;
        st.serialize_field("ramanujan", &self.ramanujan)?;
        st.serialize_field("vertex_connectivity", &self.vertex_connectivity.to_string())?;
        st.end()
    }
}

/// Strongly regular parameters and derived flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrgRecord<T = BigInt> {
    pub v: T,
    pub k: T,
    pub e: T,
    pub d: T,
    pub primitive: bool,
    pub conference: bool,
    pub latin_square: Option<(T, T)>,
    pub ramanujan: bool,
    pub vertex_connectivity: T,
}

impl<T: ExactInt> SrgRecord<T> {
    pub fn tuple(&self) -> (T, T, T, T) {
        (self.v.clone(), self.k.clone(), self.e.clone(), self.d.clone())
    }

    /// (v − k − 1) d = k (k − e − 1).
    pub fn satisfies_main_relation(&self) -> Result<bool> {
        let one = T::one();
        let lhs = mul(&sub(&sub(&self.v, &self.k)?, &one)?, &self.d)?;
        let rhs = mul(&self.k, &sub(&sub(&self.k, &self.e)?, &one)?)?;
        Ok(lhs == rhs)
    }
}

/// Parameters of the complement of srg(v,k,e,d).
pub fn complement_tuple<T: ExactInt>(v: &T, k: &T, e: &T, d: &T) -> Result<(T, T, T, T)> {
    let one = T::one();
    let two = scalar::two::<T>();
    let kb = sub(&sub(v, k)?, &one)?;
    let eb = add(&sub(&sub(v, &two)?, &mul(&two, k)?)?, d)?;
    let db = add(&sub(v, &mul(&two, k)?)?, e)?;
    Ok((v.clone(), kb, eb, db))
}

/// `(e, d)` of Γ from its parameters when `ℓ ≠ m/2`.
fn primal_ed<T: ExactInt>(c: &Closed<T>) -> Result<(T, T)> {
    let one = T::one();
    let three = from_u64::<T>(3)?;
    let ql = &c.ql;
    let denom = pow(&add(ql, &one)?, 2)?;
    let qlm1 = sub(ql, &one)?;
    let e_num =
        sub(&sub(&sub(&c.v, &mul(&mul(&mul(&c.eps, &c.a)?, ql)?, &qlm1)?)?, &mul(&three, ql)?)?, &scalar::two())?;
    let d_num = sub(&add(&c.v, &mul(&mul(&c.eps, &c.a)?, &qlm1)?)?, ql)?;
    let e = exact_div(&e_num, &denom, "e")?;
    let d = exact_div(&d_num, &denom, "d")?;
    let (u, m) = c.uv()?;
    let d_spec = add(&c.k, &mul(&u, &m)?)?;
    let e_spec = add(&add(&d_spec, &u)?, &m)?;
    if e != e_spec || d != d_spec {
        return Err(Error::Internal(format!("closed form gives ({e},{d}) but the spectrum gives ({e_spec},{d_spec})")));
    }
    Ok((e, d))
}

/// `(ē, d̄)` of the complement.
fn complement_ed<T: ExactInt>(c: &Closed<T>) -> Result<(T, T)> {
    let one = T::one();
    let three = from_u64::<T>(3)?;
    let ql = &c.ql;
    let denom = pow(&add(ql, &one)?, 2)?;
    let qlm1 = sub(ql, &one)?;
    let eps_a = mul(&c.eps, &c.a)?;
    let e_num = sub(&add(&mul(&mul(ql, ql)?, &sub(&c.v, &scalar::two())?)?, &mul(&eps_a, &qlm1)?)?, &mul(&three, ql)?)?;
    let d_num = sub(&mul(ql, &sub(&mul(&c.v, ql)?, &one)?)?, &mul(&mul(&eps_a, ql)?, &qlm1)?)?;
    Ok((exact_div(&e_num, &denom, "e bar")?, exact_div(&d_num, &denom, "d bar")?))
}

/// Strongly regular parameters of a proper spec or its complement.
pub fn srg_params<T: ExactInt>(spec: &GraphSpec) -> Result<SrgRecord<T>> {
    if spec.is_degenerate() && !spec.complemented {
        return Err(Error::DegenerateGraph);
    }
    let c = closed::<T>(spec)?;
    let one = T::one();
    let (k, e, d) = match (c.half, spec.complemented) {
        (true, false) => (c.k.clone(), sub(&c.k, &one)?, T::zero()),
        (true, true) => (mul(&c.a, &c.k)?, mul(&c.a, &sub(&c.k, &one)?)?, mul(&c.a, &c.k)?),
        (false, false) => {
            let (e, d) = primal_ed(&c)?;
            (c.k.clone(), e, d)
        }
        (false, true) => {
            let (e, d) = primal_ed(&c)?;
            let (eb, db) = complement_ed(&c)?;
            let (_, kb, eb2, db2) = complement_tuple(&c.v, &c.k, &e, &d)?;
            let k_bar = mul(&c.ql, &c.k)?;
            if (kb.clone(), eb2, db2) != (k_bar, eb.clone(), db.clone()) {
                return Err(Error::Internal(format!(
                    "complement closed form disagrees with complementation for {spec}"
                )));
            }
            (kb, eb, db)
        }
    };
    let v = c.v.clone();
    let two = scalar::two::<T>();
    let conference = add(&mul(&two, &k)?, &mul(&sub(&v, &one)?, &sub(&e, &d)?)?)?.is_zero();
    let spec_spectrum = spectrum::<T>(spec)?;
    let connected = spec_spectrum.is_connected();
    let latin_square = if spec.complemented || c.half { None } else { latin_square_class::<T>(spec)? };
    let rec = SrgRecord {
        v,
        k: k.clone(),
        e,
        d,
        primitive: !c.half,
        conference,
        latin_square,
        ramanujan: connected && spec_spectrum.satisfies_ramanujan_bound()?,
        vertex_connectivity: if connected { k } else { T::zero() },
    };
    if !rec.satisfies_main_relation()? {
        return Err(Error::Internal(format!("{spec}: (v-k-1)d != k(k-e-1)")));
    }
    Ok(rec)
}

/// Intersection array {b0, b1; c1, c2} of a connected strongly regular graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionArray<T = BigInt> {
    pub b0: T,
    pub b1: T,
    pub c1: T,
    pub c2: T,
}

impl<T: ExactInt> IntersectionArray<T> {
    pub fn as_vec(&self) -> Vec<T> {
        vec![self.b0.clone(), self.b1.clone(), self.c1.clone(), self.c2.clone()]
    }
}

/// Γ: {k, q^ℓ d; 1, d}; complement: {q^ℓ k, k − d; 1, v − 2k + e}.
pub fn intersection_array<T: ExactInt>(spec: &GraphSpec) -> Result<IntersectionArray<T>> {
    let c = closed::<T>(spec)?;
    let one = T::one();
    if c.half {
        if !spec.complemented {
            return Err(Error::Disconnected);
        }
        let r = srg_params::<T>(spec)?;
        return Ok(IntersectionArray { b1: sub(&sub(&r.k, &r.e)?, &one)?, b0: r.k, c1: one, c2: r.d });
    }
    let primal = srg_params::<T>(&spec.primal())?;
    let arr = if spec.complemented {
        let two = scalar::two::<T>();
        IntersectionArray {
            b0: mul(&c.ql, &c.k)?,
            b1: sub(&primal.k, &primal.d)?,
            c1: one.clone(),
            c2: add(&sub(&c.v, &mul(&two, &primal.k)?)?, &primal.e)?,
        }
    } else {
        IntersectionArray { b0: c.k.clone(), b1: mul(&c.ql, &primal.d)?, c1: one.clone(), c2: primal.d.clone() }
    };
    let rec = srg_params::<T>(spec)?;
    if arr.b0 != rec.k || arr.b1 != sub(&sub(&rec.k, &rec.e)?, &one)? || arr.c2 != rec.d {
        return Err(Error::Internal(format!("intersection array of {spec} disagrees with its srg parameters")));
    }
    Ok(arr)
}

/// `(s, u) = (υ, μ − υ)` when `m_ℓ/2` is odd, checked against PL_s(u).
pub fn latin_square_class<T: ExactInt>(spec: &GraphSpec) -> Result<Option<(T, T)>> {
    let c = closed::<T>(spec)?;
    if spec.complemented || !c.half_odd {
        return Ok(None);
    }
    let (s, mu) = c.uv()?;
    let u = sub(&mu, &s)?;
    let one = T::one();
    let three = from_u64::<T>(3)?;
    let (e, d) = primal_ed(&c)?;
    let pl = (
        mul(&u, &u)?,
        neg(&mul(&s, &sub(&u, &one)?)?)?,
        add(&add(&mul(&s, &s)?, &mul(&three, &s)?)?, &u)?,
        mul(&s, &add(&s, &one)?)?,
    );
    if pl != (c.v.clone(), c.k.clone(), e, d) {
        return Err(Error::Internal(format!("{spec} does not match PL_{s}({u})")));
    }
    Ok(Some((s, u)))
}

/// Returns the relations among k, υ, μ and the complement eigenvalues that fail.
pub fn eigenvalue_relations_check<T: ExactInt>(spec: &GraphSpec) -> Result<Vec<String>> {
    let c = closed::<T>(spec)?;
    let (u, m) = c.uv()?;
    let one = T::one();
    let minus_one = neg(&one)?;
    let bar = eigenvalues::<T>(&spec.primal().complement())?;
    let mut failed = Vec::new();
    let mut check = |ok: bool, name: &str| {
        if !ok {
            failed.push(name.to_string());
        }
    };
    check(c.k == mul(&add(&mul(&c.eps, &c.a)?, &one)?, &u)?, "k = (eps q^(m/2) + 1) upsilon");
    check(neg(&mul(&c.ql, &u)?)? == add(&m, &one)?, "-q^l upsilon = mu + 1");
    check(u.gcd(&m).is_one(), "gcd(upsilon, mu) = 1");
    check(bar.k == mul(&c.ql, &c.k)?, "k bar = q^l k");
    check(bar.mu == mul(&c.ql, &u)?, "mu bar = q^l upsilon");
    check(mul(&add(&bar.upsilon, &one)?, &c.ql)? == add(&m, &one)?, "upsilon bar + 1 = (mu + 1)/q^l");
    let coprime = match (exact_div(&bar.upsilon, &c.ql, "upsilon bar"), exact_div(&bar.mu, &c.ql, "mu bar")) {
        (Ok(x), Ok(y)) => x.gcd(&y).is_one(),
        _ => false,
    };
    check(coprime, "gcd(upsilon bar / q^l, mu bar / q^l) = 1");
    check(add(&u, &bar.upsilon)? == minus_one, "upsilon + upsilon bar = -1");
    check(add(&m, &bar.mu)? == minus_one, "mu + mu bar = -1");
    Ok(failed)
}

/// υ_ℓ at degree 2m + 2ℓ equals μ_ℓ at degree 2m.
pub fn shift_law_holds<T: ExactInt>(p: u64, s: u32, m: u32, ell: u32) -> Result<bool> {
    let hi = GraphSpec::new(p, s, 2 * m + 2 * ell, ell)?;
    let lo = GraphSpec::new(p, s, 2 * m, ell)?;
    Ok(eigenvalues::<T>(&hi)?.upsilon == eigenvalues::<T>(&lo)?.mu)
}

/// The sign ε_ℓ = (-1)^{m_ℓ/2}.
pub fn epsilon(spec: &GraphSpec) -> i8 {
    if (spec.m_ell() / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}
