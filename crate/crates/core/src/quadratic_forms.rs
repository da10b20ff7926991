//! The trace forms Q_{γ,ℓ}(x) = Tr_{q^m/q}(γ x^{q^ℓ+1}), their value
//! distributions, exponential sums and rank/type classification.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldTable};

const ABSENT: u32 = u32::MAX;

/// Rank and type ε of a quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormClass {
    pub rank: u32,
    #[serde(rename = "type")]
    pub sign: i8,
}

/// Shared tables for every form Q_{γ,ℓ} over one field and one ℓ.
#[derive(Debug, Clone)]
pub struct FormFamily<'a> {
    field: &'a FieldTable,
    ell: u32,
    q: u64,
    power: u128,
    to_q: Vec<FieldElement>,
    to_p: Vec<u32>,
    q_elements: Vec<FieldElement>,
}

impl<'a> FormFamily<'a> {
    pub fn new(field: &'a FieldTable, ell: u32) -> Result<Self> {
        let params = field.params();
        let s = params.s;
        let q = params.p.pow(s);
        let g = field.group_order() as u128;
        let power = ((q as u128).pow(ell) + 1) % g.max(1);
        let to_q = field.trace_table(s)?;
        let q_elements = field.subfield_elements(s)?;
        let mut to_p = vec![ABSENT; field.order()];
        for &xi in &q_elements {
            to_p[xi.index()] = field.trace(xi, s, 1)?.0;
        }
        Ok(FormFamily { field, ell, q, power, to_q, to_p, q_elements })
    }

    pub fn field(&self) -> &FieldTable {
        self.field
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.field.params().m
    }

    /// Elements of F_q: zero, then by discrete log.
    pub fn q_elements(&self) -> &[FieldElement] {
        &self.q_elements
    }

    pub fn form(&self, gamma: FieldElement) -> Result<TraceForm<'_>> {
        if gamma.is_zero() {
            return Err(Error::ZeroElement);
        }
        self.field.element(gamma.0 as u64)?;
        Ok(TraceForm { family: self, gamma })
    }

    /// `m_ℓ = m / (m, ℓ)`.
    pub fn m_ell(&self) -> u32 {
        self.m() / self.m().gcd(&self.ell)
    }

    /// ε_ℓ = (-1)^{m_ℓ/2}.
    pub fn epsilon(&self) -> Result<i8> {
        let me = self.m_ell();
        if me % 2 == 1 {
            return Err(Error::OutOfTheory(format!("m_ell = {me} is odd")));
        }
        Ok(if (me / 2) % 2 == 0 { 1 } else { -1 })
    }
}

/// One form Q_{γ,ℓ}.
#[derive(Debug, Clone, Copy)]
pub struct TraceForm<'a> {
    pub family: &'a FormFamily<'a>,
    pub gamma: FieldElement,
}

impl TraceForm<'_> {
    pub fn field(&self) -> &FieldTable {
        self.family.field
    }

    pub fn ell(&self) -> u32 {
        self.family.ell
    }
}

/// Q_{γ,ℓ}(x), an element of F_q.
pub fn evaluate_form(f: &TraceForm<'_>, x: FieldElement) -> FieldElement {
    if x.is_zero() {
        return x;
    }
    let fam = f.family;
    let field = fam.field;
    let g = field.group_order() as u128;
    let lg = field.log(f.gamma).expect("gamma is nonzero") as u128;
    let lx = field.log(x).expect("x is nonzero") as u128;
    let y = field.exp(((lg + lx * fam.power) % g) as u64);
    fam.to_q[y.index()]
}

/// Histogram of Q over the field, indexed like [`FormFamily::q_elements`].
pub fn value_counts(f: &TraceForm<'_>) -> Vec<u64> {
    let fam = f.family;
    let mut slot = vec![ABSENT; fam.field.order()];
    for (i, xi) in fam.q_elements.iter().enumerate() {
        slot[xi.index()] = i as u32;
    }
    let mut counts = vec![0u64; fam.q_elements.len()];
    for x in fam.field.elements() {
        counts[slot[evaluate_form(f, x).index()] as usize] += 1;
    }
    counts
}

/// N_Q(ξ) by exhaustive evaluation.
pub fn count_kernel(f: &TraceForm<'_>, xi: FieldElement) -> Result<BigInt> {
    let s = f.field().params().s;
    if !f.field().in_subfield(xi, s) {
        return Err(Error::NotInSubfield { degree: s });
    }
    let n = f.field().elements().filter(|&x| evaluate_form(f, x) == xi).count();
    Ok(BigInt::from(n))
}

/// T_{Q,a} as an integer, by counting residues of Tr_{q/p}(a Q(x)).
pub fn exp_sum(f: &TraceForm<'_>, a: FieldElement) -> Result<BigInt> {
    let fam = f.family;
    let field = fam.field;
    let s = field.params().s;
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !field.in_subfield(a, s) {
        return Err(Error::NotInSubfield { degree: s });
    }
    let mut counts = vec![0u64; field.p() as usize];
    for x in field.elements() {
        let v = field.mul(a, evaluate_form(f, x));
        counts[fam.to_p[v.index()] as usize] += 1;
    }
    residue_sum(&counts)
}

/// N_0 - N_1 after checking that N_c is constant over c ≠ 0.
pub fn residue_sum(counts: &[u64]) -> Result<BigInt> {
    if counts.len() > 2 && counts[1..].iter().any(|&c| c != counts[1]) {
        return Err(Error::UnbalancedCounts(counts.to_vec()));
    }
    Ok(BigInt::from(counts[0]) - BigInt::from(counts[1]))
}

/// Klapper's closed-form rank and type.
pub fn classify_form(f: &TraceForm<'_>) -> Result<FormClass> {
    let fam = f.family;
    let field = fam.field;
    let m = fam.m();
    let d = m.gcd(&fam.ell);
    let eps = fam.epsilon()?;
    let degenerate = m - 2 * d;
    let t = field.log(f.gamma)?;
    let big_l = fam.q.pow(d) + 1;
    let (rank, sign) = if field.p() == 2 {
        // (q^m - 1, q^ℓ + 1) = q^d + 1 when m_ℓ is even
        if t % big_l == 0 {
            (degenerate, -eps)
        } else {
            (m, eps)
        }
    } else if eps == 1 {
        if t % big_l == 0 {
            (degenerate, -1)
        } else {
            (m, 1)
        }
    } else if t % big_l == big_l / 2 {
        (degenerate, 1)
    } else {
        (m, -1)
    };
    Ok(FormClass { rank, sign })
}

/// ν(ξ): q - 1 at zero and -1 elsewhere.
pub fn nu(q: u64, xi_is_zero: bool) -> i64 {
    if xi_is_zero {
        q as i64 - 1
    } else {
        -1
    }
}

/// N_Q(ξ) = q^{m-1} + ε ν(ξ) q^{m-r/2-1} for a form of even rank.
pub fn predicted_count(q: u64, m: u32, class: FormClass, xi_is_zero: bool) -> Result<BigInt> {
    if class.rank % 2 == 1 || class.rank > m || m == 0 {
        return Err(Error::OutOfTheory(format!("rank {} for m = {m}", class.rank)));
    }
    let qb = BigInt::from(q);
    let half = class.rank / 2;
    if half == m {
        return Err(Error::OutOfTheory("rank equals 2m".into()));
    }
    let j = m - half - 1;
    Ok(Pow::pow(&qb, m - 1) + BigInt::from(class.sign) * BigInt::from(nu(q, xi_is_zero)) * Pow::pow(&qb, j))
}

/// Recovers (rank, type) from a value histogram through the counting formula.
///
/// `counts[0]` is N_Q(0); the remaining entries are N_Q(ξ) for ξ ≠ 0.
pub fn class_from_counts(q: u64, m: u32, counts: &[u64]) -> Result<FormClass> {
    let qb = BigInt::from(q);
    let base = Pow::pow(&qb, m - 1);
    let diff = BigInt::from(counts[0]) - &base;
    if diff.is_zero() {
        return Err(Error::OutOfTheory("balanced histogram: odd rank".into()));
    }
    let sign: i8 = if diff > BigInt::zero() { 1 } else { -1 };
    let mag = BigInt::from(diff.magnitude().clone());
    let (mut quot, r) = mag.div_rem(&BigInt::from(q - 1));
    if !r.is_zero() {
        return Err(Error::OutOfTheory(format!("N(0) - q^(m-1) = {diff} is not a multiple of q-1")));
    }
    let mut j = 0u32;
    while quot > BigInt::from(1u8) && (&quot % &qb).is_zero() {
        quot /= &qb;
        j += 1;
    }
    if quot != BigInt::from(1u8) || j + 1 > m {
        return Err(Error::OutOfTheory(format!("N(0) - q^(m-1) = {diff} is not ±(q-1)q^j")));
    }
    let class = FormClass { rank: 2 * (m - 1 - j), sign };
    let nonzero = predicted_count(q, m, class, false)?;
    if counts[1..].iter().any(|&c| BigInt::from(c) != nonzero) {
        return Err(Error::OutOfTheory(format!("nonzero fibres {:?} differ from {nonzero}", &counts[1..])));
    }
    Ok(class)
}

/// ε q^{m - r/2}, the value of T_Q for a class.
pub fn predicted_exp_sum(q: u64, m: u32, class: FormClass) -> BigInt {
    BigInt::from(class.sign) * Pow::pow(BigInt::from(q), m - class.rank / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::{build_field, FieldParams};

    fn field(p: u64, s: u32, m: u32) -> FieldTable {
        build_field(FieldParams::new(p, s, m).unwrap()).unwrap()
    }

    #[test]
    fn f16_examples() {
        let k = field(2, 1, 4);
        let fam = FormFamily::new(&k, 1).unwrap();
        let in_s = fam.form(k.exp(3)).unwrap();
        assert_eq!(classify_form(&in_s).unwrap(), FormClass { rank: 2, sign: -1 });
        assert_eq!(exp_sum(&in_s, FieldElement::ONE).unwrap(), BigInt::from(-8));
        let out_s = fam.form(k.exp(1)).unwrap();
        assert_eq!(classify_form(&out_s).unwrap(), FormClass { rank: 4, sign: 1 });
        assert_eq!(exp_sum(&out_s, FieldElement::ONE).unwrap(), BigInt::from(4));
        let one = fam.form(FieldElement::ONE).unwrap();
        let counts = value_counts(&one);
        assert_eq!(counts.iter().sum::<u64>(), 16);
        assert_eq!(class_from_counts(2, 4, &counts).unwrap(), classify_form(&one).unwrap());
        assert_eq!(count_kernel(&one, FieldElement::ZERO).unwrap(), BigInt::from(counts[0]));
    }

    #[test]
    fn odd_q_examples() {
        let k = field(3, 1, 4);
        let fam = FormFamily::new(&k, 1).unwrap();
        assert_eq!(classify_form(&fam.form(FieldElement::ONE).unwrap()).unwrap(), FormClass { rank: 2, sign: -1 });
        let k = field(3, 1, 2);
        let fam = FormFamily::new(&k, 1).unwrap();
        let f = fam.form(k.exp(2)).unwrap();
        assert_eq!(classify_form(&f).unwrap(), FormClass { rank: 0, sign: 1 });
        assert_eq!(exp_sum(&f, FieldElement::ONE).unwrap(), BigInt::from(9));
    }

    #[test]
    fn out_of_theory() {
        let k = field(3, 1, 3);
        let fam = FormFamily::new(&k, 1).unwrap();
        let f = fam.form(FieldElement::ONE).unwrap();
        assert!(matches!(classify_form(&f), Err(Error::OutOfTheory(_))));
        assert!(matches!(exp_sum(&f, FieldElement::ONE), Err(Error::UnbalancedCounts(_))));
        assert_eq!(fam.form(FieldElement::ZERO).unwrap_err(), Error::ZeroElement);
    }
}
