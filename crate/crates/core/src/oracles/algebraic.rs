//! Field-level oracles: form classification by counting, character-sum
//! eigenvalues, coset decomposition, arc-transitivity and Waring witnesses.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::applications::WaringCertificate;
use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldTable};
use crate::paley_graphs::{BitMatrix, BitSet};
use crate::quadratic_forms::{class_from_counts, classify_form, exp_sum, predicted_exp_sum, value_counts, FormFamily};

/// Outcome of comparing Klapper's classification with value histograms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KlapperSweep {
    pub forms: usize,
    pub degenerate: usize,
    pub mismatches: Vec<String>,
}

/// Every `γ ≠ 0`: the closed class, the class recovered from counts and the
/// exponential sum must agree.
pub fn klapper_sweep(field: &FieldTable, ell: u32) -> Result<KlapperSweep> {
    let fam = FormFamily::new(field, ell)?;
    let q = fam.q();
    let m = fam.m();
    let rows: Vec<Result<(bool, Option<String>)>> = (1..field.order() as u32)
        .into_par_iter()
        .map(|i| {
            let f = fam.form(FieldElement(i))?;
            let closed = classify_form(&f)?;
            let counts = value_counts(&f);
            let mut problem = None;
            match class_from_counts(q, m, &counts) {
                Ok(c) if c == closed => {}
                Ok(c) => problem = Some(format!("gamma {i}: closed {closed:?}, counted {c:?}")),
                Err(e) => problem = Some(format!("gamma {i}: {e}")),
            }
            let t = exp_sum(&f, FieldElement::ONE)?;
            if problem.is_none() && t != predicted_exp_sum(q, m, closed) {
                problem = Some(format!("gamma {i}: T = {t}"));
            }
            Ok((closed.rank < m, problem))
        })
        .collect();
    let mut sweep = KlapperSweep { forms: rows.len(), degenerate: 0, mismatches: Vec::new() };
    for r in rows {
        let (deg, problem) = r?;
        sweep.degenerate += deg as usize;
        sweep.mismatches.extend(problem);
    }
    Ok(sweep)
}

/// `Σ_c counts[c] ζ_p^c` for a vector whose nonzero classes are balanced.
fn integral_character_sum(counts: &[u64]) -> Result<BigInt> {
    if counts[1..].iter().any(|&c| c != counts[1]) {
        return Err(Error::UnbalancedCounts(counts.to_vec()));
    }
    Ok(BigInt::from(counts[0]) - BigInt::from(counts[1]))
}

/// Eigenvalues `λ_b = Σ_{s ∈ C} ζ_p^{Tr(bs)}` of the Cayley graph whose
/// connection set is the neighbourhood of `0`, one per `b`.
pub fn character_eigenvalues(field: &FieldTable, adj: &BitMatrix) -> Result<Vec<BigInt>> {
    let tr = field.trace_table(1)?;
    let conn: Vec<FieldElement> = adj.neighbors(0).map(|s| FieldElement(s as u32)).collect();
    let p = field.p() as usize;
    (0..field.order() as u32)
        .into_par_iter()
        .map(|b| {
            let mut counts = vec![0u64; p];
            for &s in &conn {
                counts[tr[field.mul(FieldElement(b), s).index()].index()] += 1;
            }
            integral_character_sum(&counts)
        })
        .collect()
}

/// Sorted descending `(λ, multiplicity)` pairs.
pub fn eigenvalue_multiset(values: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.cmp(a));
    let mut out: Vec<(BigInt, BigInt)> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some((l, m)) if *l == x => *m += 1,
            _ => out.push((x, BigInt::from(1))),
        }
    }
    out
}

/// Squared comparison `λ² ≤ 4(k−1)` over the eigenvalues other than `±k`.
pub fn ramanujan_from_eigenvalues(values: &[BigInt], k: &BigInt) -> bool {
    let bound = (k - 1) * 4;
    let minus_k = -k.clone();
    let mut skipped_top = false;
    values.iter().all(|l| {
        if l == k && !skipped_top {
            skipped_top = true;
            return true;
        }
        *l == minus_k || l * l <= bound
    })
}

/// Result of splitting `F^*` into cosets of the connection set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetDecomposition {
    pub cosets: usize,
    pub coset_size: usize,
    pub partition: bool,
    pub symmetric: bool,
    pub complement_covered: bool,
}

/// The cosets `α^j S` of `S = N_Γ(0)`: a partition of `F^*` into symmetric
/// sets, with all but `S` itself making up `N_{co-Γ}(0)`.
pub fn coset_decomposition(
    field: &FieldTable,
    primal: &BitMatrix,
    complement: &BitMatrix,
) -> Result<CosetDecomposition> {
    let n = field.order();
    let s: Vec<FieldElement> = primal.neighbors(0).map(|x| FieldElement(x as u32)).collect();
    let group = field.group_order() as usize;
    if s.is_empty() || group % s.len() != 0 {
        return Err(Error::Internal("neighbourhood of 0 is not a subgroup of the right size".into()));
    }
    let index = group / s.len();
    let mut owner = vec![usize::MAX; n];
    let mut partition = true;
    let mut symmetric = true;
    let minus_one = field.neg(FieldElement::ONE);
    for j in 0..index {
        let a = field.exp(j as u64);
        let coset: BitSet = s.iter().map(|&x| field.mul(a, x).index()).collect();
        for x in coset.iter() {
            if owner[x] != usize::MAX {
                partition = false;
            }
            owner[x] = j;
            symmetric &= coset.contains(field.mul(minus_one, FieldElement(x as u32)).index());
        }
    }
    partition &= owner[1..].iter().all(|&o| o != usize::MAX) && owner[0] == usize::MAX;
    let complement_covered = (1..n).all(|x| complement.get(0, x) == (owner[x] != 0));
    Ok(CosetDecomposition { cosets: index, coset_size: s.len(), partition, symmetric, complement_covered })
}

fn preserves_edges(adj: &BitMatrix, map: impl Fn(usize) -> usize + Sync) -> bool {
    (0..adj.n()).into_par_iter().all(|i| {
        let fi = map(i);
        adj.neighbors(i).all(|j| adj.get(fi, map(j)))
    })
}

/// Every arc `(x, y)` is the image of `(0, 1)` under `z ↦ (y − x) z + x`,
/// and every such map is an automorphism.
pub fn arc_transitivity_witness(field: &FieldTable, adj: &BitMatrix) -> bool {
    let n = adj.n();
    if !adj.get(0, 1) {
        return false;
    }
    let s: Vec<usize> = adj.neighbors(0).collect();
    let scalings =
        s.iter().all(|&a| preserves_edges(adj, |z| field.mul(FieldElement(a as u32), FieldElement(z as u32)).index()));
    let translations =
        (0..n).all(|b| preserves_edges(adj, |z| field.add(FieldElement(z as u32), FieldElement(b as u32)).index()));
    let arcs = (0..n).all(|x| {
        adj.neighbors(x).all(|y| {
            let (fx, fy) = (FieldElement(x as u32), FieldElement(y as u32));
            let a = field.sub(fy, fx);
            let psi = |z: FieldElement| field.add(field.mul(a, z), fx);
            adj.get(0, a.index()) && psi(FieldElement::ZERO) == fx && psi(FieldElement::ONE) == fy
        })
    });
    scalings && translations && arcs
}

fn pow_by_digits(field: &FieldTable, x: FieldElement, e: &BigInt) -> FieldElement {
    let mut result = FieldElement::ONE;
    let mut base = x;
    let mut e = e.clone();
    let two = BigInt::from(2);
    while e > BigInt::from(0) {
        if e.is_odd() {
            result = field.mul_by_digits(result, base);
        }
        base = field.mul_by_digits(base, base);
        e /= &two;
    }
    result
}

/// Re-evaluates `x^k + y^k` with coefficient-vector arithmetic.
pub fn waring_witnesses_hold(field: &FieldTable, cert: &WaringCertificate) -> bool {
    let Some(w) = &cert.witnesses else { return false };
    w.len() == field.order()
        && w.par_iter().enumerate().all(|(a, &(x, y))| {
            let sum = field.add_by_digits(pow_by_digits(field, x, &cert.k_exp), pow_by_digits(field, y, &cert.k_exp));
            sum.index() == a && (cert.g == 2 || y.is_zero())
        })
}
