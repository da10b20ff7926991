use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{BitMatrix, BitSet, GraphSpec};
use crate::arith;
use crate::error::{Error, Result};
use crate::finite_field::{build_field_with_budget, FieldElement, FieldTable, DEFAULT_MAX_ORDER};

/// The subgroup S_ℓ = ⟨α^{(q^m-1, q^ℓ+1)}⟩ of F_{q^m}^*.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionSet {
    /// The primal spec this set belongs to.
    pub spec: GraphSpec,
    pub members: BitSet,
    pub cardinality: BigInt,
    /// The index `(q^m - 1, q^ℓ + 1)` of S_ℓ in F^*.
    pub index: u64,
}

/// `|S_ℓ|` in each of the three regimes.
pub fn expected_connection_size(spec: &GraphSpec) -> BigInt {
    let n1 = spec.order() - 1;
    let q_ell = num_traits::Pow::pow(spec.q(), spec.ell);
    if spec.m_ell() % 2 == 0 {
        n1 / (q_ell + 1)
    } else if spec.p != 2 {
        n1 / 2
    } else {
        n1
    }
}

/// Whether S_ℓ = -S_ℓ.
pub fn expected_symmetric(spec: &GraphSpec) -> bool {
    spec.p == 2 || spec.m_ell() % 2 == 0 || (spec.order() % 4u32) == BigInt::from(1)
}

pub fn connection_set(spec: &GraphSpec, field: &FieldTable) -> Result<ConnectionSet> {
    if field.params() != spec.field_params() {
        return Err(Error::InvalidSpec(format!("field {:?} does not match {spec}", field.params())));
    }
    let index = arith::gcd_power(&spec.q(), spec.m, spec.ell)?
        .to_u64()
        .ok_or_else(|| Error::Internal("subgroup index exceeds u64".into()))?;
    let size = field.group_order() / index;
    let mut members = BitSet::new(field.order());
    for j in 0..size {
        members.insert(field.exp(j * index).index());
    }
    let cardinality = BigInt::from(members.count());
    let expected = expected_connection_size(spec);
    if cardinality != expected {
        return Err(Error::Internal(format!("|S| = {cardinality} but the closed count is {expected} for {spec}")));
    }
    Ok(ConnectionSet { spec: spec.primal(), members, cardinality, index })
}

impl ConnectionSet {
    pub fn contains(&self, x: FieldElement) -> bool {
        self.members.contains(x.index())
    }

    /// Whether `-1 ∈ S`, checked against `expected_symmetric`.
    pub fn is_symmetric(&self, field: &FieldTable) -> Result<bool> {
        let direct = self.contains(field.neg(FieldElement::ONE));
        if direct != expected_symmetric(&self.spec) {
            return Err(Error::Internal(format!("symmetry of S for {} disagrees with the closed rule", self.spec)));
        }
        Ok(direct)
    }
}

/// A materialized Cayley graph X(F_{q^m}, S) or its complement.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    spec: GraphSpec,
    field: Arc<FieldTable>,
    connection: ConnectionSet,
    adjacency: OnceLock<BitMatrix>,
}

pub fn build_graph(spec: &GraphSpec) -> Result<CayleyGraph> {
    build_graph_with_budget(spec, DEFAULT_MAX_ORDER)
}

pub fn build_graph_with_budget(spec: &GraphSpec, max_order: u64) -> Result<CayleyGraph> {
    let field = build_field_with_budget(spec.field_params(), max_order)?;
    CayleyGraph::new(spec, Arc::new(field))
}

impl CayleyGraph {
    /// Builds over an existing field table, which may be shared between graphs.
    pub fn new(spec: &GraphSpec, field: Arc<FieldTable>) -> Result<CayleyGraph> {
        let connection = connection_set(&spec.primal(), &field)?;
        if !connection.is_symmetric(&field)? {
            return Err(Error::DirectedUnsupported);
        }
        Ok(CayleyGraph { spec: *spec, field, connection, adjacency: OnceLock::new() })
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<FieldTable> {
        Arc::clone(&self.field)
    }

    /// The primal connection set S_ℓ, also for complemented graphs.
    pub fn connection(&self) -> &ConnectionSet {
        &self.connection
    }

    pub fn n(&self) -> usize {
        self.field.order()
    }

    /// Neighbours of the zero vertex: S_ℓ, or F^* \ S_ℓ for the complement.
    pub fn generators(&self) -> Vec<FieldElement> {
        self.field.elements().skip(1).filter(|&x| self.connection.contains(x) != self.spec.complemented).collect()
    }

    pub fn degree(&self) -> usize {
        if self.spec.complemented {
            self.n() - 1 - self.connection.members.count()
        } else {
            self.connection.members.count()
        }
    }

    pub fn adjacency(&self) -> &BitMatrix {
        self.adjacency.get_or_init(|| {
            let f = &self.field;
            let mut a = BitMatrix::new(f.order());
            let gens: Vec<FieldElement> = self.connection.members.iter().map(|i| FieldElement(i as u32)).collect();
            for x in f.elements() {
                for &s in &gens {
                    a.set(x.index(), f.add(x, s).index(), true);
                }
            }
            if self.spec.complemented {
                a.complement()
            } else {
                a
            }
        })
    }

    pub fn adjacent(&self, x: FieldElement, y: FieldElement) -> bool {
        x != y && self.connection.contains(self.field.sub(y, x)) != self.spec.complemented
    }
}

/// The vertex permutation x ↦ a·x^{p^i} + b.
pub fn apply_affine_frobenius(g: &CayleyGraph, a: FieldElement, b: FieldElement, i: u32) -> Result<Vec<u32>> {
    let f = g.field();
    if a.is_zero() {
        return Err(Error::ZeroScale);
    }
    if i >= f.n() {
        return Err(Error::InvalidSpec(format!("Frobenius power {i} must be below {}", f.n())));
    }
    f.element(a.0 as u64)?;
    f.element(b.0 as u64)?;
    Ok(f.elements().map(|x| f.add(f.mul(a, f.frobenius(x, i)), b).0).collect())
}

/// Whether `perm` is a bijection carrying edges to edges.
pub fn is_automorphism(g: &CayleyGraph, perm: &[u32]) -> bool {
    let n = g.n();
    if perm.len() != n {
        return false;
    }
    let mut seen = BitSet::new(n);
    for &v in perm {
        if v as usize >= n || seen.contains(v as usize) {
            return false;
        }
        seen.insert(v as usize);
    }
    let a = g.adjacency();
    (0..n).all(|i| a.neighbors(i).all(|j| a.get(perm[i] as usize, perm[j] as usize)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clebsch_is_five_regular() {
        let g = build_graph(&GraphSpec::new(2, 1, 4, 1).unwrap()).unwrap();
        let a = g.adjacency();
        assert!((0..16).all(|i| a.row_weight(i) == 5));
        assert!(a.is_symmetric() && a.has_zero_diagonal());
        assert_eq!(g.connection().cardinality, BigInt::from(5));
    }

    #[test]
    fn small_cases() {
        let g = build_graph(&GraphSpec::new(2, 1, 2, 1).unwrap()).unwrap();
        assert_eq!(g.degree(), 1);
        let k8 = build_graph(&GraphSpec::new(2, 1, 3, 1).unwrap()).unwrap();
        assert_eq!(k8.degree(), 7);
        let spec = GraphSpec::new(3, 1, 1, 0).unwrap();
        assert_eq!(build_graph(&spec).unwrap_err(), Error::DirectedUnsupported);
        let f = crate::finite_field::build_field(spec.field_params()).unwrap();
        assert!(!connection_set(&spec, &f).unwrap().is_symmetric(&f).unwrap());
    }

    #[test]
    fn frobenius_scaling() {
        let g = build_graph(&GraphSpec::new(2, 1, 4, 1).unwrap()).unwrap();
        let id = apply_affine_frobenius(&g, FieldElement::ONE, FieldElement::ZERO, 0).unwrap();
        assert!(id.iter().enumerate().all(|(i, &v)| i as u32 == v));
        assert_eq!(apply_affine_frobenius(&g, FieldElement::ZERO, FieldElement::ONE, 0), Err(Error::ZeroScale));
        for a in g.field().elements().skip(1) {
            let perm = apply_affine_frobenius(&g, a, FieldElement(7), 3).unwrap();
            assert_eq!(is_automorphism(&g, &perm), g.connection().contains(a));
        }
    }
}
