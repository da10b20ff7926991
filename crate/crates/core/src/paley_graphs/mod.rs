//! Generalized Paley graphs Γ_{q,m}(ℓ) = X(F_{q^m}, S_ℓ), where S_ℓ is the
//! set of nonzero (q^ℓ+1)-th powers, and the family bookkeeping around them.

mod bits;
mod cayley;
pub mod export;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::finite_field::FieldParams;

pub use bits::{BitMatrix, BitSet};
pub use cayley::{
    apply_affine_frobenius, build_graph, build_graph_with_budget, connection_set, expected_connection_size,
    expected_symmetric, is_automorphism, CayleyGraph, ConnectionSet,
};

/// The parameters `(q = p^s, m, ℓ)` of a graph, optionally complemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphSpec {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    pub ell: u32,
    #[serde(default)]
    pub complemented: bool,
}

/// Which of the three regimes a spec falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    /// `m_ℓ` odd and `q` even: the complete graph.
    Complete,
    /// `m_ℓ` odd and `q` odd: the classical Paley graph.
    Paley,
    /// `ℓ | m` and `m_ℓ` even.
    Proper,
    /// `m_ℓ` even but `ℓ ∤ m`; equal to the proper graph at `ℓ = (m, ℓ)`.
    Reducible { ell: u32 },
}

impl GraphSpec {
    pub fn new(p: u64, s: u32, m: u32, ell: u32) -> Result<Self> {
        FieldParams::new(p, s, m)?;
        if ell >= m {
            return Err(Error::InvalidSpec(format!("need 0 <= ell < m (m={m}, ell={ell})")));
        }
        Ok(GraphSpec { p, s, m, ell, complemented: false })
    }

    /// The same spec with the complement flag toggled.
    pub fn complement(self) -> Self {
        GraphSpec { complemented: !self.complemented, ..self }
    }

    pub fn primal(self) -> Self {
        GraphSpec { complemented: false, ..self }
    }

    pub fn field_params(&self) -> FieldParams {
        FieldParams { p: self.p, s: self.s, m: self.m }
    }

    pub fn q(&self) -> BigInt {
        num_traits::Pow::pow(BigInt::from(self.p), self.s)
    }

    /// `q^m`, the number of vertices.
    pub fn order(&self) -> BigInt {
        num_traits::Pow::pow(self.q(), self.m)
    }

    /// `(m, ℓ)`, with `(m, 0) = m`.
    pub fn gcd(&self) -> u32 {
        self.m.gcd(&self.ell)
    }

    /// `m_ℓ = m / (m, ℓ)`.
    pub fn m_ell(&self) -> u32 {
        self.m / self.gcd()
    }

    pub fn tag(&self) -> FamilyTag {
        let q_even = self.p == 2;
        match (self.m_ell() % 2 == 0, q_even) {
            (false, true) => FamilyTag::Complete,
            (false, false) => FamilyTag::Paley,
            (true, _) if self.ell != 0 && self.m % self.ell == 0 => FamilyTag::Proper,
            (true, _) => FamilyTag::Reducible { ell: self.gcd() },
        }
    }

    pub fn is_proper(&self) -> bool {
        self.tag() == FamilyTag::Proper
    }

    pub fn require_proper(&self) -> Result<()> {
        if self.is_proper() {
            Ok(())
        } else {
            Err(Error::NotInFamily(self.to_string()))
        }
    }

    /// `ℓ = m/2`: the disconnected member of the family.
    pub fn is_half(&self) -> bool {
        2 * self.ell == self.m
    }

    /// Γ_{2,2}(1) = 2K_2, excluded from the SRG statements.
    pub fn is_degenerate(&self) -> bool {
        self.p == 2 && self.s == 1 && self.m == 2 && self.ell == 1
    }

    /// The equal spec with `ℓ = 1` over the base `q^ℓ`.
    pub fn normalized(&self) -> Result<Self> {
        let mut out = normalize(self.p, self.s, self.m, self.ell)?;
        out.complemented = self.complemented;
        Ok(out)
    }

    /// Label such as `Gamma_{4,4}(1)` or `co-Gamma_{3,8}(1)`.
    pub fn label(&self) -> String {
        format!("{}Gamma_{{{},{}}}({})", if self.complemented { "co-" } else { "" }, self.q(), self.m, self.ell)
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Whether two specs describe the same graph.
pub fn same_graph(a: &GraphSpec, b: &GraphSpec) -> bool {
    a.p == b.p && a.complemented == b.complemented && a.s * a.m == b.s * b.m && a.s * a.ell == b.s * b.ell
}

/// All proper `ℓ` for the given `q` and `m`, ascending.
pub fn enumerate_family(p: u64, s: u32, m: u32) -> Result<Vec<GraphSpec>> {
    FieldParams::new(p, s, m)?;
    Ok((1..=m / 2)
        .filter(|&ell| m % ell == 0 && (m / ell) % 2 == 0)
        .map(|ell| GraphSpec { p, s, m, ell, complemented: false })
        .collect())
}

/// Spec-level subgraph test Γ_a ⊂ Γ_b.
///
/// Two complemented specs over the same field compare with the inclusion reversed.
pub fn is_subgraph(a: &GraphSpec, b: &GraphSpec) -> Result<bool> {
    if (a.p, a.s) != (b.p, b.s) {
        return Err(Error::MixedBase);
    }
    a.primal().require_proper()?;
    b.primal().require_proper()?;
    match (a.complemented, b.complemented) {
        (false, false) => Ok(b.m % a.m == 0 && a.ell % b.ell == 0 && (a.ell / b.ell) % 2 == 1),
        (true, true) if a.m == b.m => is_subgraph(&b.primal(), &a.primal()),
        _ => Err(Error::InvalidSpec("subgraph test mixes complemented and primal specs".into())),
    }
}

/// Γ_{p, rm}(rℓ) = Γ_{p^{rℓ}, m/ℓ}(1).
pub fn normalize(p: u64, r: u32, m: u32, ell: u32) -> Result<GraphSpec> {
    if ell == 0 || m % ell != 0 {
        return Err(Error::NotDivisible { m, ell });
    }
    GraphSpec::new(p, r * ell, m / ell, 1)
}

/// Components of the subgraph lattice of the family for degree `m`.
///
/// With `m = 2^t r`, `r` odd, component `k` (1-based) is `{2^{k-1} d : d | r}`.
pub fn family_lattice(m: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return Vec::new();
    }
    let t = m.trailing_zeros();
    let r = m >> t;
    let divs = arith::divisors(r as u64);
    (1..=t).map(|k| divs.iter().map(|&d| (1u32 << (k - 1)) * d as u32).collect()).collect()
}
