use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    CompositeP(u64),
    #[error("order {order} exceeds materialization budget {budget}")]
    BudgetExceeded { order: String, budget: u64 },
    #[error("degree {to} does not divide degree {from}")]
    NotASubfield { from: u32, to: u32 },
    #[error("element does not lie in the subfield of degree {degree}")]
    NotInSubfield { degree: u32 },
    #[error("zero element has no multiplicative order or logarithm")]
    ZeroElement,
    #[error("element index {0} outside the field")]
    BadElement(u64),
    #[error("connection set is not symmetric; directed Cayley graphs are unsupported")]
    DirectedUnsupported,
    #[error("invalid graph spec: {0}")]
    InvalidSpec(String),
    #[error("spec {0} is not in the proper family (ell | m, m/ell even)")]
    NotInFamily(String),
    #[error("specs use different base fields")]
    MixedBase,
    #[error("{ell} does not divide {m}")]
    NotDivisible { m: u32, ell: u32 },
    #[error("affine scale must be nonzero")]
    ZeroScale,
    #[error("input outside the m_ell-even regime: {0}")]
    OutOfTheory(String),
    #[error("residue counts are unbalanced: {0:?}")]
    UnbalancedCounts(Vec<u64>),
    #[error("degenerate graph (2,2,1)")]
    DegenerateGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("graph is not strongly regular: {0}")]
    NotStronglyRegular(String),
    #[error("graph has {components} connected components")]
    DisconnectedComponentsFound { components: usize },
    #[error("arithmetic overflow in fixed-width scalar")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
