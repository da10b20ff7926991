//! Generalized Paley graphs Γ_{q,m}(ℓ) over finite fields: construction,
//! exact closed forms for their spectra and counting invariants, and
//! brute-force oracles that check every closed form on materialized graphs.
//!
//! Closed forms are generic over [`scalar::ExactInt`]; the aliases below fix
//! the scalar to [`num_bigint::BigInt`], which never overflows.

pub mod applications;
pub mod arith;
pub mod error;
pub mod finite_field;
pub mod oracles;
pub mod paley_graphs;
pub mod quadratic_forms;
pub mod scalar;
pub mod spectra_srg;

pub use error::{Error, Result};
pub use paley_graphs::GraphSpec;
pub use scalar::ExactInt;

/// Default exact integer.
pub type Int = num_bigint::BigInt;
pub type Spectrum = spectra_srg::Spectrum<Int>;
pub type SrgRecord = spectra_srg::SrgRecord<Int>;
pub type Eigenvalues = spectra_srg::Eigenvalues<Int>;
pub type IntersectionArray = spectra_srg::IntersectionArray<Int>;
pub type InvariantBounds = spectra_srg::InvariantBounds<Int>;

/// Fixed-width variants for callers that prefer speed and accept `Error::Overflow`.
pub type SpectrumI128 = spectra_srg::Spectrum<i128>;
pub type SrgRecordI128 = spectra_srg::SrgRecord<i128>;
