//! Classical invariants of Γ and its complement: diameter, girth, clique,
//! independence and chromatic numbers, isoperimetric bounds and algebraic
//! connectivity.

use num_bigint::BigInt;
use num_rational::Ratio;

use super::{closed, eigenvalues, spectrum};
use crate::error::{Error, Result};
use crate::paley_graphs::GraphSpec;
use crate::scalar::{self, add, mul, pow, sub, ExactInt};

/// Diameter, girth, clique/independence/chromatic data, isoperimetric
/// interval and algebraic connectivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantBounds<T: ExactInt = BigInt> {
    /// `None` when disconnected.
    pub diameter: Option<u32>,
    /// `None` when acyclic.
    pub girth: Option<u32>,
    pub clique_exact: Option<T>,
    pub clique_upper: Option<Ratio<T>>,
    pub independence_exact: Option<T>,
    pub independence_upper: Option<Ratio<T>>,
    pub chromatic_exact: Option<T>,
    pub chromatic_lower: Option<Ratio<T>>,
    pub isoperimetric_lower: Ratio<T>,
    /// The square of the isoperimetric upper bound.
    pub isoperimetric_upper_squared: T,
    /// Floor of the isoperimetric upper bound.
    pub isoperimetric_upper_floor: T,
    /// Second largest adjacency eigenvalue.
    pub algebraic_connectivity: T,
    /// `k − λ₂`, the smallest nonzero Laplacian eigenvalue of a connected graph.
    pub laplacian_gap: T,
}

pub fn invariant_bounds<T: ExactInt>(spec: &GraphSpec) -> Result<InvariantBounds<T>> {
    let c = closed::<T>(spec)?;
    let spec_spectrum = spectrum::<T>(spec)?;
    let one = T::one();
    let two = scalar::two::<T>();
    let co = spec.complemented;
    let degree = spec_spectrum.largest().clone();
    let lambda2 = spec_spectrum.second_largest().clone();
    let clebsch = (spec.p, spec.s, spec.m, spec.ell, co) == (2, 1, 4, 1, false);
    let a_is_two = c.a == two;

    let diameter = (co || !c.half).then_some(2);
    let girth = if clebsch || (c.half && co && a_is_two) {
        Some(4)
    } else if c.half && !co && a_is_two {
        None
    } else {
        Some(3)
    };

    let (mut clique_exact, mut clique_upper) = (None, None);
    let (mut independence_exact, mut independence_upper) = (None, None);
    let (mut chromatic_exact, mut chromatic_lower) = (None, None);
    if c.half_odd {
        clique_exact = Some(c.a.clone());
        independence_exact = Some(c.a.clone());
        chromatic_exact = Some(c.a.clone());
    } else {
        let q = pow(&scalar::from_u64::<T>(spec.p)?, spec.s as u64)?;
        let plus = pow(&q, (spec.m / 2 + spec.ell) as u64)?;
        let minus = pow(&q, (spec.m / 2 - spec.ell) as u64)?;
        let ratio = |x: &T| -> Result<Ratio<T>> { Ok(Ratio::new(add(&c.v, x)?, add(x, &one)?)) };
        let chi =
            |x: &T| -> Result<Ratio<T>> { Ok(Ratio::new(mul(&sub(&c.v, &one)?, &add(x, &one)?)?, add(&c.v, x)?)) };
        let (w_gamma, a_gamma) = (ratio(&plus)?, ratio(&minus)?);
        if co {
            clique_upper = Some(a_gamma);
            independence_upper = Some(w_gamma);
            chromatic_lower = Some(chi(&plus)?);
        } else {
            clique_upper = Some(w_gamma);
            independence_upper = Some(a_gamma);
            chromatic_lower = Some(chi(&minus)?);
        }
    }

    let (theta, delta) = if c.half {
        (sub(&degree, &lambda2)?, degree.clone())
    } else {
        let ev = eigenvalues::<T>(spec)?;
        // υ for Γ and μ̄ for the complement when m_ℓ/2 is odd.
        let theta = match (co, c.half_odd) {
            (false, true) => ev.upsilon,
            (false, false) => ev.mu,
            (true, true) => ev.mu,
            (true, false) => ev.upsilon,
        };
        (sub(&degree, &theta)?, degree.clone())
    };
    let isoperimetric_lower = Ratio::new(theta.clone(), two.clone());
    let isoperimetric_upper_squared = mul(&theta, &sub(&mul(&two, &delta)?, &theta)?)?;
    let isoperimetric_upper_floor = scalar::isqrt(&isoperimetric_upper_squared)?;

    if !c.half {
        let ev = eigenvalues::<T>(spec)?;
        // υ (resp. μ̄) when m_ℓ/2 is even, μ (resp. ῡ) when odd.
        let stated = match (co, c.half_odd) {
            (false, false) => ev.upsilon,
            (false, true) => ev.mu,
            (true, false) => ev.mu,
            (true, true) => ev.upsilon,
        };
        if stated != lambda2 {
            return Err(Error::Internal(format!("{spec}: stated lambda_2 {stated} is not {lambda2}")));
        }
    }

    Ok(InvariantBounds {
        diameter,
        girth,
        clique_exact,
        clique_upper,
        independence_exact,
        independence_upper,
        chromatic_exact,
        chromatic_lower,
        isoperimetric_lower,
        isoperimetric_upper_squared,
        isoperimetric_upper_floor,
        laplacian_gap: sub(&degree, &lambda2)?,
        algebraic_connectivity: lambda2,
    })
}
