//! Exact sparse bivariate polynomials over the integers.

mod bipoly;
mod ratfn;
mod resultant;
mod subst;
mod unipoly;

pub use bipoly::{BiPoly, Exponent, Vars};
pub use ratfn::RatFn;
pub use resultant::{discriminant, resultant};
pub use subst::{equal_up_to_unit, normalize_unit, substitute, Normalized, RationalSubst, VarImage};
pub use unipoly::UniPolyQ;

use crate::error::Result;

/// Sum of two polynomials in the same variables.
pub fn bp_add(p: &BiPoly, q: &BiPoly) -> Result<BiPoly> {
    p.checked_add(q)
}

/// Product of two polynomials in the same variables.
pub fn bp_mul(p: &BiPoly, q: &BiPoly) -> Result<BiPoly> {
    p.checked_mul(q)
}
