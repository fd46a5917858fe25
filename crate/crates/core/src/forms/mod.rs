//! Hermitian and skew-symmetric bilinear forms on polynomials weighted by a
//! power of the root function, numerically for any root function and
//! exactly for the Mahler and reciprocal measures.

mod exact;
mod family;
mod numeric;
mod reduce;

pub use exact::{
    bracket, bracket_identities, gram_matrix_exact, mahler_a_matrix_exact, rho_a_matrix_exact,
    skew_matrix_exact, BracketIdentities, ReciprocalAFactors,
};
pub use family::MonicFamily;
pub use numeric::{
    border_integral_numeric, gram_matrix_numeric, hermitian_form_numeric, skew_form_complex_numeric,
    skew_form_real_numeric, skew_matrix_numeric, skew_parts_numeric, SkewParts,
};
pub use reduce::*;
