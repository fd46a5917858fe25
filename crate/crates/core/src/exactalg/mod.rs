//! Exact arithmetic: big rationals, rational functions in `s`, and generic
//! determinant / Pfaffian machinery.

pub mod combinat;
pub mod intpoly;
pub mod linalg;
pub mod ratfun;

pub use combinat::{
    checkerboard_pfaffian, increasing_maps, permutation_sign, pfaffian_by_definition,
    pfaffian_restricted_permutations, pfaffian_sum_expansion, pfaffian_wedge, sign_matrix,
    sign_product, vandermonde, IncreasingMap,
};
pub use intpoly::IntPoly;
pub use linalg::{determinant, pfaffian, pfaffian_of, Field, Matrix, SkewMatrix};
pub use num_rational::BigRational;
pub use ratfun::{partial_fractions, PartialFractions, RationalFunction, ScaledRationalFunction};
