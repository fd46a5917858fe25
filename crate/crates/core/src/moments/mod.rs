//! Moment functions `F_N` and `H_N`: closed forms, the Gram-determinant and
//! Pfaffian routes, an independent root-space integration oracle, star-body
//! volumes, distribution functions and zero/pole trajectories.

mod closed;
mod rootspace;
mod routes;
mod trajectory;

pub use closed::{
    distribution_from_moment, mahler_constant, reciprocal_constant, Factor, LaurentPolynomial, MomentClosedForm,
    MomentType,
};
pub use rootspace::{rootspace_oracle_f, rootspace_oracle_h, OracleEstimate, OracleRule};
pub use routes::{
    alternates_parity, f_numeric, f_numeric_det_route, h_numeric, star_volume_complex, star_volume_real, Volume,
    VolumeRoute,
};
pub use trajectory::{
    continue_f, h_zero, trajectory_f, trajectory_h, ContinuedMoment, FTrajectory, FZero, Feature, TrajectoryPoint,
};
