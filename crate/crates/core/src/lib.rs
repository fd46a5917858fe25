//! Multiplicative distance functions on polynomials (Mahler's measure and its
//! reciprocal relatives), their moment functions computed along several
//! independent routes, star-body volumes, and counts of reciprocal integer
//! polynomials of bounded measure.

pub mod counting;
pub mod distfun;
pub mod error;
pub mod exactalg;
pub mod forms;
pub mod moments;
pub mod polyroots;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
