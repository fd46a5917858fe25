//! Moment functions through the Gram determinant and the bordered Pfaffian.

use num_rational::BigRational;

use crate::distfun::RootFunctionKind;
use crate::error::{Error, Result};
use crate::exactalg::{determinant, pfaffian, Matrix};
use crate::forms::{gram_matrix_numeric, skew_matrix_numeric, MonicFamily};
use crate::quadrature::QuadratureSpec;

use super::closed::{MomentClosedForm, MomentType};

fn check(s: f64, family: &MonicFamily) -> Result<()> {
    let n = family.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty family".into()));
    }
    if !(s > n as f64) {
        return Err(Error::ConvergenceViolation { s, bound: n as f64 });
    }
    Ok(())
}

/// `H_N(s) = det W` for the Gram matrix of any complete monic family.
pub fn h_numeric(kind: &RootFunctionKind, s: f64, family: &MonicFamily, spec: &QuadratureSpec) -> Result<f64> {
    check(s, family)?;
    let gram = gram_matrix_numeric(kind, s, family, spec)?;
    Ok(determinant(&gram)?.re)
}

/// `F_N(s) = Pf U` for the bordered skew matrix of any complete monic family.
pub fn f_numeric(kind: &RootFunctionKind, s: f64, family: &MonicFamily, spec: &QuadratureSpec) -> Result<f64> {
    check(s, family)?;
    pfaffian(&skew_matrix_numeric(kind, s, family, spec)?)
}

/// Whether each member has the parity of its degree.
pub fn alternates_parity(family: &MonicFamily) -> bool {
    (0..family.len()).all(|i| {
        family
            .coeffs(i)
            .iter()
            .enumerate()
            .all(|(k, c)| (k + i) % 2 == 0 || *c == 0.0)
    })
}

/// `F_N(s) = det A` with `A[j, k] = U[2j-1, 2k]`, valid when the root
/// function is even and the family alternates in parity.
pub fn f_numeric_det_route(
    kind: &RootFunctionKind,
    s: f64,
    family: &MonicFamily,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check(s, family)?;
    if let Some(r) = kind.symmetry_defect() {
        return Err(Error::SymmetryViolation(r));
    }
    if !alternates_parity(family) {
        return Err(Error::InvalidArgument("family does not alternate in parity".into()));
    }
    let u = skew_matrix_numeric(kind, s, family, spec)?;
    let j = u.size() / 2;
    let a = Matrix::from_fn(j, j, |r, c| u[(2 * r, 2 * c + 1)]);
    determinant(&a)
}

/// Which computation backs a volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeRoute {
    Closed,
    Numeric,
}

/// A star-body volume: exact (`pi^k` times a rational) or approximate.
#[derive(Debug, Clone, PartialEq)]
pub enum Volume {
    Exact { pi_power: u32, value: BigRational },
    Approximate(f64),
}

impl Volume {
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            Self::Exact { pi_power, value } => {
                value.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.powi(*pi_power as i32)
            }
            Self::Approximate(v) => *v,
        }
    }
}

fn at_integer(form: &MomentClosedForm, s: usize) -> Result<BigRational> {
    form.eval_rational_part(&BigRational::from_integer(s.into()))
}

/// `lambda_{N+1}` of the real star body: `2 F_N(N+1) / (N+1)`.
pub fn star_volume_real(kind: &RootFunctionKind, n: usize, route: VolumeRoute, spec: &QuadratureSpec) -> Result<Volume> {
    let scale = BigRational::new(2.into(), (n + 1).into());
    match route {
        VolumeRoute::Closed => {
            let form = MomentClosedForm::for_kind(kind, MomentType::F, n)?;
            Ok(Volume::Exact {
                pi_power: 0,
                value: at_integer(&form, n + 1)? * scale,
            })
        }
        VolumeRoute::Numeric => {
            let f = f_numeric(kind, (n + 1) as f64, &MonicFamily::monomials(n), spec)?;
            Ok(Volume::Approximate(2.0 * f / (n + 1) as f64))
        }
    }
}

/// `lambda_{2N+2}` of the complex star body: `2 pi H_N(N+1) / (2N+2)`.
pub fn star_volume_complex(kind: &RootFunctionKind, n: usize, route: VolumeRoute, spec: &QuadratureSpec) -> Result<Volume> {
    match route {
        VolumeRoute::Closed => {
            let form = MomentClosedForm::for_kind(kind, MomentType::H, n)?;
            Ok(Volume::Exact {
                pi_power: form.pi_power + 1,
                value: at_integer(&form, n + 1)? / BigRational::from_integer((n + 1).into()),
            })
        }
        VolumeRoute::Numeric => {
            let h = h_numeric(kind, (n + 1) as f64, &MonicFamily::monomials(n), spec)?;
            Ok(Volume::Approximate(std::f64::consts::PI * h / (n + 1) as f64))
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn numeric_examples() {
        let spec = QuadratureSpec::default();
        let fam = MonicFamily::monomials(2);
        let f = f_numeric(&RootFunctionKind::Mahler, 3.0, &fam, &spec).unwrap();
        assert!((f - 12.0).abs() < 1e-8);
        let f = f_numeric(&RootFunctionKind::Reciprocal, 3.0, &fam, &spec).unwrap();
        assert!((f - 96.0 / 5.0).abs() < 1e-7, "{f}");
        let h = h_numeric(&RootFunctionKind::Mahler, 3.0, &fam, &spec).unwrap();
        assert!((h - 9.0 * PI * PI / 4.0).abs() < 1e-7);
        let d = f_numeric_det_route(&RootFunctionKind::Mahler, 3.0, &fam, &spec).unwrap();
        assert!((d - 12.0).abs() < 1e-8);
        assert!(f_numeric_det_route(&RootFunctionKind::Mahler, 3.0, &MonicFamily::shifted(2, 1), &spec).is_err());
    }

    #[test]
    fn volumes() {
        let spec = QuadratureSpec::default();
        let v = star_volume_real(&RootFunctionKind::Mahler, 1, VolumeRoute::Closed, &spec).unwrap();
        assert_eq!(v, Volume::Exact { pi_power: 0, value: q(4, 1) });
        let v = star_volume_real(&RootFunctionKind::Reciprocal, 4, VolumeRoute::Closed, &spec).unwrap();
        assert_eq!(v, Volume::Exact { pi_power: 0, value: q(655360, 11907) });
        let v = star_volume_real(&RootFunctionKind::Mahler, 1, VolumeRoute::Numeric, &spec).unwrap();
        assert!((v.to_f64() - 4.0).abs() < 1e-8);
        let c = star_volume_complex(&RootFunctionKind::Mahler, 1, VolumeRoute::Closed, &spec).unwrap();
        // pi * H_1(2) / 2 = pi * 2 pi / 2
        assert_eq!(c, Volume::Exact { pi_power: 2, value: q(1, 1) });
    }
}
