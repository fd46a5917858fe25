//! Zeros and poles of the moment functions of `mu_t` as `t` varies.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::distfun::{RootFunctionKind, TParameter};
use crate::error::{Error, Result};
use crate::forms::MonicFamily;
use crate::quadrature::QuadratureSpec;

use super::routes::f_numeric_det_route;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    Pole,
    Zero,
}

impl Feature {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pole => "pole",
            Self::Zero => "zero",
        }
    }
}

/// One zero or pole at one value of `t`. Poles use signed indices (`-n`
/// for the pole at `-n`); the zero at the origin has index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub feature: Feature,
    pub index: i64,
    pub location: Complex64,
    pub multiplicity: u32,
}

fn sort(points: &mut [TrajectoryPoint]) {
    points.sort_by(|a, b| {
        a.t.total_cmp(&b.t)
            .then(a.feature.cmp(&b.feature))
            .then(a.index.cmp(&b.index))
    });
}

fn check_t(t: &BigRational) -> Result<()> {
    if t.is_positive() && t < &BigRational::one() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("t = {t} must lie strictly between 0 and 1")))
    }
}

fn real_point(t: f64, feature: Feature, index: i64, x: f64, multiplicity: u32) -> TrajectoryPoint {
    TrajectoryPoint {
        t,
        feature,
        index,
        location: Complex64::new(x, 0.0),
        multiplicity,
    }
}

/// The nontrivial zero of the `n`-th factor of `H_N(mu_t)`:
/// `-n (1 + t^2n) / (1 - t^2n)`.
pub fn h_zero(t: &BigRational, n: u32) -> BigRational {
    let p = t.pow(2 * n as i32);
    -BigRational::from_integer(n.into()) * (BigRational::one() + &p) / (BigRational::one() - p)
}

/// Zeros (including the order-`N` zero at the origin) and poles of `H_N(mu_t)`.
pub fn trajectory_h(n: usize, ts: &[BigRational]) -> Result<Vec<TrajectoryPoint>> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let mut out = Vec::new();
    for t in ts {
        check_t(t)?;
        let tf = t.to_f64().unwrap_or(f64::NAN);
        out.push(real_point(tf, Feature::Zero, 0, 0.0, n as u32));
        for k in 1..=n as i64 {
            let z = h_zero(t, k as u32).to_f64().unwrap_or(f64::NAN);
            out.push(real_point(tf, Feature::Zero, k, z, 1));
            out.push(real_point(tf, Feature::Pole, k, k as f64, 1));
            out.push(real_point(tf, Feature::Pole, -k, -k as f64, 1));
        }
    }
    sort(&mut out);
    Ok(out)
}

/// The analytic continuation of `F_N(mu_t)` for even `N`:
/// `s^(N/2) R(s) / prod_k (s^2 - k^2)`, `k = 2, 4, ..., N`, with `R` fitted
/// to values of the convergent integral at `s > N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuedMoment {
    pub n: usize,
    /// Coefficients of `R` in powers of `(s - center) / scale`.
    coeffs: Vec<f64>,
    center: f64,
    scale: f64,
    /// Largest relative misfit at the sample points.
    pub fit_residual: f64,
}

impl ContinuedMoment {
    fn reduced(&self, s: f64) -> f64 {
        let x = (s - self.center) / self.scale;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn poles(&self) -> impl Iterator<Item = f64> {
        (1..=self.n / 2).map(|j| (2 * j) as f64)
    }

    pub fn eval(&self, s: f64) -> f64 {
        let den: f64 = self.poles().map(|k| s * s - k * k).product();
        s.powi((self.n / 2) as i32) * self.reduced(s) / den
    }

    /// Negative real zeros, located by sign changes of `R` and bisection.
    pub fn negative_zeros(&self) -> Vec<f64> {
        let lo = -(self.n as f64) - 2.0;
        let steps = 4000;
        let mut zeros = Vec::new();
        let mut prev = (lo, self.reduced(lo));
        for i in 1..=steps {
            let x = lo + (-1e-9 - lo) * i as f64 / steps as f64;
            let v = self.reduced(x);
            if v == 0.0 {
                zeros.push(x);
            } else if prev.1 != 0.0 && prev.1.signum() != v.signum() {
                let (mut a, mut b) = (prev.0, x);
                let fa = prev.1;
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    if self.reduced(m).signum() == fa.signum() {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                zeros.push(0.5 * (a + b));
            }
            prev = (x, v);
        }
        zeros
    }
}

/// Fits the continuation of `F_N(mu_t)` from the determinant route.
pub fn continue_f(kind: &RootFunctionKind, n: usize, spec: &QuadratureSpec) -> Result<ContinuedMoment> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidArgument("the continuation needs even N".into()));
    }
    let degree = n / 2;
    let samples: Vec<f64> = (0..degree + 4).map(|i| n as f64 + 1.0 + 0.75 * i as f64).collect();
    let family = MonicFamily::monomials(n);
    let values = samples
        .iter()
        .map(|&s| f_numeric_det_route(kind, s, &family, spec))
        .collect::<Result<Vec<_>>>()?;
    let (center, scale) = {
        let (a, b) = (samples[0], samples[samples.len() - 1]);
        (0.5 * (a + b), 0.5 * (b - a))
    };
    let target: Vec<f64> = samples
        .iter()
        .zip(&values)
        .map(|(&s, &f)| {
            let den: f64 = (1..=degree).map(|j| s * s - (4 * j * j) as f64).product();
            f * den / s.powi(degree as i32)
        })
        .collect();
    let design = DMatrix::from_fn(samples.len(), degree + 1, |i, j| ((samples[i] - center) / scale).powi(j as i32));
    let rhs = DVector::from_vec(target.clone());
    let svd = design.clone().svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))?;
    let fit = &design * &sol;
    let fit_residual = fit
        .iter()
        .zip(&target)
        .map(|(a, b)| ((a - b) / b.abs().max(1e-300)).abs())
        .fold(0.0, f64::max);
    Ok(ContinuedMoment {
        n,
        coeffs: sol.iter().copied().collect(),
        center,
        scale,
        fit_residual,
    })
}

/// A zero of the continued `F_N(mu_t)` with its residual relative to the
/// value at the middle of the enclosing pole interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FZero {
    pub t: f64,
    pub location: f64,
    pub relative_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FTrajectory {
    pub points: Vec<TrajectoryPoint>,
    pub zeros: Vec<FZero>,
    /// Values of `t` where fewer than `N/2` negative zeros were bracketed.
    pub unbracketed: Vec<f64>,
}

/// Zeros and poles of `F_N(mu_t)` for even `N <= 6`.
pub fn trajectory_f(n: usize, ts: &[BigRational], spec: &QuadratureSpec) -> Result<FTrajectory> {
    if n == 0 || n % 2 == 1 || n > 6 {
        return Err(Error::InvalidArgument("F trajectories need even N <= 6".into()));
    }
    for t in ts {
        check_t(t)?;
    }
    let per_t = ts
        .par_iter()
        .map(|t| {
            let kind = RootFunctionKind::TReciprocal(TParameter::new(t.clone())?);
            let cont = continue_f(&kind, n, spec)?;
            Ok((t.to_f64().unwrap_or(f64::NAN), cont))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::new();
    let mut zeros = Vec::new();
    let mut unbracketed = Vec::new();
    for (tf, cont) in per_t {
        points.push(real_point(tf, Feature::Zero, 0, 0.0, (n / 2) as u32));
        for k in (2..=n as i64).step_by(2) {
            points.push(real_point(tf, Feature::Pole, k, k as f64, 1));
            points.push(real_point(tf, Feature::Pole, -k, -k as f64, 1));
        }
        let found = cont.negative_zeros();
        if found.len() < n / 2 {
            unbracketed.push(tf);
        }
        for (i, &z) in found.iter().enumerate() {
            points.push(real_point(tf, Feature::Zero, i as i64 + 1, z, 1));
            let upper = ((-z / 2.0).floor() * 2.0).max(0.0);
            let mid = -(upper + 1.0);
            let scale = cont.eval(mid).abs();
            zeros.push(FZero {
                t: tf,
                location: z,
                relative_residual: if scale > 0.0 { cont.eval(z).abs() / scale } else { f64::NAN },
            });
        }
    }
    sort(&mut points);
    Ok(FTrajectory { points, zeros, unbracketed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn h_zero_example() {
        assert_eq!(h_zero(&q(1, 2), 1), q(-5, 3));
        let pts = trajectory_h(6, &[q(1, 2)]).unwrap();
        assert_eq!(pts.len(), 19);
        assert!(trajectory_h(2, &[q(1, 1)]).is_err());
    }

    #[test]
    fn f_trajectory_n2() {
        let spec = QuadratureSpec { rel_tol: 1e-9, abs_tol: 1e-12, max_subdivisions: 2000 };
        let tr = trajectory_f(2, &[q(1, 10), q(9, 10)], &spec).unwrap();
        assert!(tr.unbracketed.is_empty());
        assert_eq!(tr.zeros.len(), 2);
        for z in &tr.zeros {
            assert!(z.location > -2.0 && z.location < 0.0, "{z:?}");
            assert!(z.relative_residual <= 1e-4);
        }
        assert!(tr.zeros[0].location < -1.5, "{:?}", tr.zeros[0]);
        assert!(tr.zeros[1].location > -0.5, "{:?}", tr.zeros[1]);
    }
}
