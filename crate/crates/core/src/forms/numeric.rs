//! Bilinear forms by adaptive quadrature, for any root function.
//!
//! Plane integrals are iterated in polar coordinates: the angle is the outer
//! variable and each ray is integrated over `[0, inf)` with breakpoints at
//! the radii where the root function has kinks. Every matrix is computed as
//! one vector-valued integral so all entries share the same nodes.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use super::family::MonicFamily;
use crate::distfun::RootFunctionKind;
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, SkewMatrix};
use crate::polyroots::Polynomial;
use crate::quadrature::{integrate_line, Estimate, QuadratureSpec};

/// Ascending complex coefficients.
type Coeffs = Vec<Complex64>;

fn ascending(p: &Polynomial) -> Result<Coeffs> {
    let t = p.trimmed();
    if t.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut c = t.coeffs().to_vec();
    c.reverse();
    Ok(c)
}

fn family_coeffs(family: &MonicFamily) -> Vec<Coeffs> {
    (0..family.len())
        .map(|i| family.coeffs(i).iter().map(|&c| Complex64::new(c, 0.0)).collect())
        .collect()
}

fn degree(c: &Coeffs) -> f64 {
    (c.len() - 1) as f64
}

fn eval_into(polys: &[Coeffs], z: Complex64, out: &mut Vec<Complex64>) {
    out.clear();
    out.extend(
        polys
            .iter()
            .map(|p| p.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c)),
    );
}

fn require(s: f64, bound: f64) -> Result<()> {
    if s.is_finite() && s > bound {
        Ok(())
    } else {
        Err(Error::ConvergenceViolation { s, bound })
    }
}

/// Absolute tolerance floor tied to the size of the integrand family, so
/// entries that vanish by symmetry can be certified.
fn scaled(spec: &QuadratureSpec, envelope: f64) -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: spec.abs_tol.max(spec.rel_tol * envelope),
        ..*spec
    }
}

fn coarse(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-3,
        abs_tol: 1e-300,
        ..*spec
    }
}

/// Iterated polar integral over `0 <= theta <= theta_max`; `f(z, out)`
/// receives the point and accumulates the integrand without the Jacobian.
fn polar_integral<F>(
    kind: &RootFunctionKind,
    dim: usize,
    theta_max: f64,
    spec: &QuadratureSpec,
    mut f: F,
) -> Result<Estimate>
where
    F: FnMut(Complex64, &mut [f64]),
{
    let inner = spec.inner();
    let mut failure = None;
    let outer_breaks: Vec<f64> = [PI * 0.5, PI, PI * 1.5]
        .into_iter()
        .filter(|&b| b < theta_max)
        .collect();
    let est = integrate_line(
        dim,
        |theta, out| {
            if failure.is_some() {
                return;
            }
            let dir = Complex64::from_polar(1.0, theta);
            let breaks = kind.radial_breakpoints(theta);
            let ray = integrate_line(
                dim,
                |r, o| {
                    f(dir * r, o);
                    o.iter_mut().for_each(|v| *v *= r);
                },
                0.0,
                f64::INFINITY,
                &breaks,
                &inner,
            );
            match ray {
                Ok(e) => out.copy_from_slice(&e.value),
                Err(e) => failure = Some(e),
            }
        },
        0.0,
        theta_max,
        &outer_breaks,
        spec,
    );
    match failure {
        Some(e) => Err(e),
        None => est,
    }
}

fn line_integral<F>(kind: &RootFunctionKind, dim: usize, lo: f64, hi: f64, spec: &QuadratureSpec, f: F) -> Result<Estimate>
where
    F: FnMut(f64, &mut [f64]),
{
    integrate_line(dim, f, lo, hi, &kind.real_breakpoints(), spec)
}

fn plane_envelope(kind: &RootFunctionKind, s: f64, power: f64, spec: &QuadratureSpec) -> Result<f64> {
    let est = polar_integral(kind, 1, 2.0 * PI, &coarse(spec), |z, out| {
        out[0] = kind.root_value(z).powf(-2.0 * s) * (1.0 + z.norm()).powf(power);
    })?;
    Ok(est.value[0])
}

fn line_envelope(kind: &RootFunctionKind, s: f64, power: f64, spec: &QuadratureSpec) -> Result<f64> {
    let est = line_integral(kind, 1, f64::NEG_INFINITY, f64::INFINITY, &coarse(spec), |x, out| {
        out[0] = kind.root_value_real(x).powf(-s) * (1.0 + x.abs()).powf(power);
    })?;
    Ok(est.value[0])
}

fn unpack(values: &[f64]) -> Vec<Complex64> {
    values.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

/// `integral over C of phi^(-2s) P_j conj(P_k)` for each pair.
fn hermitian_batch(
    kind: &RootFunctionKind,
    s: f64,
    polys: &[Coeffs],
    pairs: &[(usize, usize)],
    spec: &QuadratureSpec,
) -> Result<Vec<Complex64>> {
    let top = pairs
        .iter()
        .map(|&(j, k)| degree(&polys[j]) + degree(&polys[k]))
        .fold(0.0, f64::max);
    require(2.0 * s, top + 2.0).map_err(|_| Error::ConvergenceViolation { s, bound: top / 2.0 + 1.0 })?;
    let spec = scaled(spec, plane_envelope(kind, s, top, spec)?);
    let mut vals = Vec::new();
    let est = polar_integral(kind, 2 * pairs.len(), 2.0 * PI, &spec, |z, out| {
        let w = kind.root_value(z).powf(-2.0 * s);
        if w == 0.0 {
            return;
        }
        eval_into(polys, z, &mut vals);
        for (i, &(j, k)) in pairs.iter().enumerate() {
            let v = vals[j] * vals[k].conj() * w;
            out[2 * i] = v.re;
            out[2 * i + 1] = v.im;
        }
    })?;
    Ok(unpack(&est.value))
}

/// `-2i integral over the upper half plane of phi(b)^(-s) phi(conj b)^(-s)
/// (P_j(conj b) P_k(b) - P_j(b) P_k(conj b))` for each pair.
fn complex_skew_batch(
    kind: &RootFunctionKind,
    s: f64,
    polys: &[Coeffs],
    pairs: &[(usize, usize)],
    spec: &QuadratureSpec,
) -> Result<Vec<Complex64>> {
    let top = pairs
        .iter()
        .map(|&(j, k)| degree(&polys[j]) + degree(&polys[k]))
        .fold(0.0, f64::max);
    require(2.0 * s, top + 2.0).map_err(|_| Error::ConvergenceViolation { s, bound: top / 2.0 + 1.0 })?;
    let spec = scaled(spec, plane_envelope(kind, s, top, spec)?);
    let (mut at, mut at_conj) = (Vec::new(), Vec::new());
    let minus_two_i = Complex64::new(0.0, -2.0);
    let est = polar_integral(kind, 2 * pairs.len(), PI, &spec, |z, out| {
        let w = (kind.root_value(z) * kind.root_value(z.conj())).powf(-s);
        if w == 0.0 {
            return;
        }
        eval_into(polys, z, &mut at);
        eval_into(polys, z.conj(), &mut at_conj);
        for (i, &(j, k)) in pairs.iter().enumerate() {
            let v = minus_two_i * (at_conj[j] * at[k] - at[j] * at_conj[k]) * w;
            out[2 * i] = v.re;
            out[2 * i + 1] = v.im;
        }
    })?;
    Ok(unpack(&est.value))
}

/// `integral over R of phi(x)^(-s) P_j(x) dx` for each polynomial.
fn border_batch(kind: &RootFunctionKind, s: f64, polys: &[Coeffs], spec: &QuadratureSpec) -> Result<Vec<Complex64>> {
    let top = polys.iter().map(degree).fold(0.0, f64::max);
    require(s, top + 1.0)?;
    let spec = scaled(spec, line_envelope(kind, s, top, spec)?);
    let mut vals = Vec::new();
    let est = line_integral(kind, 2 * polys.len(), f64::NEG_INFINITY, f64::INFINITY, &spec, |x, out| {
        let w = kind.root_value_real(x).powf(-s);
        if w == 0.0 {
            return;
        }
        eval_into(polys, Complex64::new(x, 0.0), &mut vals);
        for (i, v) in vals.iter().enumerate() {
            out[2 * i] = v.re * w;
            out[2 * i + 1] = v.im * w;
        }
    })?;
    Ok(unpack(&est.value))
}

/// `integral over R^2 of phi(x)^(-s) phi(y)^(-s) P_j(x) P_k(y) sgn(y - x)`,
/// evaluated as `integral of w(y) P_k(y) (2 G_j(y) - T_j) dy` where `G_j` is
/// the partial border integral up to `y` and `T_j` the full one.
fn real_skew_batch(
    kind: &RootFunctionKind,
    s: f64,
    polys: &[Coeffs],
    pairs: &[(usize, usize)],
    spec: &QuadratureSpec,
) -> Result<Vec<Complex64>> {
    let top = pairs
        .iter()
        .map(|&(j, k)| degree(&polys[j]).max(degree(&polys[k])))
        .fold(0.0, f64::max);
    require(s, top + 1.0)?;
    let env = line_envelope(kind, s, top, spec)?;
    let spec = scaled(spec, env * env);
    let totals = border_batch(kind, s, polys, &spec)?;
    let inner = spec.inner();
    let weight = |x: f64| kind.root_value_real(x).powf(-s);
    let mut failure = None;
    let mut vals = Vec::new();
    let est = line_integral(kind, 2 * pairs.len(), f64::NEG_INFINITY, f64::INFINITY, &spec, |y, out| {
        if failure.is_some() {
            return;
        }
        let w = weight(y);
        if w == 0.0 {
            return;
        }
        // Integrate over the shorter side of y to keep the inner tails short.
        let (lo, hi, flip) = if y <= 0.0 {
            (f64::NEG_INFINITY, y, false)
        } else {
            (y, f64::INFINITY, true)
        };
        let mut inner_vals = Vec::new();
        let partial = line_integral(kind, 2 * polys.len(), lo, hi, &inner, |x, o| {
            let wx = weight(x);
            if wx == 0.0 {
                return;
            }
            eval_into(polys, Complex64::new(x, 0.0), &mut inner_vals);
            for (i, v) in inner_vals.iter().enumerate() {
                o[2 * i] = v.re * wx;
                o[2 * i + 1] = v.im * wx;
            }
        });
        let partial = match partial {
            Ok(e) => unpack(&e.value),
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        eval_into(polys, Complex64::new(y, 0.0), &mut vals);
        for (i, &(j, k)) in pairs.iter().enumerate() {
            // 2 G - T equals G_below - G_above.
            let kernel = if flip {
                totals[j] - partial[j] * 2.0
            } else {
                partial[j] * 2.0 - totals[j]
            };
            let v = vals[k] * kernel * w;
            out[2 * i] = v.re;
            out[2 * i + 1] = v.im;
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(unpack(&est.value))
}

fn check_real(v: Complex64, spec: &QuadratureSpec) -> Result<f64> {
    let tol = 10.0 * spec.abs_tol.max(spec.rel_tol * v.re.abs()).max(1e-9 * v.re.abs());
    if v.im.abs() > tol {
        return Err(Error::ToleranceNotReached {
            what: "imaginary residue of a real form",
            estimate: v.im.abs(),
        });
    }
    Ok(v.re)
}

/// `<P | Q> = integral over C of phi^(-2s) P conj(Q)`.
pub fn hermitian_form_numeric(
    kind: &RootFunctionKind,
    s: f64,
    p: &Polynomial,
    q: &Polynomial,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let polys = [ascending(p)?, ascending(q)?];
    Ok(hermitian_batch(kind, s, &polys, &[(0, 1)], spec)?[0])
}

/// The real part of the skew form: the sign-kernel integral over `R^2`.
pub fn skew_form_real_numeric(
    kind: &RootFunctionKind,
    s: f64,
    p: &Polynomial,
    q: &Polynomial,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let polys = [ascending(p)?, ascending(q)?];
    check_real(real_skew_batch(kind, s, &polys, &[(0, 1)], spec)?[0], spec)
}

/// The complex part of the skew form, over pairs of conjugate points.
pub fn skew_form_complex_numeric(
    kind: &RootFunctionKind,
    s: f64,
    p: &Polynomial,
    q: &Polynomial,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let polys = [ascending(p)?, ascending(q)?];
    check_real(complex_skew_batch(kind, s, &polys, &[(0, 1)], spec)?[0], spec)
}

/// `integral over R of phi(x)^(-s) P(x) dx`.
pub fn border_integral_numeric(kind: &RootFunctionKind, s: f64, p: &Polynomial, spec: &QuadratureSpec) -> Result<f64> {
    let polys = [ascending(p)?];
    check_real(border_batch(kind, s, &polys, spec)?[0], spec)
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).collect()
}

/// Real and complex parts of the skew matrix and the border integrals of a
/// family, computed separately.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewParts {
    pub real: SkewMatrix<f64>,
    pub complex: SkewMatrix<f64>,
    pub border: Vec<f64>,
}

impl SkewParts {
    /// The bordered matrix `U`: combined forms, plus the border column when
    /// the family has odd size.
    pub fn combined(&self) -> SkewMatrix<f64> {
        let n = self.border.len();
        SkewMatrix::from_upper(n + n % 2, |i, j| {
            if j < n {
                self.real[(i, j)] + self.complex[(i, j)]
            } else {
                self.border[i]
            }
        })
    }
}

pub fn skew_parts_numeric(
    kind: &RootFunctionKind,
    s: f64,
    family: &MonicFamily,
    spec: &QuadratureSpec,
) -> Result<SkewParts> {
    let n = family.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty family".into()));
    }
    require(s, n as f64 - 0.5).map_err(|_| Error::ConvergenceViolation { s, bound: n as f64 })?;
    let polys = family_coeffs(family);
    let pairs = upper_pairs(n);
    let (real, complex) = if pairs.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        (
            real_skew_batch(kind, s, &polys, &pairs, spec)?,
            complex_skew_batch(kind, s, &polys, &pairs, spec)?,
        )
    };
    let border = border_batch(kind, s, &polys, spec)?;
    let to_matrix = |vals: &[Complex64]| -> Result<SkewMatrix<f64>> {
        let mut m = Matrix::zeros(n, n);
        for (&(j, k), v) in pairs.iter().zip(vals) {
            let x = check_real(*v, spec)?;
            m[(j, k)] = x;
            m[(k, j)] = -x;
        }
        SkewMatrix::new(m)
    };
    Ok(SkewParts {
        real: to_matrix(&real)?,
        complex: to_matrix(&complex)?,
        border: border.iter().map(|v| check_real(*v, spec)).collect::<Result<_>>()?,
    })
}

/// The bordered skew matrix `U` of a family by quadrature.
pub fn skew_matrix_numeric(
    kind: &RootFunctionKind,
    s: f64,
    family: &MonicFamily,
    spec: &QuadratureSpec,
) -> Result<SkewMatrix<f64>> {
    Ok(skew_parts_numeric(kind, s, family, spec)?.combined())
}

/// The Hermitian Gram matrix `W[j, k] = <P_j | P_k>` by quadrature.
pub fn gram_matrix_numeric(
    kind: &RootFunctionKind,
    s: f64,
    family: &MonicFamily,
    spec: &QuadratureSpec,
) -> Result<Matrix<Complex64>> {
    let n = family.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty family".into()));
    }
    let polys = family_coeffs(family);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (j..n).map(move |k| (j, k))).collect();
    let vals = hermitian_batch(kind, s, &polys, &pairs, spec)?;
    let mut m = Matrix::zeros(n, n);
    for (&(j, k), v) in pairs.iter().zip(&vals) {
        m[(j, k)] = *v;
        m[(k, j)] = v.conj();
    }
    for j in 0..n {
        m[(j, j)] = Complex64::new(m[(j, j)].re, 0.0);
    }
    Ok(m)
}
