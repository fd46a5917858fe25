//! Gram–Schmidt for the Hermitian form and its skew analogue, run on the
//! matrix of the form in the monomial basis.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::exact::{gram_matrix_exact, skew_matrix_exact};
use super::family::MonicFamily;
use super::numeric::{gram_matrix_numeric, skew_matrix_numeric};
use crate::distfun::RootFunctionKind;
use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix};
use crate::quadrature::QuadratureSpec;

fn pair<T: Field>(form: &Matrix<T>, x: &[T], y: &[T]) -> T {
    let n = x.len();
    let mut acc = T::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            acc = acc + x[i].clone() * form[(i, j)].clone() * y[j].clone();
        }
    }
    acc
}

fn unit<T: Field>(n: usize, i: usize) -> Vec<T> {
    (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()
}

fn axpy<T: Field>(y: &mut [T], a: &T, x: &[T]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = yi.clone() + a.clone() * xi.clone();
    }
}

fn degenerate<T: Field>(v: &T, scale: f64) -> bool {
    match v.magnitude() {
        Some(m) => !(m > 1e-12 * scale),
        None => v.is_zero(),
    }
}

fn scale_of<T: Field>(form: &Matrix<T>) -> f64 {
    let mut s = 0.0f64;
    for i in 0..form.rows() {
        for j in 0..form.cols() {
            s = s.max(form[(i, j)].magnitude().unwrap_or(0.0));
        }
    }
    s
}

/// Unit lower-triangular coefficient rows `q_n` with `q_j G q_k^T = 0` for
/// `j != k`, and the norms `q_n G q_n^T`.
pub(crate) fn hermitian_reduce<T: Field>(gram: &Matrix<T>) -> Result<(Vec<Vec<T>>, Vec<T>)> {
    let n = gram.rows();
    let scale = scale_of(gram);
    let (mut rows, mut norms): (Vec<Vec<T>>, Vec<T>) = (Vec::new(), Vec::new());
    for i in 0..n {
        let e = unit::<T>(n, i);
        let mut q = e.clone();
        for (prev, norm) in rows.iter().zip(&norms) {
            let c = -(pair(gram, &e, prev) / norm.clone());
            axpy(&mut q, &c, prev);
        }
        let norm = pair(gram, &q, &q);
        if degenerate(&norm, scale) {
            return Err(Error::DegenerateForm(i + 1));
        }
        rows.push(q);
        norms.push(norm);
    }
    Ok((rows, norms))
}

/// Unit lower-triangular rows `q_1..q_N` (`N` even) whose skew pairings are
/// block diagonal: `<q_{2j-1}, q_{2j}> = m_j` and every other pairing across
/// blocks vanishes. `q_{2j}` carries no `q_{2j-1}` component.
pub(crate) fn skew_reduce<T: Field>(form: &Matrix<T>) -> Result<(Vec<Vec<T>>, Vec<T>)> {
    let n = form.rows();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let scale = scale_of(form);
    let (mut rows, mut blocks): (Vec<Vec<T>>, Vec<T>) = (Vec::new(), Vec::new());
    let project = |v: &[T], rows: &[Vec<T>], blocks: &[T]| {
        let mut out = v.to_vec();
        for (j, m) in blocks.iter().enumerate() {
            let (a, b) = (&rows[2 * j], &rows[2 * j + 1]);
            let ca = -(pair(form, v, b) / m.clone());
            let cb = pair(form, v, a) / m.clone();
            axpy(&mut out, &ca, a);
            axpy(&mut out, &cb, b);
        }
        out
    };
    for j in 0..n / 2 {
        let a = project(&unit(n, 2 * j), &rows, &blocks);
        let b = project(&unit(n, 2 * j + 1), &rows, &blocks);
        let m = pair(form, &a, &b);
        if degenerate(&m, scale) {
            return Err(Error::DegenerateForm(j + 1));
        }
        rows.push(a);
        rows.push(b);
        blocks.push(m);
    }
    Ok((rows, blocks))
}

fn real_part(gram: &Matrix<Complex64>) -> Result<Matrix<f64>> {
    let scale = scale_of(gram);
    for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            if gram[(i, j)].im.abs() > 1e-8 * scale {
                return Err(Error::InvalidArgument(
                    "Gram matrix is not real; the root function is not conjugation symmetric".into(),
                ));
            }
        }
    }
    Ok(gram.map(|z| z.re))
}

fn float_family(rows: Vec<Vec<f64>>) -> Result<MonicFamily> {
    MonicFamily::from_real(rows.into_iter().enumerate().map(|(i, r)| r[..=i].to_vec()).collect())
}

fn exact_family(rows: Vec<Vec<BigRational>>) -> Result<MonicFamily> {
    MonicFamily::from_rational(rows.into_iter().enumerate().map(|(i, r)| r[..=i].to_vec()).collect())
}

fn rational_matrix(m: &Matrix<crate::exactalg::RationalFunction>, s: &BigRational) -> Result<Matrix<BigRational>> {
    let rows = m
        .to_rows()
        .into_iter()
        .map(|r| r.iter().map(|f| f.eval(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

/// A family orthogonal for the Hermitian form, with norms `<Q_n | Q_n>`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianBasis {
    pub family: MonicFamily,
    pub norms: Vec<f64>,
}

impl HermitianBasis {
    pub fn norm_product(&self) -> f64 {
        self.norms.iter().product()
    }
}

/// Exact orthogonal family at a rational `s`; every norm is `pi` times the
/// stored rational.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactHermitianBasis {
    pub family: MonicFamily,
    pub norms_over_pi: Vec<BigRational>,
}

/// A skew-orthogonal family (`N` even) with block values `<Q_{2j-1}, Q_{2j}>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewBasis {
    pub family: MonicFamily,
    pub normalizations: Vec<f64>,
}

impl SkewBasis {
    pub fn normalization_product(&self) -> f64 {
        self.normalizations.iter().product()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSkewBasis {
    pub family: MonicFamily,
    pub normalizations: Vec<BigRational>,
}

fn check_s(s: f64, n: usize) -> Result<()> {
    if s > n as f64 {
        Ok(())
    } else {
        Err(Error::ConvergenceViolation { s, bound: n as f64 })
    }
}

/// Monic Gram–Schmidt of `1, gamma, ..., gamma^(N-1)` by quadrature.
pub fn orthogonalize_hermitian(
    kind: &RootFunctionKind,
    s: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<HermitianBasis> {
    check_s(s, n)?;
    let gram = real_part(&gram_matrix_numeric(kind, s, &MonicFamily::monomials(n), spec)?)?;
    let (rows, norms) = hermitian_reduce(&gram)?;
    Ok(HermitianBasis { family: float_family(rows)?, norms })
}

pub fn orthogonalize_hermitian_exact(kind: &RootFunctionKind, s: &BigRational, n: usize) -> Result<ExactHermitianBasis> {
    check_s(s.to_f64().unwrap_or(f64::NAN), n)?;
    let gram = rational_matrix(&gram_matrix_exact(kind, &MonicFamily::monomials(n))?, s)?;
    let (rows, norms) = hermitian_reduce(&gram)?;
    Ok(ExactHermitianBasis { family: exact_family(rows)?, norms_over_pi: norms })
}

/// Skew Gram–Schmidt of the monomials by quadrature, in `2 x 2` blocks.
pub fn skew_orthogonalize(kind: &RootFunctionKind, s: f64, n: usize, spec: &QuadratureSpec) -> Result<SkewBasis> {
    check_s(s, n)?;
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let u = skew_matrix_numeric(kind, s, &MonicFamily::monomials(n), spec)?;
    let (rows, normalizations) = skew_reduce(u.matrix())?;
    Ok(SkewBasis { family: float_family(rows)?, normalizations })
}

pub fn skew_orthogonalize_exact(kind: &RootFunctionKind, s: &BigRational, n: usize) -> Result<ExactSkewBasis> {
    check_s(s.to_f64().unwrap_or(f64::NAN), n)?;
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let u = skew_matrix_exact(kind, &MonicFamily::monomials(n))?;
    let (rows, normalizations) = skew_reduce(&rational_matrix(u.matrix(), s)?)?;
    Ok(ExactSkewBasis { family: exact_family(rows)?, normalizations })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::exactalg::{determinant, pfaffian};
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn mahler_monomials_are_orthogonal() {
        let b = orthogonalize_hermitian(&RootFunctionKind::Mahler, 3.0, 2, &QuadratureSpec::default()).unwrap();
        assert!((b.family.coeffs(1)[0]).abs() < 1e-10);
        assert!((b.norm_product() - (1.5 * PI).powi(2)).abs() < 1e-8);
        let e = orthogonalize_hermitian_exact(&RootFunctionKind::Mahler, &q(5, 1), 4).unwrap();
        assert_eq!(e.family, MonicFamily::monomials(4));
        assert_eq!(e.norms_over_pi[1], q(5, 6));
    }

    #[test]
    fn reciprocal_exact_basis_is_orthogonal_and_matches_determinant() {
        let kind = RootFunctionKind::Reciprocal;
        let s = q(9, 2);
        let basis = orthogonalize_hermitian_exact(&kind, &s, 4).unwrap();
        let g = rational_matrix(&gram_matrix_exact(&kind, &basis.family).unwrap(), &s).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(g[(i, j)].is_zero());
                }
            }
        }
        let mono = rational_matrix(&gram_matrix_exact(&kind, &MonicFamily::monomials(4)).unwrap(), &s).unwrap();
        let prod: BigRational = basis.norms_over_pi.iter().product();
        assert_eq!(prod, determinant(&mono).unwrap());
    }

    #[test]
    fn skew_blocks() {
        let kind = RootFunctionKind::Mahler;
        let b = skew_orthogonalize(&kind, 3.0, 2, &QuadratureSpec::default()).unwrap();
        assert!((b.normalizations[0] - 12.0).abs() < 1e-7);
        let s = q(11, 2);
        let e = skew_orthogonalize_exact(&RootFunctionKind::Reciprocal, &s, 4).unwrap();
        let u = rational_matrix(skew_matrix_exact(&RootFunctionKind::Reciprocal, &e.family).unwrap().matrix(), &s).unwrap();
        assert!(u[(0, 2)].is_zero() && u[(1, 3)].is_zero() && u[(0, 3)].is_zero() && u[(1, 2)].is_zero());
        let pf = pfaffian(&skew_matrix_exact(&RootFunctionKind::Reciprocal, &MonicFamily::monomials(4)).unwrap()).unwrap();
        let prod: BigRational = e.normalizations.iter().product();
        assert_eq!(prod, pf.eval(&s).unwrap());
    }

    #[test]
    fn odd_size_rejected() {
        assert!(matches!(
            skew_orthogonalize_exact(&RootFunctionKind::Mahler, &q(7, 1), 3),
            Err(Error::OddSize(3))
        ));
    }
}
