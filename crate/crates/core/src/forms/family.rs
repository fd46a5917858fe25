//! Complete families of monic polynomials `P_1, ..., P_N` with `deg P_n = n - 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polyroots::Polynomial;

/// A complete set of monic real polynomials, one per degree `0..N`.
///
/// Coefficients are stored in ascending order. Families built from rational
/// data also keep their exact coefficients, which the exact forms require.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicFamily {
    coeffs: Vec<Vec<f64>>,
    exact: Option<Vec<Vec<BigRational>>>,
}

impl MonicFamily {
    /// Builds a family from exact ascending coefficient lists.
    pub fn from_rational(polys: Vec<Vec<BigRational>>) -> Result<Self> {
        for (n, p) in polys.iter().enumerate() {
            if p.len() != n + 1 || !p[n].is_one() {
                return Err(Error::InvalidArgument(format!(
                    "family member {} must be monic of degree {n}",
                    n + 1
                )));
            }
        }
        let coeffs = polys
            .iter()
            .map(|p| p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect())
            .collect();
        Ok(Self { coeffs, exact: Some(polys) })
    }

    /// Builds a family from floating-point ascending coefficient lists.
    pub fn from_real(polys: Vec<Vec<f64>>) -> Result<Self> {
        for (n, p) in polys.iter().enumerate() {
            if p.len() != n + 1 || p[n] != 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "family member {} must be monic of degree {n}",
                    n + 1
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteCoefficient);
            }
        }
        Ok(Self { coeffs: polys, exact: None })
    }

    /// `1, gamma, gamma^2, ...`
    pub fn monomials(n: usize) -> Self {
        let polys = (0..n)
            .map(|d| {
                let mut p = vec![BigRational::zero(); d + 1];
                p[d] = BigRational::one();
                p
            })
            .collect();
        Self::from_rational(polys).expect("monomials are monic")
    }

    /// `(gamma - c)^k` for `k = 0..N`.
    pub fn shifted(n: usize, c: i64) -> Self {
        let polys = (0..n)
            .map(|d| {
                (0..=d)
                    .map(|i| {
                        let binom = binomial(d as u64, i as u64);
                        let pow = BigInt::from(-c).pow((d - i) as u32);
                        BigRational::from_integer(binom * pow)
                    })
                    .collect()
            })
            .collect();
        Self::from_rational(polys).expect("shifted powers are monic")
    }

    /// Monic Chebyshev polynomials on `[-2, 2]`: `p_0 = 1`, `p_1 = gamma`,
    /// `p_{k+1} = gamma p_k - p_{k-1}` (with `p_2 = gamma^2 - 2`).
    pub fn chebyshev(n: usize) -> Self {
        let mut polys: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        for d in 0..n {
            let p = match d {
                0 => vec![BigRational::one()],
                1 => vec![BigRational::zero(), BigRational::one()],
                _ => {
                    let mut next = vec![BigRational::zero(); d + 1];
                    for (i, c) in polys[d - 1].iter().enumerate() {
                        next[i + 1] += c;
                    }
                    let factor = if d == 2 { 2 } else { 1 };
                    for (i, c) in polys[d - 2].iter().enumerate() {
                        next[i] -= c * BigRational::from_integer(factor.into());
                    }
                    next
                }
            };
            polys.push(p);
        }
        Self::from_rational(polys).expect("Chebyshev recurrence stays monic")
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Ascending floating-point coefficients of member `i` (0-based).
    pub fn coeffs(&self, i: usize) -> &[f64] {
        &self.coeffs[i]
    }

    /// Exact coefficients, when the family was built from rational data.
    pub fn exact(&self) -> Option<&[Vec<BigRational>]> {
        self.exact.as_deref()
    }

    /// Member `i` (0-based) as a [`Polynomial`].
    pub fn polynomial(&self, i: usize) -> Polynomial {
        let mut c = self.coeffs[i].clone();
        c.reverse();
        Polynomial::from_real(&c)
    }

    /// Change-of-basis matrix rows: member `i` in the monomial basis, padded to `N`.
    pub(crate) fn exact_basis(&self) -> Result<Vec<Vec<BigRational>>> {
        let exact = self.exact.as_ref().ok_or_else(|| {
            Error::InvalidArgument("exact forms need a family with rational coefficients".into())
        })?;
        let n = exact.len();
        Ok(exact
            .iter()
            .map(|p| {
                let mut row = p.clone();
                row.resize(n, BigRational::zero());
                row
            })
            .collect())
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(f: &MonicFamily, i: usize) -> Vec<i64> {
        f.coeffs(i).iter().map(|c| *c as i64).collect()
    }

    #[test]
    fn standard_families() {
        let m = MonicFamily::monomials(3);
        assert_eq!(ints(&m, 2), vec![0, 0, 1]);
        let s = MonicFamily::shifted(3, 1);
        assert_eq!(ints(&s, 2), vec![1, -2, 1]);
        let c = MonicFamily::chebyshev(5);
        assert_eq!(ints(&c, 2), vec![-2, 0, 1]);
        assert_eq!(ints(&c, 3), vec![0, -3, 0, 1]);
        assert_eq!(ints(&c, 4), vec![2, 0, -4, 0, 1]);
    }

    #[test]
    fn rejects_non_monic_or_wrong_degree() {
        assert!(MonicFamily::from_real(vec![vec![2.0]]).is_err());
        assert!(MonicFamily::from_real(vec![vec![1.0], vec![1.0]]).is_err());
        assert!(MonicFamily::from_real(vec![vec![1.0], vec![0.5, 1.0]]).is_ok());
    }

    #[test]
    fn evaluation_matches_polynomial() {
        use num_complex::Complex64;
        let c = MonicFamily::chebyshev(4);
        let z = Complex64::new(0.3, -1.2);
        for i in 0..c.len() {
            let direct = c.coeffs(i).iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k);
            assert!((c.polynomial(i).eval(z) - direct).norm() < 1e-12);
        }
    }
}
