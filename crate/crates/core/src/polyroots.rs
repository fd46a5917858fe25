//! Polynomials with complex coefficients, root finding, and the
//! reciprocal-polynomial / Laurent-substitution correspondence.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_traits::{FromPrimitive, One, Zero};
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Default relative tolerance for [`roots`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-13;

/// Roots closer than this to the real axis are snapped onto it for real input.
const REAL_SNAP: f64 = 1e-10;

const MAX_ABERTH_ITERATIONS: usize = 500;

/// A polynomial stored leading coefficient first, so `[a, b1, .., bN]`
/// means `a x^N + b1 x^(N-1) + .. + bN`.
///
/// Leading zeros are allowed; the effective degree skips them.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c as f64, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![Complex64::zero()])
    }

    /// `x^n`
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::zero(); n + 1];
        coeffs[0] = Complex64::one();
        Self::new(coeffs)
    }

    /// Raw coefficients, leading first, including any leading zeros.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.first_nonzero().is_none()
    }

    /// Effective degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.first_nonzero().map(|i| self.coeffs.len() - 1 - i)
    }

    /// Leading coefficient (first nonzero entry); zero for the zero polynomial.
    pub fn leading(&self) -> Complex64 {
        self.first_nonzero().map_or(Complex64::zero(), |i| self.coeffs[i])
    }

    /// Copy with leading zeros removed (the zero polynomial becomes `[0]`).
    pub fn trimmed(&self) -> Self {
        match self.first_nonzero() {
            Some(i) => Self::new(self.coeffs[i..].to_vec()),
            None => Self::zero(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scale(&self, w: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * w).collect())
    }

    pub fn derivative(&self) -> Self {
        let p = self.trimmed();
        let n = p.coeffs.len() - 1;
        if n == 0 {
            return Self::zero();
        }
        Self::new(
            p.coeffs[..n]
                .iter()
                .enumerate()
                .map(|(i, c)| c * (n - i) as f64)
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::zero(), |acc, &c| acc * x + c)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let (a, b) = (self.trimmed(), rhs.trimmed());
        let mut out = vec![Complex64::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Polynomial::new(out)
    }
}

fn aligned_sum(a: &Polynomial, b: &Polynomial, sign: f64) -> Polynomial {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut out = vec![Complex64::zero(); n];
    for (i, c) in a.coeffs.iter().enumerate() {
        out[n - a.coeffs.len() + i] += c;
    }
    for (i, c) in b.coeffs.iter().enumerate() {
        out[n - b.coeffs.len() + i] += c * sign;
    }
    Polynomial::new(out)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        aligned_sum(self, rhs, 1.0)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        aligned_sum(self, rhs, -1.0)
    }
}

/// Evaluate `p` at `z` by Horner's rule.
pub fn eval_poly(p: &Polynomial, z: Complex64) -> Complex64 {
    p.eval(z)
}

/// Leading coefficient together with the root multiset.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub leading: Complex64,
    pub roots: Vec<Complex64>,
}

impl RootSet {
    pub fn to_polynomial(&self) -> Polynomial {
        from_roots(self.leading, &self.roots)
    }
}

/// Expand `leading * prod (x - r)`.
pub fn from_roots(leading: Complex64, roots: &[Complex64]) -> Polynomial {
    let mut coeffs = vec![leading];
    for &r in roots {
        coeffs.push(Complex64::zero());
        for i in (1..coeffs.len()).rev() {
            let prev = coeffs[i - 1];
            coeffs[i] -= prev * r;
        }
    }
    Polynomial::new(coeffs)
}

/// Sum of `|c_k| |z|^k`, the natural scale for a backward-error residual test.
fn residual_scale(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().fold(0.0, |acc, c| acc * r + c.norm())
}

fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - a * c * 4.0).sqrt();
    // Pick the sign that avoids cancellation.
    let q = if (b.conj() * disc).re >= 0.0 {
        -(b + disc) * 0.5
    } else {
        -(b - disc) * 0.5
    };
    if q.is_zero() {
        return [Complex64::zero(), Complex64::zero()];
    }
    [q / a, c / q]
}

fn companion_eigenvalues(monic: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = monic.len() - 1;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -monic[j + 1];
    }
    for i in 1..n {
        m[(i, i - 1)] = Complex64::one();
    }
    let schur = Schur::try_new(m, 1e-15, 2000)?;
    let eig = schur.eigenvalues()?;
    let v: Vec<Complex64> = eig.iter().copied().collect();
    v.iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
        .then_some(v)
}

fn circle_start(monic: &[Complex64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let radius = 1.0
        + monic[1..]
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max);
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, theta)
        })
        .collect()
}

fn aberth(coeffs: &[Complex64], start: Vec<Complex64>, tol: f64) -> Result<Vec<Complex64>> {
    let p = Polynomial::new(coeffs.to_vec());
    let dp = p.derivative();
    let mut z = start;
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..MAX_ABERTH_ITERATIONS {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let pz = p.eval(z[i]);
            if pz.norm() <= tol * 1e-3 * residual_scale(coeffs, z[i]) {
                done[i] = true;
                continue;
            }
            all_done = false;
            let ratio = pz / dp.eval(z[i]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let denom = Complex64::one() - ratio * repulsion;
            let step = if denom.is_zero() || !denom.re.is_finite() {
                ratio
            } else {
                ratio / denom
            };
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
        if all_done {
            break;
        }
    }
    let worst = z
        .iter()
        .map(|&r| p.eval(r).norm() / residual_scale(coeffs, r).max(f64::MIN_POSITIVE))
        .fold(0.0_f64, f64::max);
    if worst > tol.max(1e3 * f64::EPSILON) {
        return Err(Error::ToleranceNotReached {
            what: "polynomial roots",
            estimate: worst,
        });
    }
    Ok(z)
}

/// Make the root multiset of a real polynomial exactly conjugation-closed.
fn symmetrize(mut roots: Vec<Complex64>) -> Vec<Complex64> {
    for r in roots.iter_mut() {
        if r.im.abs() <= REAL_SNAP * r.norm().max(1.0) {
            r.im = 0.0;
        }
    }
    let mut out: Vec<Complex64> = roots.iter().copied().filter(|r| r.im == 0.0).collect();
    let mut upper: Vec<Complex64> = roots.iter().copied().filter(|r| r.im > 0.0).collect();
    let mut lower: Vec<Complex64> = roots.iter().copied().filter(|r| r.im < 0.0).collect();
    while let Some(u) = upper.pop() {
        let best = lower
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1.conj() - u)
                    .norm()
                    .total_cmp(&(b.1.conj() - u).norm())
            })
            .map(|(i, _)| i);
        match best {
            Some(i) => {
                let l = lower.swap_remove(i);
                let mid = (u + l.conj()) * 0.5;
                out.push(mid);
                out.push(mid.conj());
            }
            None => {
                // Unpaired: project to the real axis.
                out.push(Complex64::new(u.re, 0.0));
            }
        }
    }
    out.extend(lower.into_iter().map(|l| Complex64::new(l.re, 0.0)));
    out
}

/// All roots of `p` (with multiplicity).
///
/// Companion-matrix eigenvalues seed an Aberth–Ehrlich iteration; each root
/// must satisfy `|p(r)| <= tol * sum |c_k| |r|^k`.
pub fn roots(p: &Polynomial, tol: f64) -> Result<RootSet> {
    if !p.is_finite() {
        return Err(Error::NonFiniteCoefficient);
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let trimmed = p.trimmed();
    let leading = trimmed.coeffs[0];
    let mut coeffs: Vec<Complex64> = trimmed.coeffs.iter().map(|c| c / leading).collect();
    let mut found = Vec::new();
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
        found.push(Complex64::zero());
    }
    match coeffs.len() - 1 {
        0 => {}
        1 => found.push(-coeffs[1]),
        2 => found.extend(quadratic_roots(coeffs[0], coeffs[1], coeffs[2])),
        _ => {
            let start = companion_eigenvalues(&coeffs).unwrap_or_else(|| circle_start(&coeffs));
            let refined = match aberth(&coeffs, start, tol) {
                Ok(r) => r,
                Err(_) => aberth(&coeffs, circle_start(&coeffs), tol)?,
            };
            found.extend(refined);
        }
    }
    if p.is_real() {
        found = symmetrize(found);
    }
    Ok(RootSet {
        leading,
        roots: found,
    })
}

/// True when the coefficient sequence (leading zeros removed) is a palindrome.
pub fn is_reciprocal(p: &Polynomial) -> bool {
    let t = p.trimmed();
    let c = &t.coeffs;
    (0..c.len() / 2).all(|i| c[i] == c[c.len() - 1 - i])
}

fn binomial_row(m: usize) -> Vec<u128> {
    let mut row = vec![1u128];
    for _ in 0..m {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row
}

/// Coefficients (leading first) of `x^J g(x + t/x)` for `g` given leading
/// first with degree `J`. Works over any commutative ring.
pub fn laurent_substitute_coeffs<T>(g: &[T], t: &T) -> Vec<T>
where
    T: Clone + Zero + One + Mul<Output = T> + FromPrimitive,
{
    let deg = g.len() - 1;
    // out index = 2J - exponent, exponent in 0..=2J.
    let mut out = vec![T::zero(); 2 * deg + 1];
    for (i, gi) in g.iter().enumerate() {
        let m = deg - i;
        let row = binomial_row(m);
        let mut t_pow = T::one();
        for (r, &b) in row.iter().enumerate() {
            // x^J * x^(m - 2r) * t^r
            let exponent = deg + m - 2 * r;
            let coeff = T::from_u128(b).expect("binomial representable");
            out[2 * deg - exponent] =
                out[2 * deg - exponent].clone() + gi.clone() * coeff * t_pow.clone();
            t_pow = t_pow * t.clone();
        }
    }
    out
}

/// Inverse of [`laurent_substitute_coeffs`] at `t = 1` for a palindromic
/// input of even degree. Uses only ring operations, so integers stay integers.
pub fn laurent_recover_coeffs<T>(f: &[T]) -> Result<Vec<T>>
where
    T: Clone + Zero + PartialEq + Sub<Output = T> + Mul<Output = T> + FromPrimitive,
{
    let len = f.len();
    if len % 2 == 0 {
        return Err(Error::OddDegree(len - 1));
    }
    if (0..len / 2).any(|i| f[i] != f[len - 1 - i]) {
        return Err(Error::NotReciprocal);
    }
    let half = len / 2;
    // sym[k] is the coefficient of x^k (equal to that of x^-k) after dividing by x^J.
    let mut sym: Vec<T> = (0..=half).map(|k| f[half - k].clone()).collect();
    let mut g = vec![T::zero(); half + 1];
    for m in (0..=half).rev() {
        let c = sym[m].clone();
        g[half - m] = c.clone();
        let row = binomial_row(m);
        for (r, &b) in row.iter().enumerate() {
            if 2 * r > m {
                break;
            }
            let coeff = T::from_u128(b).expect("binomial representable");
            sym[m - 2 * r] = sym[m - 2 * r].clone() - c.clone() * coeff;
        }
    }
    Ok(g)
}

/// `x^J g(x + t/x)` for real `t`.
pub fn substitute_laurent(g: &Polynomial, t: f64) -> Result<Polynomial> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let trimmed = g.trimmed();
    Ok(Polynomial::new(laurent_substitute_coeffs(
        &trimmed.coeffs,
        &Complex64::new(t, 0.0),
    )))
}

/// The `g` with `f(x) = x^J g(x + 1/x)`.
pub fn recover_g(f: &Polynomial) -> Result<Polynomial> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let trimmed = f.trimmed();
    Ok(Polynomial::new(laurent_recover_coeffs(&trimmed.coeffs)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn horner_examples() {
        assert_eq!(eval_poly(&Polynomial::from_ints(&[1, -1, -1]), c(0.0, 0.0)), c(-1.0, 0.0));
        assert_eq!(eval_poly(&Polynomial::from_ints(&[1, 0, 1]), c(0.0, 1.0)), c(0.0, 0.0));
        assert_eq!(eval_poly(&Polynomial::from_ints(&[2, 3]), c(1.5, 0.0)), c(6.0, 0.0));
    }

    #[test]
    fn golden_ratio_roots() {
        let r = sorted(roots(&Polynomial::from_ints(&[1, -1, -1]), DEFAULT_ROOT_TOL).unwrap().roots);
        let s5 = 5f64.sqrt();
        assert!((r[0].re - (1.0 - s5) / 2.0).abs() < 1e-14);
        assert!((r[1].re - (1.0 + s5) / 2.0).abs() < 1e-14);
        assert!(r.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn conjugate_pair() {
        let r = sorted(roots(&Polynomial::from_ints(&[1, 0, 1]), DEFAULT_ROOT_TOL).unwrap().roots);
        assert_eq!(r[0], r[1].conj());
        assert!((r[1].im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn round_trip_with_leading() {
        let p = from_roots(c(5.0, 0.0), &[c(2.0, 0.0), c(3.0, 0.0)]);
        let rs = roots(&p, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(rs.leading, c(5.0, 0.0));
        let r = sorted(rs.roots);
        assert!((r[0].re - 2.0).abs() < 1e-13 && (r[1].re - 3.0).abs() < 1e-13);
    }

    #[test]
    fn from_roots_examples() {
        assert_eq!(
            from_roots(c(1.0, 0.0), &[c(1.0, 0.0), c(-1.0, 0.0)]),
            Polynomial::from_ints(&[1, 0, -1])
        );
        assert_eq!(
            from_roots(c(2.0, 0.0), &[c(0.0, 1.0), c(0.0, -1.0)]),
            Polynomial::from_ints(&[2, 0, 2])
        );
        let s5 = 5f64.sqrt();
        let p = from_roots(c(1.0, 0.0), &[c((1.0 + s5) / 2.0, 0.0), c((1.0 - s5) / 2.0, 0.0)]);
        for (a, b) in p.coeffs().iter().zip([1.0, -1.0, -1.0]) {
            assert!((a.re - b).abs() < 1e-12);
        }
    }

    #[test]
    fn high_degree_real_roots_are_paired() {
        let p = Polynomial::from_ints(&[3, -1, 4, 1, -5, 9, -2, 6, 5, -3, 5]);
        let rs = roots(&p, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(rs.roots.len(), 10);
        let back = rs.to_polynomial();
        for (a, b) in back.coeffs().iter().zip(p.coeffs()) {
            assert!((a - b).norm() <= 1e-9 * 9.0);
        }
        let n_upper = rs.roots.iter().filter(|r| r.im > 0.0).count();
        let n_lower = rs.roots.iter().filter(|r| r.im < 0.0).count();
        assert_eq!(n_upper, n_lower);
    }

    #[test]
    fn zero_roots_and_errors() {
        let rs = roots(&Polynomial::from_ints(&[1, 0, 0]), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(rs.roots, vec![Complex64::zero(); 2]);
        assert!(roots(&Polynomial::from_ints(&[7]), DEFAULT_ROOT_TOL).unwrap().roots.is_empty());
        assert_eq!(roots(&Polynomial::zero(), 1e-13), Err(Error::ZeroPolynomial));
        assert_eq!(
            roots(&Polynomial::from_real(&[1.0, f64::NAN]), 1e-13),
            Err(Error::NonFiniteCoefficient)
        );
    }

    #[test]
    fn degree_bookkeeping() {
        let p = Polynomial::from_ints(&[0, 0, 2, 1]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.leading(), c(2.0, 0.0));
        assert_eq!(Polynomial::from_ints(&[0, 0]).degree(), None);
    }

    #[test]
    fn reciprocal_examples() {
        assert!(is_reciprocal(&Polynomial::from_ints(&[3, 7, 3])));
        assert!(!is_reciprocal(&Polynomial::from_ints(&[1, 1, -1])));
        assert!(is_reciprocal(&Polynomial::from_ints(&[1, 1])));
    }

    #[test]
    fn laurent_substitution_examples() {
        let sub = |g: &[i64]| {
            substitute_laurent(&Polynomial::from_ints(g), 1.0)
                .unwrap()
                .coeffs()
                .iter()
                .map(|z| z.re as i64)
                .collect::<Vec<_>>()
        };
        assert_eq!(sub(&[1, 0]), vec![1, 0, 1]);
        assert_eq!(sub(&[1, 0, -2]), vec![1, 0, 0, 0, 1]);
        assert_eq!(sub(&[1, 3]), vec![1, 3, 1]);
    }

    #[test]
    fn recover_examples() {
        let rec = |f: &[i64]| laurent_recover_coeffs(&f.iter().map(|&x| x as i128).collect::<Vec<_>>());
        assert_eq!(rec(&[1, 0, 0, 0, 1]).unwrap(), vec![1, 0, -2]);
        assert_eq!(rec(&[1, 3, 1]).unwrap(), vec![1, 3]);
        assert_eq!(rec(&[1, 2, 1]).unwrap(), vec![1, 2]);
        assert_eq!(rec(&[1, 2, 3]), Err(Error::NotReciprocal));
        assert_eq!(rec(&[1, 1]), Err(Error::OddDegree(1)));
    }

    #[test]
    fn t_substitution_matches_direct_expansion() {
        // x (x + t/x) + 3x = x^2 + 3x + t
        let f = laurent_substitute_coeffs(&[1.0, 3.0], &0.5);
        assert_eq!(f, vec![1.0, 3.0, 0.5]);
    }
}
