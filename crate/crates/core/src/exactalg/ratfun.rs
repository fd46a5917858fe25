use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::intpoly::IntPoly;
use crate::error::{Error, Result};

/// A quotient of integer polynomials in `s`, kept in canonical form:
/// numerator and denominator coprime over Q[s], jointly free of integer
/// content, denominator with positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: IntPoly,
    den: IntPoly,
}

impl RationalFunction {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = num.div_scalar(&c);
            den = den.div_scalar(&c);
        }
        if den.leading().is_negative() {
            num = -&num;
            den = -&den;
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: IntPoly) -> Self {
        Self::new(p, IntPoly::one()).expect("unit denominator")
    }

    pub fn constant(c: &BigRational) -> Self {
        Self::new(
            IntPoly::constant(c.numer().clone()),
            IntPoly::constant(c.denom().clone()),
        )
        .expect("rational has nonzero denominator")
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(IntPoly::from_i64s(&[c]))
    }

    /// The variable `s`.
    pub fn var() -> Self {
        Self::from_poly(IntPoly::var())
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Exact value at a rational point.
    pub fn eval(&self, s: &BigRational) -> Result<BigRational> {
        let d = self.den.eval_rational(s);
        if d.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Ok(self.num.eval_rational(s) / d)
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        self.num.eval_f64(s) / self.den.eval_f64(s)
    }

    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        self.num.eval_complex(s) / self.den.eval_complex(s)
    }

    /// `f(-s)`
    pub fn reflect(&self) -> Self {
        Self::new(self.num.reflect(), self.den.reflect()).expect("nonzero denominator")
    }

    /// Limit as `s -> infinity` when it is finite.
    pub fn limit_at_infinity(&self) -> Option<BigRational> {
        let (dn, dd) = (self.num.degree()?, self.den.degree()?);
        match dn.cmp(&dd) {
            std::cmp::Ordering::Less => Some(BigRational::zero()),
            std::cmp::Ordering::Equal => {
                Some(BigRational::new(self.num.leading(), self.den.leading()))
            }
            std::cmp::Ordering::Greater => None,
        }
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        Self {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self {
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone())
                .expect("nonzero denominator");
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero denominator")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero denominator")
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; see [`RationalFunction::checked_div`].
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// `pi^pi_power * body(s)`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScaledRationalFunction {
    pub pi_power: u32,
    pub body: RationalFunction,
}

impl ScaledRationalFunction {
    pub fn new(pi_power: u32, body: RationalFunction) -> Self {
        Self { pi_power, body }
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        std::f64::consts::PI.powi(self.pi_power as i32) * self.body.eval_f64(s)
    }

    /// The rational cofactor of `pi^pi_power` at a rational point.
    pub fn eval_rational_part(&self, s: &BigRational) -> Result<BigRational> {
        self.body.eval(s)
    }
}

impl fmt::Display for ScaledRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", self.body),
            1 => write!(f, "pi * {}", self.body),
            k => write!(f, "pi^{k} * {}", self.body),
        }
    }
}

/// `f(s) = polynomial(s) + sum c_k / (s - k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions {
    /// Polynomial part, ascending coefficients.
    pub polynomial: Vec<BigRational>,
    /// `(pole, residue)` sorted by pole.
    pub terms: Vec<(i64, BigRational)>,
}

/// Integer roots of `p` with multiplicity, searched within the Cauchy bound.
fn integer_roots(p: &IntPoly) -> Result<Vec<(i64, u32)>> {
    let mut rest = p.clone();
    let mut out = Vec::new();
    // Zero first, then candidates up to the Cauchy bound.
    let mut zero_mult = 0;
    while rest.coeffs().first().is_some_and(Zero::is_zero) {
        rest = rest.div_exact(&IntPoly::var()).expect("s divides");
        zero_mult += 1;
    }
    if zero_mult > 0 {
        out.push((0, zero_mult));
    }
    let Some(deg) = rest.degree() else {
        return Ok(out);
    };
    if deg == 0 {
        return Ok(out);
    }
    // Fujiwara's bound on root moduli.
    let lead = rest.leading().to_f64().unwrap_or(f64::INFINITY).abs();
    let fujiwara = (1..=deg)
        .map(|k| {
            let c = rest.coeffs()[deg - k].to_f64().unwrap_or(f64::INFINITY).abs();
            (c / lead).powf(1.0 / k as f64)
        })
        .fold(0.0_f64, f64::max);
    let bound = (2.0 * fujiwara).ceil() + 1.0;
    if !(bound < 1e9) {
        return Err(Error::NonIntegerPole);
    }
    let bound = bound as i64;
    // The constant term is a multiple of every nonzero integer root.
    let constant = rest.coeffs()[0].clone();
    for k in 1..=bound {
        for cand in [k, -k] {
            if !(&constant % BigInt::from(cand)).is_zero() {
                continue;
            }
            let lin = IntPoly::from_i64s(&[-cand, 1]);
            let mut mult = 0;
            while let Some(q) = rest.div_exact(&lin) {
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((cand, mult));
            }
        }
        if rest.degree() == Some(0) {
            break;
        }
    }
    if rest.degree() != Some(0) {
        return Err(Error::NonIntegerPole);
    }
    out.sort();
    Ok(out)
}

/// Decompose a rational function whose denominator splits into distinct
/// integer linear factors.
pub fn partial_fractions(f: &RationalFunction) -> Result<PartialFractions> {
    let poles = integer_roots(f.denominator())?;
    if let Some(&(k, _)) = poles.iter().find(|(_, m)| *m > 1) {
        return Err(Error::RepeatedPole(k));
    }
    // Polynomial part by long division over Q.
    let num: Vec<BigRational> = f.numerator().coeffs().iter().cloned().map(BigRational::from).collect();
    let den: Vec<BigRational> = f.denominator().coeffs().iter().cloned().map(BigRational::from).collect();
    let dd = den.len() - 1;
    let mut rem = num;
    let mut quotient = Vec::new();
    if rem.len() > dd {
        quotient = vec![BigRational::zero(); rem.len() - dd];
        for shift in (0..quotient.len()).rev() {
            let q = &rem[shift + dd] / &den[dd];
            for (i, c) in den.iter().enumerate() {
                rem[i + shift] = &rem[i + shift] - &q * c;
            }
            quotient[shift] = q;
        }
    }
    while quotient.last().is_some_and(Zero::is_zero) {
        quotient.pop();
    }
    let dprime = f.denominator().derivative();
    let terms = poles
        .iter()
        .map(|&(k, _)| {
            let x = BigRational::from_integer(k.into());
            let residue = f.numerator().eval_rational(&x) / dprime.eval_rational(&x);
            (k, residue)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Ok(PartialFractions {
        polynomial: quotient,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(IntPoly::from_i64s(num), IntPoly::from_i64s(den)).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_examples() {
        // s/(s-1) + 1/(s-1) = (s+1)/(s-1)
        assert_eq!(&rf(&[0, 1], &[-1, 1]) + &rf(&[1], &[-1, 1]), rf(&[1, 1], &[-1, 1]));
        // s/(s-2) * (s-2)/s = 1
        assert_eq!(&rf(&[0, 1], &[-2, 1]) * &rf(&[-2, 1], &[0, 1]), RationalFunction::one());
        assert_eq!(rf(&[0, 1], &[-1, 1]).eval(&q(2, 1)).unwrap(), q(2, 1));
    }

    #[test]
    fn canonical_form() {
        let a = rf(&[0, 4], &[-6, 3]);
        assert_eq!(a.numerator(), &IntPoly::from_i64s(&[0, 4]));
        assert_eq!(a.denominator(), &IntPoly::from_i64s(&[-6, 3]));
        let b = rf(&[0, -8], &[12, -6]);
        assert_eq!(a, b);
        assert_eq!(rf(&[2, 2], &[4, 4]), RationalFunction::from_int(1) * RationalFunction::constant(&q(1, 2)));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            RationalFunction::one().checked_div(&RationalFunction::zero()),
            Err(Error::DivisionByZeroFunction)
        );
        assert!(RationalFunction::new(IntPoly::one(), IntPoly::zero()).is_err());
        assert!(rf(&[1], &[-1, 1]).eval(&q(1, 1)).is_err());
    }

    #[test]
    fn partial_fraction_examples() {
        let pf = partial_fractions(&rf(&[2], &[-1, 1])).unwrap();
        assert_eq!(pf.terms, vec![(1, q(2, 1))]);
        assert!(pf.polynomial.is_empty());
        let pf = partial_fractions(&rf(&[0, 2], &[-1, 0, 1])).unwrap();
        assert_eq!(pf.terms, vec![(-1, q(1, 1)), (1, q(1, 1))]);
        // 4s^2/(s^2-1) = 4 + 2/(s-1) - 2/(s+1)
        let pf = partial_fractions(&rf(&[0, 0, 4], &[-1, 0, 1])).unwrap();
        assert_eq!(pf.polynomial, vec![q(4, 1)]);
        assert_eq!(pf.terms, vec![(-1, q(-2, 1)), (1, q(2, 1))]);
    }

    #[test]
    fn partial_fraction_errors() {
        assert_eq!(partial_fractions(&rf(&[1], &[1, 0, 1])), Err(Error::NonIntegerPole));
        assert_eq!(partial_fractions(&rf(&[1], &[1, -2, 1])), Err(Error::RepeatedPole(1)));
        assert_eq!(partial_fractions(&rf(&[1], &[-1, 2])), Err(Error::NonIntegerPole));
    }

    #[test]
    fn limit_and_reflection() {
        let f = rf(&[0, 0, 32], &[-12, 0, 3]);
        assert_eq!(f.limit_at_infinity(), Some(q(32, 3)));
        assert_eq!(f.reflect(), f);
        assert_eq!(rf(&[1], &[0, 1]).limit_at_infinity(), Some(q(0, 1)));
        assert_eq!(rf(&[0, 0, 1], &[1, 1]).limit_at_infinity(), None);
    }

    #[test]
    fn display() {
        assert_eq!(rf(&[0, 0, 32], &[-12, 0, 3]).to_string(), "(32*s^2)/(3*s^2 - 12)");
        let h = ScaledRationalFunction::new(2, rf(&[0, 1], &[1]));
        assert_eq!(h.to_string(), "pi^2 * s");
    }
}
