//! Closed forms of the moment functions as factored rational functions of `s`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::distfun::RootFunctionKind;
use crate::error::{Error, Result};
use crate::exactalg::{partial_fractions, IntPoly, RationalFunction, ScaledRationalFunction};

/// Which moment function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentType {
    /// Real coefficients: `F_N`.
    F,
    /// Complex coefficients: `H_N`.
    H,
}

impl fmt::Display for MomentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::F => "F",
            Self::H => "H",
        })
    }
}

/// An integer polynomial factor raised to a multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub poly: IntPoly,
    pub multiplicity: u32,
}

/// `pi^k * constant * prod(numerator factors) / prod(denominator factors)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentClosedForm {
    pub moment: MomentType,
    pub n: usize,
    pub pi_power: u32,
    pub constant: BigRational,
    pub numerator: Vec<Factor>,
    pub denominator: Vec<Factor>,
}

fn factor(coeffs: &[i64], multiplicity: u32) -> Factor {
    Factor {
        poly: IntPoly::from_i64s(coeffs),
        multiplicity,
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

fn pow2(n: usize) -> BigInt {
    BigInt::from(2).pow(n as u32)
}

/// `C_N = 2^N prod_{m=1}^{M} (2m / (2m+1))^(N-2m)`, `M = floor((N-1)/2)`.
pub fn mahler_constant(n: usize) -> BigRational {
    let mut c = BigRational::from_integer(pow2(n));
    for m in 1..=(n.saturating_sub(1) / 2) {
        let r = BigRational::new((2 * m).into(), (2 * m + 1).into());
        c *= num_traits::pow(r, n - 2 * m);
    }
    c
}

/// `v_N = 2^N / N! prod_{n=1}^N (2n / (2n-1))^(N+1-n)`.
pub fn reciprocal_constant(n: usize) -> BigRational {
    let mut v = BigRational::new(pow2(n), factorial(n));
    for k in 1..=n {
        let r = BigRational::new((2 * k).into(), (2 * k - 1).into());
        v *= num_traits::pow(r, n + 1 - k);
    }
    v
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("N must be positive".into()))
    } else {
        Ok(())
    }
}

impl MomentClosedForm {
    /// `H_N(mu) = pi^N / N! prod_{n=1}^N s / (s - n)`.
    pub fn h_mahler(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            moment: MomentType::H,
            n,
            pi_power: n as u32,
            constant: BigRational::new(BigInt::one(), factorial(n)),
            numerator: vec![factor(&[0, 1], n as u32)],
            denominator: (1..=n as i64).map(|k| factor(&[-k, 1], 1)).collect(),
        })
    }

    /// `F_N(mu) = C_N prod_{m=0}^{M} s / (s - (N - 2m))`.
    pub fn f_mahler(n: usize) -> Result<Self> {
        check_n(n)?;
        let m = (n - 1) / 2;
        Ok(Self {
            moment: MomentType::F,
            n,
            pi_power: 0,
            constant: mahler_constant(n),
            numerator: vec![factor(&[0, 1], (m + 1) as u32)],
            denominator: (0..=m).map(|j| factor(&[-((n - 2 * j) as i64), 1], 1)).collect(),
        })
    }

    /// `H_N(rho) = 2^N pi^N prod_{n=1}^N s / (s^2 - n^2)`.
    pub fn h_reciprocal(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            moment: MomentType::H,
            n,
            pi_power: n as u32,
            constant: BigRational::from_integer(pow2(n)),
            numerator: vec![factor(&[0, 1], n as u32)],
            denominator: (1..=n as i64).map(|k| factor(&[-k * k, 0, 1], 1)).collect(),
        })
    }

    /// `F_N(rho) = v_N prod s^2 / (s^2 - k^2)` over `k = N, N-2, ...` down to 1 or 2.
    pub fn f_reciprocal(n: usize) -> Result<Self> {
        check_n(n)?;
        let poles: Vec<i64> = (0..=n / 2).map(|j| (n - 2 * j) as i64).filter(|&k| k > 0).collect();
        Ok(Self {
            moment: MomentType::F,
            n,
            pi_power: 0,
            constant: reciprocal_constant(n),
            numerator: vec![factor(&[0, 0, 1], poles.len() as u32)],
            denominator: poles.iter().map(|&k| factor(&[-k * k, 0, 1], 1)).collect(),
        })
    }

    /// `H_N(mu_t) = pi^N s^N / N! prod ((1 - t^2n) s + (1 + t^2n) n) / (s^2 - n^2)`.
    pub fn h_treciprocal(n: usize, t: &BigRational) -> Result<Self> {
        check_n(n)?;
        if t.is_negative() || t > &BigRational::one() {
            return Err(Error::InvalidArgument(format!("t = {t} outside [0, 1]")));
        }
        let (p, q) = (t.numer().clone(), t.denom().clone());
        let mut constant = BigRational::new(BigInt::one(), factorial(n));
        let mut numerator = vec![Factor {
            poly: IntPoly::var(),
            multiplicity: n as u32,
        }];
        for k in 1..=n {
            let (p2, q2) = (p.pow(2 * k as u32), q.pow(2 * k as u32));
            // ((q2 - p2) s + (q2 + p2) k) / q2, with the integer content moved out.
            let lin = IntPoly::linear(&q2 - &p2, (&q2 + &p2) * BigInt::from(k));
            let content = lin.content();
            constant *= BigRational::new(content.clone(), q2);
            let prim = lin.div_scalar(&content);
            if prim.degree() != Some(0) {
                numerator.push(Factor { poly: prim, multiplicity: 1 });
            }
        }
        Ok(Self {
            moment: MomentType::H,
            n,
            pi_power: n as u32,
            constant,
            numerator,
            denominator: (1..=n as i64).map(|k| factor(&[-k * k, 0, 1], 1)).collect(),
        })
    }

    /// The closed form for a built-in kind, where one exists.
    pub fn for_kind(kind: &RootFunctionKind, moment: MomentType, n: usize) -> Result<Self> {
        let t = kind.pullback_t_exact();
        match (moment, kind, t) {
            (MomentType::H, RootFunctionKind::Mahler, _) => Self::h_mahler(n),
            (MomentType::H, RootFunctionKind::Reciprocal, _) => Self::h_reciprocal(n),
            (MomentType::H, RootFunctionKind::TReciprocal(_), Some(t)) => Self::h_treciprocal(n, &t),
            (MomentType::F, _, Some(t)) if t.is_zero() => Self::f_mahler(n),
            (MomentType::F, _, Some(t)) if t.is_one() => Self::f_reciprocal(n),
            _ => Err(Error::InvalidArgument(format!(
                "no closed form for {moment}_N with root function {}",
                kind.label()
            ))),
        }
    }

    fn product(factors: &[Factor]) -> IntPoly {
        factors
            .iter()
            .fold(IntPoly::one(), |acc, f| &acc * &f.poly.pow(f.multiplicity))
    }

    /// The rational part (everything except `pi^k`) in canonical form.
    pub fn rational(&self) -> RationalFunction {
        let body = RationalFunction::new(Self::product(&self.numerator), Self::product(&self.denominator))
            .expect("factors are nonzero");
        RationalFunction::constant(&self.constant) * body
    }

    pub fn expanded(&self) -> ScaledRationalFunction {
        ScaledRationalFunction::new(self.pi_power, self.rational())
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        self.expanded().eval_f64(s)
    }

    /// Exact value divided by `pi^k` at a rational point.
    pub fn eval_rational_part(&self, s: &BigRational) -> Result<BigRational> {
        self.rational().eval(s)
    }

    /// `lim_{s -> inf}`, divided by `pi^k`; `None` if the form grows.
    pub fn limit(&self) -> Option<BigRational> {
        self.rational().limit_at_infinity()
    }

    /// Distinct poles with their multiplicities, as roots of the factored
    /// denominator (each factor is `s - k` or `s^2 - k^2`).
    pub fn poles(&self) -> Vec<(i64, u32)> {
        integer_roots(&self.denominator)
    }
}

fn integer_roots(factors: &[Factor]) -> Vec<(i64, u32)> {
    let mut out: Vec<(i64, u32)> = Vec::new();
    for f in factors {
        let c = f.poly.coeffs();
        let roots: Vec<i64> = match c.len() {
            2 if (&c[0] % &c[1]).is_zero() => vec![i64::try_from(-(&c[0] / &c[1])).unwrap_or(0)],
            3 if c[1].is_zero() && (&c[0] % &c[2]).is_zero() => {
                let sq = i64::try_from(-(&c[0] / &c[2])).unwrap_or(-1);
                let r = (sq as f64).sqrt().round() as i64;
                if r * r == sq && r > 0 {
                    vec![-r, r]
                } else {
                    vec![]
                }
            }
            _ => vec![],
        };
        for r in roots {
            match out.iter_mut().find(|(x, _)| *x == r) {
                Some(e) => e.1 += f.multiplicity,
                None => out.push((r, f.multiplicity)),
            }
        }
    }
    out.sort();
    out
}

impl fmt::Display for MomentClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        if self.pi_power > 0 {
            write!(f, " * pi^{}", self.pi_power)?;
        }
        let show = |fs: &[Factor]| {
            fs.iter()
                .map(|x| {
                    if x.multiplicity == 1 {
                        format!("({})", x.poly)
                    } else {
                        format!("({})^{}", x.poly, x.multiplicity)
                    }
                })
                .collect::<Vec<_>>()
                .join(" * ")
        };
        let den = show(&self.denominator);
        if self.denominator.len() > 1 {
            write!(f, " * {} / ({den})", show(&self.numerator))
        } else {
            write!(f, " * {} / {den}", show(&self.numerator))
        }
    }
}

/// A Laurent polynomial `sum c_k xi^k` with rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPolynomial {
    /// `(exponent, coefficient)` sorted by exponent, zero terms omitted.
    pub terms: Vec<(i64, BigRational)>,
}

impl LaurentPolynomial {
    pub fn eval_f64(&self, xi: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(k, c)| c.to_f64().unwrap_or(f64::NAN) * xi.powi(*k as i32))
            .sum()
    }

    /// `integral_1^inf f(xi) xi^(-s) dxi / xi = sum c_k / (s - k)`.
    pub fn mellin(&self) -> RationalFunction {
        self.terms.iter().fold(RationalFunction::zero(), |acc, (k, c)| {
            let term = RationalFunction::new(IntPoly::one(), IntPoly::from_i64s(&[-k, 1])).expect("monic");
            acc + RationalFunction::constant(c) * term
        })
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("({c})*xi^{k}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The distribution function `f_N(xi)` (valid for `xi >= 1`) whose Mellin
/// transform is `F_N(s) / s`, read off from the partial fractions.
pub fn distribution_from_moment(form: &MomentClosedForm) -> Result<LaurentPolynomial> {
    if form.moment != MomentType::F || form.pi_power != 0 {
        return Err(Error::InvalidArgument("expected a real-coefficient moment closed form".into()));
    }
    let over_s = form
        .rational()
        .checked_div(&RationalFunction::var())?;
    let pf = partial_fractions(&over_s)?;
    if pf.polynomial.iter().any(|c| !c.is_zero()) {
        return Err(Error::InvalidArgument("F(s)/s has a polynomial part".into()));
    }
    let mut terms: Vec<(i64, BigRational)> = pf.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_by_key(|(k, _)| *k);
    Ok(LaurentPolynomial { terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn constants() {
        assert_eq!(mahler_constant(1), q(2, 1));
        assert_eq!(mahler_constant(3), q(16, 3));
        assert_eq!(reciprocal_constant(2), q(32, 3));
        assert_eq!(reciprocal_constant(3), q(1024, 45));
    }

    #[test]
    fn mahler_forms() {
        let f1 = MomentClosedForm::f_mahler(1).unwrap();
        assert_eq!(f1.rational().to_string(), "(2*s)/(s - 1)");
        let f2 = MomentClosedForm::f_mahler(2).unwrap();
        assert_eq!(f2.eval_rational_part(&q(3, 1)).unwrap(), q(12, 1));
        let f3 = MomentClosedForm::f_mahler(3).unwrap();
        assert_eq!(f3.eval_rational_part(&q(5, 1)).unwrap(), q(16, 3) * q(25, 8));
        let h2 = MomentClosedForm::h_mahler(2).unwrap();
        assert_eq!(h2.eval_rational_part(&q(3, 1)).unwrap(), q(9, 4));
        assert_eq!(h2.limit(), Some(q(1, 2)));
        assert_eq!(f3.limit(), Some(q(16, 3)));
    }

    #[test]
    fn reciprocal_forms() {
        let f1 = MomentClosedForm::f_reciprocal(1).unwrap();
        assert_eq!(f1.eval_rational_part(&q(2, 1)).unwrap(), q(16, 3));
        let f3 = MomentClosedForm::f_reciprocal(3).unwrap();
        assert_eq!(f3.eval_rational_part(&q(4, 1)).unwrap(), q(262144, 4725));
        assert_eq!(f3.poles(), vec![(-3, 1), (-1, 1), (1, 1), (3, 1)]);
        let f4 = MomentClosedForm::f_reciprocal(4).unwrap();
        assert_eq!(f4.rational(), f4.rational().reflect());
        assert_eq!(f4.limit(), Some(reciprocal_constant(4)));
        let h1 = MomentClosedForm::h_reciprocal(1).unwrap();
        assert_eq!(h1.rational().to_string(), "(2*s)/(s^2 - 1)");
    }

    #[test]
    fn treciprocal_endpoints() {
        for n in 1..=6 {
            let zero = MomentClosedForm::h_treciprocal(n, &q(0, 1)).unwrap();
            assert_eq!(zero.rational(), MomentClosedForm::h_mahler(n).unwrap().rational());
            let one = MomentClosedForm::h_treciprocal(n, &q(1, 1)).unwrap();
            assert_eq!(one.rational(), MomentClosedForm::h_reciprocal(n).unwrap().rational());
        }
        let half = MomentClosedForm::h_treciprocal(1, &q(1, 2)).unwrap();
        assert_eq!(half.eval_rational_part(&q(2, 1)).unwrap(), q(11, 6));
    }

    #[test]
    fn distributions() {
        let f1 = distribution_from_moment(&MomentClosedForm::f_mahler(1).unwrap()).unwrap();
        assert_eq!(f1.terms, vec![(1, q(2, 1))]);
        let f2 = distribution_from_moment(&MomentClosedForm::f_mahler(2).unwrap()).unwrap();
        assert_eq!(f2.terms, vec![(2, q(4, 1))]);
        let r1 = distribution_from_moment(&MomentClosedForm::f_reciprocal(1).unwrap()).unwrap();
        assert_eq!(r1.terms, vec![(-1, q(2, 1)), (1, q(2, 1))]);
        assert!((r1.eval_f64(2.0) - 5.0).abs() < 1e-12);
        for n in 1..=5 {
            let form = MomentClosedForm::f_reciprocal(n).unwrap();
            let d = distribution_from_moment(&form).unwrap();
            assert_eq!(d.mellin(), form.rational() / RationalFunction::var());
        }
    }
}
