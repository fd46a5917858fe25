//! Exact skew and Hermitian monomial entries for the Mahler measure and the
//! reciprocal measure, as rational functions of `s`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::family::{binomial, MonicFamily};
use crate::distfun::RootFunctionKind;
use crate::error::{Error, Result};
use crate::exactalg::{IntPoly, Matrix, RationalFunction, SkewMatrix};

/// `C(M, m) - C(M, m - 1)`, with binomials outside `0..=M` taken as zero.
pub fn bracket(upper: u32, m: i64) -> BigInt {
    let c = |k: i64| {
        if k < 0 {
            BigInt::zero()
        } else {
            binomial(u64::from(upper), k as u64)
        }
    };
    c(m) - c(m - 1)
}

/// Outcome of checking the four binomial identities for a pair `(j, k)`.
/// Items 3 and 4 are `None` when their parity preconditions do not hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BracketIdentities {
    pub laurent_expansion: bool,
    pub power_of_two: bool,
    pub odd_reciprocal_sum: Option<bool>,
    pub odd_even_double_sum: Option<bool>,
}

impl BracketIdentities {
    pub fn all_hold(&self) -> bool {
        self.laurent_expansion
            && self.power_of_two
            && self.odd_reciprocal_sum.unwrap_or(true)
            && self.odd_even_double_sum.unwrap_or(true)
    }
}

fn ratio(n: BigInt, d: i64) -> BigRational {
    BigRational::new(n, BigInt::from(d))
}

/// Verifies the bracket identities for positive `j`, `k` by exact expansion:
///
/// 1. `(x + 1/x)^(j-1) (x - 1/x) = sum_m [j-1, m] x^(j-2m)`, `m = 0..=j`;
/// 2. `2^k = sum_n [k-1, n] (k - 2n)`, `n = 0..=k`;
/// 3. for odd `j`: `2^j / j = sum_m [j-1, m] / (j - 2m)`;
/// 4. for odd `j`, even `k`:
///    `2^(j+k) / (j (j+k)) = sum_{m,n} [j-1, m] [k-1, n] / ((j-2m)(j-2m+k-2n))`.
pub fn bracket_identities(j: u32, k: u32) -> Result<BracketIdentities> {
    if j == 0 || k == 0 {
        return Err(Error::InvalidArgument("j and k must be positive".into()));
    }
    let (ji, ki) = (i64::from(j), i64::from(k));

    // Coefficients indexed by (exponent + j).
    let width = 2 * j as usize + 1;
    let mut lhs = vec![BigInt::zero(); width];
    for i in 0..j {
        let e = ji - 1 - 2 * i64::from(i) + ji;
        let c = binomial(u64::from(j - 1), u64::from(i));
        lhs[(e + 1) as usize] += &c;
        lhs[(e - 1) as usize] -= &c;
    }
    let mut rhs = vec![BigInt::zero(); width];
    for m in 0..=ji {
        rhs[(ji - 2 * m + ji) as usize] += bracket(j - 1, m);
    }
    let laurent_expansion = lhs == rhs;

    let power_of_two = (0..=ki)
        .map(|n| bracket(k - 1, n) * (ki - 2 * n))
        .sum::<BigInt>()
        == BigInt::from(2).pow(k);

    let odd_reciprocal_sum = (j % 2 == 1).then(|| {
        let sum: BigRational = (0..=ji).map(|m| ratio(bracket(j - 1, m), ji - 2 * m)).sum();
        sum == ratio(BigInt::from(2).pow(j), ji)
    });

    let odd_even_double_sum = (j % 2 == 1 && k % 2 == 0).then(|| {
        let mut sum = BigRational::zero();
        for m in 0..=ji {
            let bm = bracket(j - 1, m);
            for n in 0..=ki {
                let d = (ji - 2 * m) * (ji - 2 * m + ki - 2 * n);
                sum += ratio(&bm * bracket(k - 1, n), d);
            }
        }
        sum == ratio(BigInt::from(2).pow(j + k), ji * (ji + ki))
    });

    Ok(BracketIdentities {
        laurent_expansion,
        power_of_two,
        odd_reciprocal_sum,
        odd_even_double_sum,
    })
}

/// The root functions with exact bilinear forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ExactKind {
    Mahler,
    Reciprocal,
}

impl ExactKind {
    pub(crate) fn of(kind: &RootFunctionKind) -> Result<Self> {
        match kind {
            RootFunctionKind::Mahler => Ok(Self::Mahler),
            RootFunctionKind::Reciprocal => Ok(Self::Reciprocal),
            RootFunctionKind::TReciprocal(t) if t.exact().is_zero() => Ok(Self::Mahler),
            RootFunctionKind::TReciprocal(t) if t.exact().is_one() => Ok(Self::Reciprocal),
            other => Err(Error::InvalidArgument(format!(
                "no exact forms for root function {}",
                other.label()
            ))),
        }
    }
}

fn poly(coeffs: &[i64]) -> IntPoly {
    IntPoly::from_i64s(coeffs)
}

fn scaled(c: BigRational, f: RationalFunction) -> RationalFunction {
    RationalFunction::constant(&c) * f
}

/// `s / (s - a)`
fn simple_pole(a: i64) -> RationalFunction {
    RationalFunction::new(poly(&[0, 1]), poly(&[-a, 1])).expect("monic denominator")
}

/// `s^2 / (s^2 - a^2)`
fn even_pole(a: i64) -> RationalFunction {
    RationalFunction::new(poly(&[0, 0, 1]), poly(&[-a * a, 0, 1])).expect("monic denominator")
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn qi(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Combined skew form of `gamma^a` and `gamma^b` (sum of the real and complex parts).
pub(crate) fn skew_monomial(kind: ExactKind, a: usize, b: usize) -> RationalFunction {
    if a % 2 == b % 2 {
        return RationalFunction::zero();
    }
    if a % 2 == 1 {
        return -skew_monomial(kind, b, a);
    }
    let (a, b) = (a as i64, b as i64);
    match kind {
        ExactKind::Mahler => {
            // 4 / ((a+1)(a-b)) * s / (b+1-s)
            scaled(q(-4, (a + 1) * (a - b)), simple_pole(b + 1))
        }
        ExactKind::Reciprocal => {
            let (jp, kp) = (a / 2 + 1, (b + 1) / 2);
            let mut acc = RationalFunction::zero();
            for n in 1..=kp {
                let mut coeff = BigRational::zero();
                for m in 1..=jp {
                    let (even, odd) = (2 * n, 2 * m - 1);
                    coeff += qi(bracket(b as u32, kp - n) * bracket(a as u32, jp - m))
                        * q(16 * even, odd * (even * even - odd * odd));
                }
                if !coeff.is_zero() {
                    acc = acc + scaled(coeff, even_pole(2 * n));
                }
            }
            acc
        }
    }
}

/// `integral over R of phi(x)^(-s) x^a dx`.
pub(crate) fn border_monomial(kind: ExactKind, a: usize) -> RationalFunction {
    if a % 2 == 1 {
        return RationalFunction::zero();
    }
    let a = a as i64;
    match kind {
        ExactKind::Mahler => scaled(q(2, a + 1), simple_pole(a + 1)),
        ExactKind::Reciprocal => {
            let jp = a / 2 + 1;
            let mut acc = RationalFunction::zero();
            for m in 1..=jp {
                let c = qi(bracket(a as u32, jp - m) * 4) / q(2 * m - 1, 1);
                if !c.is_zero() {
                    acc = acc + scaled(c, even_pole(2 * m - 1));
                }
            }
            acc
        }
    }
}

/// Hermitian form of `gamma^a` and `gamma^b`, divided by `pi`.
pub(crate) fn gram_monomial(kind: ExactKind, a: usize, b: usize) -> RationalFunction {
    match kind {
        ExactKind::Mahler => {
            if a != b {
                return RationalFunction::zero();
            }
            let a = a as i64;
            scaled(q(1, a + 1), simple_pole(a + 1))
        }
        ExactKind::Reciprocal => {
            if a % 2 != b % 2 {
                return RationalFunction::zero();
            }
            // gamma^a (1 - x^-2) = sum_i [a, i] x^(a - 2i); exterior radial
            // integral of the x^p x^p-bar term contributes 1 / (s - p - 1).
            let mut acc = RationalFunction::zero();
            for i in 0..=(a as i64 + 1) {
                let p = a as i64 - 2 * i;
                let i_b = (b as i64 - p) / 2;
                if i_b < 0 || i_b > b as i64 + 1 {
                    continue;
                }
                let c = bracket(a as u32, i) * bracket(b as u32, i_b);
                if c.is_zero() {
                    continue;
                }
                let term = RationalFunction::new(IntPoly::constant(c), poly(&[-(p + 1), 1]))
                    .expect("monic denominator");
                acc = acc + term;
            }
            acc
        }
    }
}

fn basis_matrix(family: &MonicFamily) -> Result<Matrix<RationalFunction>> {
    let rows = family.exact_basis()?;
    let n = rows.len();
    Ok(Matrix::from_fn(n, n, |i, j| RationalFunction::constant(&rows[i][j])))
}

/// Skew matrix of the family with the border row and column appended when
/// `N` is odd; size `2J` with `J` the integer part of `(N+1)/2`.
pub fn skew_matrix_exact(kind: &RootFunctionKind, family: &MonicFamily) -> Result<SkewMatrix<RationalFunction>> {
    let ek = ExactKind::of(kind)?;
    let n = family.len();
    let basis = basis_matrix(family)?;
    let mono = Matrix::from_fn(n, n, |a, b| skew_monomial(ek, a, b));
    let full = basis.matmul(&mono)?.matmul(&basis.transpose())?;
    let border_mono = Matrix::from_fn(n, 1, |a, _| border_monomial(ek, a));
    let border = basis.matmul(&border_mono)?;
    let size = n + n % 2;
    Ok(SkewMatrix::from_upper(size, |i, j| {
        if j < n {
            full[(i, j)].clone()
        } else {
            border[(i, 0)].clone()
        }
    }))
}

/// Hermitian Gram matrix of the family divided by `pi` (every entry is `pi`
/// times a rational function of `s`).
pub fn gram_matrix_exact(kind: &RootFunctionKind, family: &MonicFamily) -> Result<Matrix<RationalFunction>> {
    let ek = ExactKind::of(kind)?;
    let n = family.len();
    let basis = basis_matrix(family)?;
    let mono = Matrix::from_fn(n, n, |a, b| gram_monomial(ek, a, b));
    basis.matmul(&mono)?.matmul(&basis.transpose())
}

/// The `J x J` matrix of combined skew forms `<P_{2j-1}, P_{2k}>` for the
/// Mahler measure and monomials, with the border integrals in the last
/// column when `N` is odd.
pub fn mahler_a_matrix_exact(n: usize) -> Result<Matrix<RationalFunction>> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let big_j = n.div_ceil(2);
    Ok(Matrix::from_fn(big_j, big_j, |j0, k0| {
        let (j, k) = (j0 as i64 + 1, k0 as i64 + 1);
        if 2 * k < n as i64 + 1 {
            scaled(q(4, (2 * k - 2 * j + 1) * (2 * j - 1)), simple_pole(2 * k))
        } else {
            scaled(q(2, 2 * j - 1), simple_pole(2 * j - 1))
        }
    }))
}

/// The reciprocal-measure analogue of [`mahler_a_matrix_exact`], together
/// with its factorization `A = C B D^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocalAFactors {
    pub a: Matrix<RationalFunction>,
    /// Cauchy-like factor; its last column depends on `s` when `N` is odd.
    pub b: Matrix<RationalFunction>,
    /// Lower triangular, `C[j, m] = [2j-2, j-m]`.
    pub c: Matrix<RationalFunction>,
    /// Lower triangular, `D[k, n] = [2k-1, k-n] 16 s^2 / (s^2 - 4n^2)` with
    /// the border row `2 s^2 / J` on the diagonal when `N` is odd.
    pub d: Matrix<RationalFunction>,
}

impl ReciprocalAFactors {
    /// `C B D^T`
    pub fn product(&self) -> Result<Matrix<RationalFunction>> {
        self.c.matmul(&self.b)?.matmul(&self.d.transpose())
    }
}

pub fn rho_a_matrix_exact(n: usize) -> Result<ReciprocalAFactors> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let big_j = n.div_ceil(2);
    let is_border = |k: i64| 2 * k == n as i64 + 1;
    let b = Matrix::from_fn(big_j, big_j, |m0, n0| {
        let (m, nn) = (m0 as i64 + 1, n0 as i64 + 1);
        let (even, odd) = (2 * nn, 2 * m - 1);
        if is_border(nn) {
            let den = poly(&[-odd * odd, 0, 1]);
            let f = RationalFunction::new(IntPoly::constant(even.into()), den).expect("monic");
            scaled(q(1, odd), f)
        } else {
            RationalFunction::constant(&q(even, odd * (even * even - odd * odd)))
        }
    });
    let c = Matrix::from_fn(big_j, big_j, |j0, m0| {
        let (j, m) = (j0 as i64 + 1, m0 as i64 + 1);
        RationalFunction::constant(&qi(bracket((2 * j - 2) as u32, j - m)))
    });
    let d = Matrix::from_fn(big_j, big_j, |k0, n0| {
        let (k, nn) = (k0 as i64 + 1, n0 as i64 + 1);
        if is_border(k) {
            if k == nn {
                RationalFunction::new(poly(&[0, 0, 2]), poly(&[k])).expect("nonzero")
            } else {
                RationalFunction::zero()
            }
        } else {
            let br = bracket((2 * k - 1) as u32, k - nn);
            if br.is_zero() {
                RationalFunction::zero()
            } else {
                scaled(qi(br * 16), even_pole(2 * nn))
            }
        }
    });
    let a = Matrix::from_fn(big_j, big_j, |j0, k0| {
        let k = k0 as i64 + 1;
        if is_border(k) {
            border_monomial(ExactKind::Reciprocal, 2 * j0)
        } else {
            skew_monomial(ExactKind::Reciprocal, 2 * j0, 2 * k0 + 1)
        }
    });
    Ok(ReciprocalAFactors { a, b, c, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{determinant, pfaffian};

    fn at(f: &RationalFunction, s: i64) -> BigRational {
        f.eval(&BigRational::from_integer(s.into())).unwrap()
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(2, 1), BigInt::from(1));
        assert_eq!(bracket(0, 1), BigInt::from(-1));
        assert_eq!(bracket(2, 2), -bracket(2, 1));
        assert_eq!(bracket(3, -1), BigInt::zero());
    }

    #[test]
    fn bracket_identities_hold() {
        for j in 1..=9 {
            for k in 1..=8 {
                let r = bracket_identities(j, k).unwrap();
                assert!(r.all_hold(), "j={j} k={k}: {r:?}");
                assert_eq!(r.odd_even_double_sum.is_some(), j % 2 == 1 && k % 2 == 0);
            }
        }
    }

    #[test]
    fn mahler_a_small_cases() {
        let a2 = mahler_a_matrix_exact(2).unwrap();
        assert_eq!(a2[(0, 0)].to_string(), "(4*s)/(s - 2)");
        assert_eq!(at(&a2[(0, 0)], 3), q(12, 1));
        let a3 = mahler_a_matrix_exact(3).unwrap();
        assert_eq!(at(&a3[(0, 1)], 3), q(3, 1));
    }

    #[test]
    fn mahler_a_agrees_with_monomial_entries() {
        for n in 1..=6 {
            let a = mahler_a_matrix_exact(n).unwrap();
            let u = skew_matrix_exact(&RootFunctionKind::Mahler, &MonicFamily::monomials(n)).unwrap();
            for j in 0..a.rows() {
                for k in 0..a.cols() {
                    assert_eq!(a[(j, k)], u[(2 * j, 2 * k + 1)], "n={n} j={j} k={k}");
                }
            }
        }
    }

    #[test]
    fn rho_a_small_and_factorized() {
        let f = rho_a_matrix_exact(2).unwrap();
        assert_eq!(at(&f.a[(0, 0)], 3), q(96, 5));
        assert_eq!(f.a[(0, 0)].to_string(), "(32*s^2)/(3*s^2 - 12)");
        for n in 1..=7 {
            let f = rho_a_matrix_exact(n).unwrap();
            assert_eq!(f.product().unwrap(), f.a, "n={n}");
            for j in 0..f.c.rows() {
                for m in j + 1..f.c.cols() {
                    assert!(f.c[(j, m)].is_zero());
                    assert!(f.d[(j, m)].is_zero());
                }
            }
        }
        let f1 = rho_a_matrix_exact(1).unwrap();
        assert_eq!(at(&f1.a[(0, 0)], 2), q(16, 3));
    }

    #[test]
    fn pfaffian_equals_det_a() {
        for n in 1..=5 {
            for kind in [RootFunctionKind::Mahler, RootFunctionKind::Reciprocal] {
                let u = skew_matrix_exact(&kind, &MonicFamily::monomials(n)).unwrap();
                let a = match kind {
                    RootFunctionKind::Mahler => mahler_a_matrix_exact(n).unwrap(),
                    _ => rho_a_matrix_exact(n).unwrap().a,
                };
                let pf = pfaffian(&u).unwrap();
                let det = determinant(&a).unwrap();
                assert_eq!(pf, det, "n={n}");
            }
        }
    }

    #[test]
    fn family_change_preserves_pfaffian() {
        for kind in [RootFunctionKind::Mahler, RootFunctionKind::Reciprocal] {
            let mono = pfaffian(&skew_matrix_exact(&kind, &MonicFamily::monomials(5)).unwrap()).unwrap();
            let cheb = pfaffian(&skew_matrix_exact(&kind, &MonicFamily::chebyshev(5)).unwrap()).unwrap();
            let shift = pfaffian(&skew_matrix_exact(&kind, &MonicFamily::shifted(5, 1)).unwrap()).unwrap();
            assert_eq!(mono, cheb);
            assert_eq!(mono, shift);
        }
    }

    #[test]
    fn gram_entries() {
        let g = gram_matrix_exact(&RootFunctionKind::Mahler, &MonicFamily::monomials(2)).unwrap();
        assert_eq!(at(&g[(0, 0)], 3), q(3, 2));
        assert_eq!(at(&g[(1, 1)], 3), q(3, 2));
        assert!(g[(0, 1)].is_zero());
        let r = gram_matrix_exact(&RootFunctionKind::Reciprocal, &MonicFamily::monomials(1)).unwrap();
        assert_eq!(at(&r[(0, 0)], 2), q(4, 3));
        let g3 = gram_matrix_exact(&RootFunctionKind::Reciprocal, &MonicFamily::monomials(3)).unwrap();
        assert_eq!(g3, g3.transpose());
    }

    #[test]
    fn no_exact_forms_for_generic_t() {
        let kind = RootFunctionKind::t_reciprocal(1, 2).unwrap();
        assert!(skew_matrix_exact(&kind, &MonicFamily::monomials(2)).is_err());
    }
}
