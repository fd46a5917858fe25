//! Dense matrices over a generic field, determinants and Pfaffians.

use std::fmt::Debug;
use std::ops::{Div, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ratfun::RationalFunction;
use crate::error::{Error, Result};

/// Scalars the linear algebra runs over.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Size used for pivot selection; `None` marks an exact field, where any
    /// nonzero pivot will do.
    fn magnitude(&self) -> Option<f64>;

    fn from_i64(n: i64) -> Self {
        // Binary expansion keeps this cheap for every field.
        let mut acc = Self::zero();
        let mut base = Self::one();
        let mut m = n.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc + base.clone();
            }
            base = base.clone() + base;
            m >>= 1;
        }
        if n < 0 {
            -acc
        } else {
            acc
        }
    }
}

impl Field for f64 {
    fn magnitude(&self) -> Option<f64> {
        Some(self.abs())
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

impl Field for Complex64 {
    fn magnitude(&self) -> Option<f64> {
        Some(self.norm())
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl Field for BigRational {
    fn magnitude(&self) -> Option<f64> {
        None
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

impl Field for RationalFunction {
    fn magnitude(&self) -> Option<f64> {
        None
    }
    fn from_i64(n: i64) -> Self {
        RationalFunction::from_int(n)
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).map(<[T]>::to_vec).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self[(i, k)].clone() * rhs[(k, j)].clone()
            })
        }))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// An antisymmetric matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix<T>(Matrix<T>);

impl<T: Field> SkewMatrix<T> {
    /// Validates antisymmetry exactly.
    pub fn new(m: Matrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("skew matrix must be square".into()));
        }
        for i in 0..m.rows {
            for j in i..m.rows {
                if m[(i, j)] != -m[(j, i)].clone() {
                    return Err(Error::NotAntisymmetric(i, j));
                }
            }
        }
        Ok(Self(m))
    }

    /// Build from the strict upper triangle, `f(i, j)` for `i < j`.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                m[(j, i)] = -v.clone();
                m[(i, j)] = v;
            }
        }
        Self(m)
    }

    pub fn size(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    /// Principal submatrix on the given indices (kept antisymmetric).
    pub fn restrict(&self, idx: &[usize]) -> Self {
        Self(self.0.select(idx, idx))
    }

    /// `P^T U P` for the permutation matrix sending basis vector `perm[k]` to `k`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        self.restrict(perm)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch("skew matrices differ in size".into()));
        }
        Ok(Self(Matrix::from_fn(self.size(), self.size(), |i, j| {
            self.0[(i, j)].clone() + other.0[(i, j)].clone()
        })))
    }
}

impl<T> Index<(usize, usize)> for SkewMatrix<T> {
    type Output = T;
    fn index(&self, idx: (usize, usize)) -> &T {
        &self.0[idx]
    }
}

fn is_exact<T: Field>(m: &Matrix<T>) -> bool {
    m.data.iter().all(|x| x.magnitude().is_none())
}

/// Determinant: fraction-free Bareiss elimination over exact fields,
/// partial pivoting over floating fields.
pub fn determinant<T: Field>(m: &Matrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(T::one());
    }
    let mut a = m.clone();
    if is_exact(&a) {
        bareiss(&mut a)
    } else {
        Ok(lu_determinant(&mut a))
    }
}

fn bareiss<T: Field>(a: &mut Matrix<T>) -> Result<T> {
    let n = a.rows;
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Ok(T::zero());
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a[(i, j)].clone() * a[(k, k)].clone()
                    - a[(i, k)].clone() * a[(k, j)].clone())
                    / prev.clone();
                a[(i, j)] = v;
            }
            a[(i, k)] = T::zero();
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * a[(n - 1, n - 1)].clone())
}

fn lu_determinant<T: Field>(a: &mut Matrix<T>) -> T {
    let n = a.rows;
    let mut det = T::one();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| {
                let mx = a[(x, k)].magnitude().unwrap_or(0.0);
                let my = a[(y, k)].magnitude().unwrap_or(0.0);
                mx.total_cmp(&my)
            })
            .expect("nonempty range");
        if a[(p, k)].is_zero() {
            return T::zero();
        }
        if p != k {
            a.swap_rows(k, p);
            det = -det;
        }
        let pivot = a[(k, k)].clone();
        det = det * pivot.clone();
        for i in k + 1..n {
            let factor = a[(i, k)].clone() / pivot.clone();
            if factor.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let v = a[(i, j)].clone() - factor.clone() * a[(k, j)].clone();
                a[(i, j)] = v;
            }
        }
    }
    det
}

/// Largest size for which exact Pfaffians use the matching expansion.
const MATCHING_EXPANSION_MAX: usize = 8;

/// Pfaffian of an antisymmetric matrix.
pub fn pfaffian<T: Field>(m: &SkewMatrix<T>) -> Result<T> {
    let n = m.size();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    if n == 0 {
        return Ok(T::one());
    }
    if is_exact(&m.0) && n <= MATCHING_EXPANSION_MAX {
        let idx: Vec<usize> = (0..n).collect();
        return Ok(matching_expansion(&m.0, &idx));
    }
    Ok(skew_elimination(m.0.clone()))
}

/// Pfaffian of a plain matrix after checking antisymmetry.
pub fn pfaffian_of<T: Field>(m: &Matrix<T>) -> Result<T> {
    pfaffian(&SkewMatrix::new(m.clone())?)
}

/// Expansion along the first remaining row:
/// `Pf = sum_j (-1)^(j+1) a[0, j] Pf(A without rows/cols 0, j)`.
fn matching_expansion<T: Field>(a: &Matrix<T>, idx: &[usize]) -> T {
    if idx.is_empty() {
        return T::one();
    }
    let first = idx[0];
    let mut total = T::zero();
    for pos in 1..idx.len() {
        let entry = &a[(first, idx[pos])];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..]
            .iter()
            .enumerate()
            .filter(|&(k, _)| k + 1 != pos)
            .map(|(_, &v)| v)
            .collect();
        let term = entry.clone() * matching_expansion(a, &rest);
        total = if pos % 2 == 1 { total + term } else { total - term };
    }
    total
}

/// Congruence elimination that zeroes row `k` beyond column `k + 1`, two
/// rows at a time; pivoting swaps index pairs and flips the sign.
fn skew_elimination<T: Field>(mut a: Matrix<T>) -> T {
    let n = a.rows;
    let mut pf = T::one();
    let mut k = 0;
    while k < n {
        // Pivot search in row k.
        let p = match a[(k, k + 1)].magnitude() {
            Some(_) => (k + 1..n)
                .max_by(|&x, &y| {
                    a[(k, x)]
                        .magnitude()
                        .unwrap_or(0.0)
                        .total_cmp(&a[(k, y)].magnitude().unwrap_or(0.0))
                })
                .expect("nonempty range"),
            None => (k + 1..n).find(|&j| !a[(k, j)].is_zero()).unwrap_or(k + 1),
        };
        if a[(k, p)].is_zero() {
            return T::zero();
        }
        if p != k + 1 {
            a.swap_rows(k + 1, p);
            a.swap_cols(k + 1, p);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)].clone();
        pf = pf * pivot.clone();
        let taus: Vec<T> = (k + 2..n).map(|i| a[(k, i)].clone() / pivot.clone()).collect();
        for i in k + 2..n {
            for j in k + 2..n {
                if i == j {
                    continue;
                }
                let ti = &taus[i - k - 2];
                let tj = &taus[j - k - 2];
                let v = a[(i, j)].clone()
                    - tj.clone() * a[(i, k + 1)].clone()
                    - ti.clone() * a[(k + 1, j)].clone();
                a[(i, j)] = v;
            }
        }
        k += 2;
    }
    pf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&Matrix::<BigRational>::identity(3)).unwrap(), q(1));
        assert_eq!(determinant(&qm(&[&[3, 5], &[7, 11]])).unwrap(), q(3 * 11 - 5 * 7));
        // Cauchy matrix 1/(2k - 2j + 1), J = 2
        let cauchy = Matrix::from_fn(2, 2, |j, k| {
            BigRational::new(1.into(), (2 * k as i64 - 2 * j as i64 + 1).into())
        });
        assert_eq!(determinant(&cauchy).unwrap(), BigRational::new(4.into(), 3.into()));
    }

    #[test]
    fn determinant_needs_pivoting() {
        let m = qm(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(determinant(&m).unwrap(), q(-2));
        let f = m.map(|x| num_traits::ToPrimitive::to_f64(x).unwrap());
        assert!((determinant(&f).unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn pfaffian_examples() {
        let two = SkewMatrix::from_upper(2, |_, _| q(5));
        assert_eq!(pfaffian(&two).unwrap(), q(5));
        let vals = [1, 2, 3, 4, 5, 6];
        let mut it = vals.iter();
        let four = SkewMatrix::from_upper(4, |_, _| q(*it.next().unwrap()));
        assert_eq!(pfaffian(&four).unwrap(), q(8));
        assert_eq!(determinant(four.matrix()).unwrap(), q(64));
        let float = SkewMatrix::from_upper(4, |i, j| [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0][i + j + (i > 0) as usize]);
        let exact = SkewMatrix::from_upper(4, |i, j| q([0, 1, 2, 3, 4, 5, 6][i + j + (i > 0) as usize]));
        let pe: f64 = num_traits::ToPrimitive::to_f64(&pfaffian(&exact).unwrap()).unwrap();
        assert!((pfaffian(&float).unwrap() - pe).abs() < 1e-12);
    }

    #[test]
    fn pfaffian_errors() {
        let odd = Matrix::<BigRational>::zeros(3, 3);
        assert_eq!(pfaffian_of(&odd), Err(Error::OddSize(3)));
        let bad = qm(&[&[0, 1], &[1, 0]]);
        assert_eq!(pfaffian_of(&bad), Err(Error::NotAntisymmetric(0, 1)));
    }

    #[test]
    fn elimination_matches_expansion_on_large_exact() {
        let mut seed = 17u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 11) as i64 - 5
        };
        let m = SkewMatrix::from_upper(10, |_, _| q(next()));
        let pf = pfaffian(&m).unwrap();
        let idx: Vec<usize> = (0..10).collect();
        assert_eq!(pf, matching_expansion(m.matrix(), &idx));
        assert_eq!(pf.clone() * pf, determinant(m.matrix()).unwrap());
    }
}
