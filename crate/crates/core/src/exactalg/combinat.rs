//! Combinatorial descriptions of the Pfaffian, used to cross-check
//! [`pfaffian`](super::linalg::pfaffian) and the identities built on it.

use std::collections::BTreeMap;

use num_rational::BigRational;

use super::linalg::{determinant, pfaffian, Field, Matrix, SkewMatrix};
use crate::error::{Error, Result};

/// A strictly increasing map `{1..K} -> {1..N}`, stored by its image (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncreasingMap {
    n: usize,
    image: Vec<usize>,
}

impl IncreasingMap {
    pub fn new(n: usize, image: Vec<usize>) -> Result<Self> {
        let increasing = image.windows(2).all(|w| w[0] < w[1]);
        let in_range = image.iter().all(|&v| (1..=n).contains(&v));
        if !increasing || !in_range {
            return Err(Error::InvalidArgument(format!(
                "{image:?} is not an increasing map into 1..={n}"
            )));
        }
        Ok(Self { n, image })
    }

    pub fn k(&self) -> usize {
        self.image.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// The increasing map onto the complementary set.
    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            image: (1..=self.n).filter(|v| !self.image.contains(v)).collect(),
        }
    }

    /// The permutation listing the image followed by the complement.
    pub fn induced_permutation(&self) -> Vec<usize> {
        let mut p = self.image.clone();
        p.extend(self.complement().image);
        p
    }

    pub fn sign(&self) -> i32 {
        permutation_sign(&self.induced_permutation())
    }
}

/// All increasing maps `{1..k} -> {1..n}` in lexicographic order.
pub fn increasing_maps(k: usize, n: usize) -> Vec<IncreasingMap> {
    fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<IncreasingMap>) {
        if cur.len() == k {
            out.push(IncreasingMap { n, image: cur.clone() });
            return;
        }
        for v in start..=n {
            if n - v + 1 < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, k, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, k, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Sign of a permutation given as a sequence of distinct values.
pub fn permutation_sign(p: &[usize]) -> i32 {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn signed<T: Field>(sign: i32, x: T) -> T {
    if sign < 0 {
        -x
    } else {
        x
    }
}

fn zero_based(map: &IncreasingMap) -> Vec<usize> {
    map.image.iter().map(|v| v - 1).collect()
}

/// `Pf(R + C)` expanded as a sum over even-sized index subsets:
/// `sum_u sgn(u) Pf(R on the complement of u) Pf(C on u)`.
pub fn pfaffian_sum_expansion<T: Field>(r: &SkewMatrix<T>, c: &SkewMatrix<T>) -> Result<T> {
    let n = r.size();
    if c.size() != n {
        return Err(Error::DimensionMismatch("summands differ in size".into()));
    }
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let mut total = T::zero();
    for m in 0..=n / 2 {
        for u in increasing_maps(2 * m, n) {
            let pr = pfaffian(&r.restrict(&zero_based(&u.complement())))?;
            let pc = pfaffian(&c.restrict(&zero_based(&u)))?;
            total = total + signed(u.sign(), pr * pc);
        }
    }
    Ok(total)
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    // Heap's algorithm.
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn pair_product<T: Field>(u: &SkewMatrix<T>, p: &[usize]) -> T {
    p.chunks(2)
        .fold(T::one(), |acc, pair| acc * u[(pair[0], pair[1])].clone())
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// The defining sum over the whole symmetric group, divided by `2^J J!`.
pub fn pfaffian_by_definition<T: Field>(u: &SkewMatrix<T>) -> Result<T> {
    let n = u.size();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let mut total = T::zero();
    for_each_permutation(n, |p| {
        total = total.clone() + signed(permutation_sign(p), pair_product(u, p));
    });
    let j = n / 2;
    Ok(total / T::from_i64((1i64 << j) * factorial(j)))
}

/// Sum over permutations with `p(2j-1) < p(2j)` for every pair, divided by `J!`.
pub fn pfaffian_restricted_permutations<T: Field>(u: &SkewMatrix<T>) -> Result<T> {
    let n = u.size();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let mut total = T::zero();
    for_each_permutation(n, |p| {
        if p.chunks(2).all(|pair| pair[0] < pair[1]) {
            total = total.clone() + signed(permutation_sign(p), pair_product(u, p));
        }
    });
    Ok(total / T::from_i64(factorial(n / 2)))
}

/// Wedge `e_{mask}` with `e_j ^ e_k` (`j < k`); returns the new mask and sign.
fn wedge_pair(mask: u32, j: usize, k: usize) -> Option<(u32, i32)> {
    let (bj, bk) = (1u32 << j, 1u32 << k);
    if mask & (bj | bk) != 0 {
        return None;
    }
    // Move e_j past every basis vector in the mask above j, then e_k likewise.
    let above_j = (mask >> (j + 1)).count_ones();
    let above_k = ((mask | bj) >> (k + 1)).count_ones();
    let sign = if (above_j + above_k) % 2 == 0 { 1 } else { -1 };
    Some((mask | bj | bk, sign))
}

/// Coefficient of `v_1 ^ .. ^ v_2J` in `omega^J / J!` with
/// `omega = sum_{j<k} U[j,k] v_j ^ v_k`, computed in a bitmask exterior algebra.
pub fn pfaffian_wedge<T: Field>(u: &SkewMatrix<T>) -> Result<T> {
    let n = u.size();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    if n > 30 {
        return Err(Error::InvalidArgument("wedge formulation limited to size 30".into()));
    }
    let mut form: BTreeMap<u32, T> = BTreeMap::new();
    form.insert(0, T::one());
    for _ in 0..n / 2 {
        let mut next: BTreeMap<u32, T> = BTreeMap::new();
        for (&mask, coeff) in &form {
            for j in 0..n {
                for k in j + 1..n {
                    let entry = &u[(j, k)];
                    if entry.is_zero() {
                        continue;
                    }
                    if let Some((m, sign)) = wedge_pair(mask, j, k) {
                        let term = signed(sign, coeff.clone() * entry.clone());
                        let slot = next.entry(m).or_insert_with(T::zero);
                        *slot = slot.clone() + term;
                    }
                }
            }
        }
        form = next;
    }
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let top = form.remove(&full).unwrap_or_else(T::zero);
    Ok(top / T::from_i64(factorial(n / 2)))
}

/// Pfaffian of a matrix whose entries vanish between indices of equal
/// parity, computed as the determinant of its odd-row/even-column block.
pub fn checkerboard_pfaffian<T: Field>(u: &SkewMatrix<T>) -> Result<T> {
    let n = u.size();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    for i in 0..n {
        for j in 0..n {
            if i % 2 == j % 2 && !u[(i, j)].is_zero() {
                return Err(Error::PatternViolation(i, j));
            }
        }
    }
    let half = n / 2;
    determinant(&Matrix::from_fn(half, half, |j, k| u[(2 * j, 2 * k + 1)].clone()))
}

/// The `2K x 2K` sign matrix for distinct reals `alpha` (`K = floor((L+1)/2)`):
/// `sgn(alpha_k - alpha_j)` inside, bordered by `sgn(k - j)` when `L` is odd.
pub fn sign_matrix(alpha: &[f64]) -> SkewMatrix<BigRational> {
    let l = alpha.len();
    let size = 2 * l.div_ceil(2);
    SkewMatrix::from_upper(size, |j, k| {
        let v = if j < l && k < l {
            sign_of(alpha[k] - alpha[j])
        } else {
            sign_of(k as f64 - j as f64)
        };
        BigRational::from_integer(v.into())
    })
}

fn sign_of(x: f64) -> i64 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// `prod_{j<k} sgn(alpha_k - alpha_j)`
pub fn sign_product(alpha: &[f64]) -> i64 {
    (0..alpha.len())
        .flat_map(|j| (j + 1..alpha.len()).map(move |k| (j, k)))
        .map(|(j, k)| sign_of(alpha[k] - alpha[j]))
        .product()
}

/// Vandermonde matrix `V[j, k] = x_k^j` and the product `prod_{m<n} (x_n - x_m)`.
pub fn vandermonde<T: Field>(nodes: &[T]) -> (Matrix<T>, T) {
    let n = nodes.len();
    let v = Matrix::from_fn(n, n, |j, k| {
        (0..j).fold(T::one(), |acc, _| acc * nodes[k].clone())
    });
    let mut prod = T::one();
    for m in 0..n {
        for k in m + 1..n {
            prod = prod * (nodes[k].clone() - nodes[m].clone());
        }
    }
    (v, prod)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn increasing_map_examples() {
        let empty = increasing_maps(0, 3);
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].sign(), 1);
        let id = increasing_maps(2, 2);
        assert_eq!(id.len(), 1);
        assert_eq!(id[0].sign(), 1);
        let u = IncreasingMap::new(4, vec![2, 3]).unwrap();
        assert_eq!(u.induced_permutation(), vec![2, 3, 1, 4]);
        assert_eq!(u.sign(), 1);
        assert_eq!(increasing_maps(2, 5).len(), 10);
        assert!(IncreasingMap::new(4, vec![3, 2]).is_err());
    }

    #[test]
    fn expansions_agree_on_fixed_matrix() {
        let vals = [1, 2, 3, 4, 5, 6];
        let mut it = vals.iter();
        let u = SkewMatrix::from_upper(4, |_, _| q(*it.next().unwrap()));
        assert_eq!(pfaffian_by_definition(&u).unwrap(), q(8));
        assert_eq!(pfaffian_restricted_permutations(&u).unwrap(), q(8));
        assert_eq!(pfaffian_wedge(&u).unwrap(), q(8));
    }

    #[test]
    fn sum_expansion_trivial_cases() {
        let mut seed = 3i64;
        let r = SkewMatrix::from_upper(4, |i, j| {
            seed = (seed * 7 + 3) % 13;
            q(seed - 6 + (i * j) as i64)
        });
        let zero = SkewMatrix::from_upper(4, |_, _| q(0));
        assert_eq!(pfaffian_sum_expansion(&r, &zero).unwrap(), pfaffian(&r).unwrap());
        assert_eq!(pfaffian_sum_expansion(&zero, &r).unwrap(), pfaffian(&r).unwrap());
    }

    #[test]
    fn checkerboard_examples() {
        let one = SkewMatrix::from_upper(2, |_, _| q(7));
        assert_eq!(checkerboard_pfaffian(&one).unwrap(), q(7));
        let u = SkewMatrix::from_upper(4, |i, j| if (i + j) % 2 == 1 { q((i + 2 * j) as i64) } else { q(0) });
        assert_eq!(checkerboard_pfaffian(&u).unwrap(), pfaffian(&u).unwrap());
        let bad = SkewMatrix::from_upper(4, |i, j| if (i, j) == (1, 3) { q(1) } else { q(0) });
        assert_eq!(checkerboard_pfaffian(&bad), Err(Error::PatternViolation(1, 3)));
    }

    #[test]
    fn sign_identity_odd_and_even() {
        for alpha in [vec![0.3, -1.0, 2.0], vec![5.0, 1.0, 3.0, 2.0], vec![1.0]] {
            let pf = pfaffian(&sign_matrix(&alpha)).unwrap();
            assert_eq!(pf, q(sign_product(&alpha)));
        }
    }

    #[test]
    fn vandermonde_small() {
        let (v, prod) = vandermonde(&[q(2), q(-1), q(5)]);
        assert_eq!(determinant(&v).unwrap(), prod);
        assert_eq!(prod, q((-1 - 2) * (5 - 2) * (5 + 1)));
    }
}
