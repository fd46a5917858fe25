//! Counting reciprocal integer polynomials of bounded Mahler measure, the
//! volume constants that govern the count, and Monte Carlo estimates of
//! distribution functions and star-body volumes.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distfun::{distance, RootFunctionKind};
use crate::error::{Error, Result};
use crate::moments::MomentClosedForm;
use crate::polyroots::{laurent_recover_coeffs, Polynomial};

/// Environment variable read when no explicit worker count is given.
pub const THREADS_ENV: &str = "MDIST_THREADS";

/// Largest degree enumerated without `force`.
pub const MAX_DEGREE: usize = 5;
/// Largest measure bound enumerated without `force`.
pub const MAX_BOUND: f64 = 100.0;

const BOUNDARY_SLACK: f64 = 1e-9;
const SHARDS: u64 = 64;

/// Result of an exhaustive count.
#[derive(Debug, Clone)]
pub struct CountReport {
    pub n: usize,
    pub t: f64,
    pub exact_count: u64,
    /// Number of `g` of exact degree `d` with `rho(g) <= T`, indexed by `d`.
    pub per_degree: Vec<u64>,
    pub predicted_leading: BigRational,
    pub predicted: f64,
    pub elapsed: Duration,
}

impl CountReport {
    /// `exact / predicted`, or `None` when the prediction is zero.
    pub fn ratio(&self) -> Option<f64> {
        (self.predicted != 0.0).then(|| self.exact_count as f64 / self.predicted)
    }
}

/// A Monte Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl MCEstimate {
    /// Whether `target` lies within `k` standard errors.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.std_error
    }
}

/// Whether coefficients range over the reals or the complex numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientField {
    Real,
    Complex,
}

/// Worker count: the explicit value, else `MDIST_THREADS`, else rayon's default.
pub fn thread_budget(explicit: Option<usize>) -> Option<usize> {
    explicit.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
    })
    .filter(|&n| n > 0)
}

/// Runs `job` on a pool of `thread_budget(threads)` workers, or on the global
/// pool when no budget is set.
pub fn with_thread_budget<R: Send>(threads: Option<usize>, job: impl FnOnce() -> R + Send) -> Result<R> {
    match thread_budget(threads) {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

/// Leading constant `c_N` of the count for `N = 0..=11`.
pub fn table_coefficients() -> BTreeMap<usize, BigRational> {
    (0..=11)
        .map(|n| (n, leading_constant(n).expect("closed forms exist for small N")))
        .collect()
}

/// `c_N = 2 F_J(rho; J+1) / (J+1)` with `J = floor(N/2)`, doubled for odd `N`.
pub fn leading_constant(n: usize) -> Result<BigRational> {
    let j = n / 2;
    let volume = if j == 0 {
        BigRational::from_integer(BigInt::from(2))
    } else {
        let form = MomentClosedForm::f_reciprocal(j)?;
        let at = BigRational::from_integer(BigInt::from(j + 1));
        let f = form.eval_rational_part(&at)?;
        f * BigRational::from_integer(BigInt::from(2)) / at
    };
    Ok(if n % 2 == 1 {
        volume * BigRational::from_integer(BigInt::from(2))
    } else {
        volume
    })
}

/// `c_N T^(J+1)`.
pub fn predicted_count(n: usize, t: f64) -> Result<f64> {
    let c = leading_constant(n)?
        .to_f64()
        .ok_or_else(|| Error::InvalidArgument("constant out of range".into()))?;
    Ok(c * t.powi((n / 2 + 1) as i32))
}

/// Counts nonzero reciprocal `f` in `Z[x]` with `deg f <= N` and `mu(f) <= T`.
///
/// Every even-degree `f` of degree `2d` is `x^d g(x + 1/x)` for an integer `g`
/// of degree `d` with `rho(g) = mu(f)`, and every odd-degree one is `(x + 1)`
/// times an even-degree one of the same measure. Candidates for `g` come from
/// the coefficient bound `|f_k| <= C(2d, k) mu(f)`; each is checked directly.
pub fn enumerate_reciprocal(n: usize, t: f64, threads: Option<usize>, force: bool) -> Result<CountReport> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidArgument(format!("bound T must be positive, got {t}")));
    }
    if !force && (n > MAX_DEGREE || t > MAX_BOUND) {
        return Err(Error::BudgetExceeded(format!(
            "N = {n}, T = {t} exceeds N <= {MAX_DEGREE}, T <= {MAX_BOUND}; pass force to run anyway"
        )));
    }
    let start = Instant::now();
    let limit = t + BOUNDARY_SLACK;
    let lead_max = limit.floor() as i64;
    let max_d = n / 2;
    let per_degree = with_thread_budget(threads, || {
        (0..=max_d)
            .map(|d| {
                (1..=lead_max)
                    .into_par_iter()
                    .map(|lead| count_with_lead(d, lead, t, limit))
                    .sum::<u64>()
                    * 2
            })
            .collect::<Vec<u64>>()
    })?;
    let exact_count = per_degree
        .iter()
        .enumerate()
        .map(|(d, &c)| {
            let classes = u64::from(2 * d <= n) + u64::from(2 * d < n);
            classes * c
        })
        .sum();
    let predicted_leading = leading_constant(n)?;
    let predicted = predicted_count(n, t)?;
    Ok(CountReport {
        n,
        t,
        exact_count,
        per_degree,
        predicted_leading,
        predicted,
        elapsed: start.elapsed(),
    })
}

fn coefficient_bound(two_d: usize, k: usize, t: f64) -> i64 {
    let c = binomial_f64(two_d, k);
    (c * t + BOUNDARY_SLACK).floor() as i64
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Count of `g` with leading coefficient `lead > 0` and exact degree `d`.
fn count_with_lead(d: usize, lead: i64, t: f64, limit: f64) -> u64 {
    let rho = RootFunctionKind::Reciprocal;
    let a = lead as f64;
    match d {
        0 => u64::from(a <= limit),
        1 => {
            let b1 = coefficient_bound(2, 1, t);
            (-b1..=b1)
                .filter(|&b| a * rho.root_value_real(-(b as f64) / a) <= limit)
                .count() as u64
        }
        2 => {
            let b1 = coefficient_bound(4, 1, t);
            let b2 = coefficient_bound(4, 2, t);
            let mut count = 0;
            for b in -b1..=b1 {
                for f2 in -b2..=b2 {
                    let c = f2 - 2 * lead;
                    if a * quadratic_measure(&rho, a, b as f64, c as f64) <= limit {
                        count += 1;
                    }
                }
            }
            count
        }
        _ => count_general(d, lead, t, limit),
    }
}

/// `prod phi(root)` over the roots of `a y^2 + b y + c`.
fn quadratic_measure(kind: &RootFunctionKind, a: f64, b: f64, c: f64) -> f64 {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return kind.root_value_real(0.0).powi(2);
        }
        kind.root_value_real(q / a) * kind.root_value_real(c / q)
    } else {
        let root = Complex64::new(-b / (2.0 * a), (-disc).sqrt() / (2.0 * a));
        let v = kind.root_value(root);
        v * v
    }
}

fn count_general(d: usize, lead: i64, t: f64, limit: f64) -> u64 {
    let bounds: Vec<i64> = (1..=d).map(|k| coefficient_bound(2 * d, k, t)).collect();
    let mut free: Vec<i64> = bounds.iter().map(|b| -b).collect();
    let mut palindrome = vec![0i64; 2 * d + 1];
    let mut count = 0;
    loop {
        palindrome[0] = lead;
        palindrome[2 * d] = lead;
        for (k, &v) in free.iter().enumerate() {
            palindrome[k + 1] = v;
            palindrome[2 * d - 1 - k] = v;
        }
        if let Ok(g) = laurent_recover_coeffs(&palindrome) {
            let coeffs: Vec<f64> = strip_unit_roots(g).iter().map(|&c| c as f64).collect();
            if let Ok(value) = distance(&RootFunctionKind::Reciprocal, &Polynomial::from_real(&coeffs)) {
                if value.0 <= limit {
                    count += 1;
                }
            }
        }
        // Odometer step over the free coefficients.
        let mut k = 0;
        loop {
            if k == d {
                return count;
            }
            if free[k] < bounds[k] {
                free[k] += 1;
                break;
            }
            free[k] = -bounds[k];
            k += 1;
        }
    }
}

/// Divides out the factors `y - 2` and `y + 2` exactly. Their roots have
/// `rho = 1`, and a numerical root near `+-2` would carry a square-root sized
/// error into the measure.
fn strip_unit_roots(mut g: Vec<i64>) -> Vec<i64> {
    for root in [2i64, -2] {
        while g.len() > 1 {
            // Synthetic division by (y - root); descending coefficients.
            let mut quotient = Vec::with_capacity(g.len() - 1);
            let mut acc = 0i64;
            for &c in &g[..g.len() - 1] {
                acc = acc * root + c;
                quotient.push(acc);
            }
            if acc * root + g[g.len() - 1] != 0 {
                break;
            }
            g = quotient;
        }
    }
    g
}

/// Monte Carlo estimate of `f_N(xi)` (real) or `h_N(xi)` (complex).
///
/// Samples uniformly from a box containing `{b : Phi~(b) <= xi}`. Each
/// coefficient satisfies `|b_k| <= C(N,k) min(R^k, c^k m^-(N-k) xi)` where
/// `R` is the root bound, `c` the growth ratio and `m = min(1, floor)`.
pub fn mc_distribution(
    kind: &RootFunctionKind,
    n: usize,
    xi: f64,
    field: CoefficientField,
    samples: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<MCEstimate> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    if !(xi.is_finite() && xi > 0.0) {
        return Err(Error::InvalidArgument(format!("xi must be positive, got {xi}")));
    }
    let radius = kind.root_bound(xi);
    let growth = kind.growth_ratio();
    let floor = kind.phi_floor().min(1.0);
    let bounds: Vec<f64> = (1..=n)
        .map(|k| {
            let by_roots = radius.powi(k as i32);
            let by_measure = growth.powi(k as i32) * floor.powi(-((n - k) as i32)) * xi;
            binomial_f64(n, k) * by_roots.min(by_measure)
        })
        .collect();
    let box_volume = box_volume(&bounds, field);
    let hits = with_thread_budget(threads, || {
        sharded_hits(samples, seed, |rng, coeffs| {
            coeffs.clear();
            coeffs.push(Complex64::one());
            coeffs.extend(bounds.iter().map(|&b| draw(rng, b, field)));
            leading_measure(kind, coeffs).is_some_and(|v| v <= xi)
        })
    })??;
    Ok(binomial_estimate(box_volume, hits, samples, seed))
}

/// Monte Carlo estimate of the volume of `{(a, a_1, .., a_N) : Phi <= 1}`.
///
/// Uses `|a| <= m^-N` and `|a_k| <= C(N,k) c^k m^-(N-k)` with the growth
/// ratio `c` and `m = min(1, floor)`.
pub fn mc_star_volume(
    kind: &RootFunctionKind,
    n: usize,
    field: CoefficientField,
    samples: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<MCEstimate> {
    let growth = kind.growth_ratio();
    let floor = kind.phi_floor().min(1.0);
    let bounds: Vec<f64> = (0..=n)
        .map(|k| binomial_f64(n, k) * growth.powi(k as i32) * floor.powi(-((n - k) as i32)))
        .collect();
    let box_volume = box_volume(&bounds, field);
    let hits = with_thread_budget(threads, || {
        sharded_hits(samples, seed, |rng, coeffs| {
            coeffs.clear();
            coeffs.extend(bounds.iter().map(|&b| draw(rng, b, field)));
            leading_measure(kind, coeffs).is_some_and(|v| v <= 1.0)
        })
    })??;
    Ok(binomial_estimate(box_volume, hits, samples, seed))
}

fn box_volume(bounds: &[f64], field: CoefficientField) -> f64 {
    bounds
        .iter()
        .map(|&b| match field {
            CoefficientField::Real => 2.0 * b,
            CoefficientField::Complex => std::f64::consts::PI * b * b,
        })
        .product()
}

fn draw(rng: &mut ChaCha8Rng, bound: f64, field: CoefficientField) -> Complex64 {
    match field {
        CoefficientField::Real => Complex64::new(rng.random_range(-bound..=bound), 0.0),
        CoefficientField::Complex => {
            let r = bound * rng.random::<f64>().sqrt();
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            Complex64::from_polar(r, theta)
        }
    }
}

/// Distance of the polynomial with the given descending coefficients.
fn leading_measure(kind: &RootFunctionKind, coeffs: &[Complex64]) -> Option<f64> {
    match coeffs {
        [a, b] if !a.is_zero_like() => Some(a.norm() * kind.root_value(-b / a)),
        _ => distance(kind, &Polynomial::new(coeffs.to_vec())).ok().map(|v| v.0),
    }
}

trait ZeroLike {
    fn is_zero_like(&self) -> bool;
}

impl ZeroLike for Complex64 {
    fn is_zero_like(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

/// Runs a fixed number of independent shards so the result does not depend
/// on the worker count.
fn sharded_hits<F>(samples: u64, seed: u64, hit: F) -> Result<u64>
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<Complex64>) -> bool + Sync,
{
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let total = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let share = samples / SHARDS + u64::from(shard < samples % SHARDS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(shard));
            let mut coeffs = Vec::new();
            (0..share).filter(|_| hit(&mut rng, &mut coeffs)).count() as u64
        })
        .sum();
    Ok(total)
}

fn binomial_estimate(box_volume: f64, hits: u64, samples: u64, seed: u64) -> MCEstimate {
    let p = hits as f64 / samples as f64;
    MCEstimate {
        value: box_volume * p,
        std_error: box_volume * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn table_examples() {
        let table = table_coefficients();
        assert_eq!(table[&2], q(16, 3));
        assert_eq!(table[&8], q(655360, 11907));
        assert_eq!(table[&11], &table[&10] * q(2, 1));
        for j in 0..=5 {
            assert_eq!(table[&(2 * j + 1)], &table[&(2 * j)] * q(2, 1));
        }
    }

    #[test]
    fn predicted_examples() {
        assert!((predicted_count(2, 30.0).unwrap() - 4800.0).abs() < 1e-9);
        assert!((predicted_count(4, 10.0).unwrap() - 12800.0).abs() < 1e-9);
        assert!((predicted_count(0, 10.0).unwrap() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_reciprocal(0, 10.0, Some(1), false).unwrap().exact_count, 20);
        assert_eq!(enumerate_reciprocal(1, 10.0, Some(1), false).unwrap().exact_count, 40);
        for t in [1.0, 3.0, 7.0] {
            let r = enumerate_reciprocal(1, t, Some(1), false).unwrap();
            assert_eq!(r.exact_count, 4 * t as u64);
        }
    }

    #[test]
    fn degree_one_direct() {
        // g = a y + b has rho(g) = max(|a|, |b| + ...) and
        // rho(a y + b) <= T iff |b| <= 2|a| when |a| <= T (all roots in [-2, 2]),
        // or larger roots still within the bound.
        let t = 6.0;
        let mut direct = 0;
        for a in 1..=6i64 {
            for b in -12..=12i64 {
                let f = Polynomial::from_ints(&[a, b, a]);
                if distance(&RootFunctionKind::Mahler, &f).unwrap().0 <= t + 1e-9 {
                    direct += 2;
                }
            }
        }
        let r = enumerate_reciprocal(2, t, Some(1), false).unwrap();
        assert_eq!(r.per_degree[1], direct);
    }

    #[test]
    fn degree_two_matches_general_path() {
        let t = 5.0;
        let fast: u64 = (1..=5).map(|lead| count_with_lead(2, lead, t, t + BOUNDARY_SLACK)).sum();
        let slow: u64 = (1..=5).map(|lead| count_general(2, lead, t, t + BOUNDARY_SLACK)).sum();
        assert_eq!(fast, slow);
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(
            enumerate_reciprocal(6, 1000.0, None, false),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn mc_is_reproducible_and_thread_independent() {
        let kind = RootFunctionKind::Mahler;
        let a = mc_distribution(&kind, 1, 2.0, CoefficientField::Real, 20_000, 7, Some(1)).unwrap();
        let b = mc_distribution(&kind, 1, 2.0, CoefficientField::Real, 20_000, 7, Some(3)).unwrap();
        assert_eq!(a, b);
        assert!(a.agrees_with(4.0, 4.0));
    }

    #[test]
    fn mc_below_support_is_zero() {
        let e = mc_distribution(&RootFunctionKind::Mahler, 2, 0.5, CoefficientField::Real, 5_000, 1, None).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn mc_complex_slice() {
        // h_1(mu; xi) is the area of the disk of radius xi.
        let e = mc_distribution(&RootFunctionKind::Mahler, 1, 2.0, CoefficientField::Complex, 50_000, 3, None).unwrap();
        assert!(e.agrees_with(4.0 * std::f64::consts::PI, 4.0));
    }

    #[test]
    fn mc_square() {
        let e = mc_star_volume(&RootFunctionKind::Mahler, 1, CoefficientField::Real, 50_000, 11, None).unwrap();
        assert!(e.agrees_with(4.0, 4.0));
    }
}
