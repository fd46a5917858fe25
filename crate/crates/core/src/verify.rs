//! End-to-end self-checks, grouped into suites that each report one line per
//! check. The command-line `verify` command and the acceptance target both
//! run these.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::{
    enumerate_reciprocal, leading_constant, mc_distribution, mc_star_volume, table_coefficients, CoefficientField,
    MCEstimate,
};
use crate::distfun::{asymptotic_check, distance, RootFunctionKind};
use crate::error::{Error, Result};
use crate::exactalg::combinat::{
    checkerboard_pfaffian, pfaffian_by_definition, pfaffian_restricted_permutations, pfaffian_sum_expansion,
    pfaffian_wedge, sign_matrix, sign_product, vandermonde,
};
use crate::exactalg::{determinant, pfaffian, SkewMatrix};
use crate::forms::{mahler_a_matrix_exact, rho_a_matrix_exact, MonicFamily};
use crate::moments::{
    distribution_from_moment, f_numeric, f_numeric_det_route, h_numeric, rootspace_oracle_f, rootspace_oracle_h,
    star_volume_real, trajectory_f, trajectory_h, Feature, MomentClosedForm, MomentType, OracleRule, VolumeRoute,
};
use crate::polyroots::Polynomial;
use crate::quadrature::QuadratureSpec;

/// Expected leading constants of the reciprocal counting function, `N = 0..=11`.
pub const EXPECTED_TABLE: [(i64, i64); 12] = [
    (2, 1),
    (4, 1),
    (16, 3),
    (32, 3),
    (64, 5),
    (128, 5),
    (131072, 4725),
    (262144, 4725),
    (655360, 11907),
    (1310720, 11907),
    (2147483648, 21223125),
    (4294967296, 21223125),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Table,
    Closed,
    Pfaffian,
    Quadrature,
    Routes,
    Counting,
    Distribution,
    Trajectory,
    Axioms,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Table,
        Suite::Closed,
        Suite::Pfaffian,
        Suite::Quadrature,
        Suite::Routes,
        Suite::Counting,
        Suite::Distribution,
        Suite::Trajectory,
        Suite::Axioms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Table => "table",
            Suite::Closed => "closed",
            Suite::Pfaffian => "pfaffian",
            Suite::Quadrature => "quadrature",
            Suite::Routes => "routes",
            Suite::Counting => "counting",
            Suite::Distribution => "distribution",
            Suite::Trajectory => "trajectory",
            Suite::Axioms => "axioms",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn failed(name: impl Into<String>, err: &Error) -> Self {
        Self::new(name, false, format!("error: {err}"))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Overrides for the suites; `None` means the suite's own default.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Largest degree for the quadrature and route suites.
    pub max_n: Option<usize>,
    /// Relative tolerance for the quadrature and route suites.
    pub rel_tol: Option<f64>,
    /// Randomized trials for the identity and axiom suites.
    pub trials: Option<usize>,
    /// Monte Carlo sample count.
    pub samples: u64,
    pub seed: u64,
    pub threads: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_n: None,
            rel_tol: None,
            trials: None,
            samples: 1_000_000,
            seed: 20240607,
            threads: None,
        }
    }
}

pub fn run_suite(suite: Suite, options: &VerifyOptions) -> SuiteReport {
    let start = Instant::now();
    let checks = match suite {
        Suite::Table => table_suite(),
        Suite::Closed => closed_suite(),
        Suite::Pfaffian => pfaffian_suite(options),
        Suite::Quadrature => quadrature_suite(options),
        Suite::Routes => routes_suite(options),
        Suite::Counting => counting_suite(options),
        Suite::Distribution => distribution_suite(options),
        Suite::Trajectory => trajectory_suite(),
        Suite::Axioms => axioms_suite(options),
    };
    SuiteReport {
        suite,
        checks,
        elapsed: start.elapsed(),
    }
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn relative_error(value: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        value.abs()
    } else {
        ((value - reference) / reference).abs()
    }
}

fn table_suite() -> Vec<Check> {
    let table = table_coefficients();
    let mut checks: Vec<Check> = EXPECTED_TABLE
        .iter()
        .enumerate()
        .map(|(n, &(num, den))| {
            let expected = q(num, den);
            let got = &table[&n];
            Check::new(format!("c_{n}"), got == &expected, format!("computed {got}, expected {expected}"))
        })
        .collect();
    let doubled = (0..6).all(|j| table[&(2 * j + 1)] == &table[&(2 * j)] * q(2, 1));
    checks.push(Check::new("odd entries double even", doubled, "c_(2J+1) = 2 c_(2J) for J = 0..5"));
    checks
}

fn closed_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    for (t, name, other) in [
        (q(0, 1), "H(mu_0) = H(mu), N = 1..10", MomentClosedForm::h_mahler as fn(usize) -> Result<MomentClosedForm>),
        (q(1, 1), "H(mu_1) = H(rho), N = 1..10", MomentClosedForm::h_reciprocal),
    ] {
        let bad: Vec<usize> = (1..=10)
            .filter(|&n| {
                let lhs = MomentClosedForm::h_treciprocal(n, &t);
                let rhs = other(n);
                match (lhs, rhs) {
                    (Ok(a), Ok(b)) => a.pi_power != b.pi_power || a.rational() != b.rational(),
                    _ => true,
                }
            })
            .collect();
        checks.push(Check::new(name, bad.is_empty(), mismatch_detail(&bad)));
    }
    let bad: Vec<usize> = (1..=8)
        .filter(|&n| {
            let det = mahler_a_matrix_exact(n).and_then(|a| determinant(&a));
            let closed = MomentClosedForm::f_mahler(n).map(|f| f.rational());
            !matches!((det, closed), (Ok(d), Ok(c)) if d == c)
        })
        .collect();
    checks.push(Check::new("det A(mu) = F(mu), N = 1..8", bad.is_empty(), mismatch_detail(&bad)));
    let bad: Vec<usize> = (1..=8)
        .filter(|&n| {
            let factors = match rho_a_matrix_exact(n) {
                Ok(f) => f,
                Err(_) => return true,
            };
            let det = determinant(&factors.a);
            let closed = MomentClosedForm::f_reciprocal(n).map(|f| f.rational());
            let product_ok = factors.product().is_ok_and(|p| p == factors.a);
            !(product_ok && matches!((det, closed), (Ok(d), Ok(c)) if d == c))
        })
        .collect();
    checks.push(Check::new(
        "det A(rho) = F(rho) and A = C B D^T, N = 1..8",
        bad.is_empty(),
        mismatch_detail(&bad),
    ));
    checks
}

fn mismatch_detail(bad: &[usize]) -> String {
    if bad.is_empty() {
        "identical as rational functions".into()
    } else {
        format!("mismatch at N = {bad:?}")
    }
}

fn random_skew(rng: &mut ChaCha8Rng, size: usize, checkerboard: bool) -> SkewMatrix<BigRational> {
    SkewMatrix::from_upper(size, |i, j| {
        if checkerboard && (i + j) % 2 == 0 {
            BigRational::zero()
        } else {
            BigRational::from_integer(rng.random_range(-9i64..=9).into())
        }
    })
}

fn trial_check(name: &str, trials: usize, mut trial: impl FnMut(usize) -> Result<bool>) -> Check {
    let mut failures = 0;
    let mut first_error = None;
    for i in 0..trials {
        match trial(i) {
            Ok(true) => {}
            Ok(false) => failures += 1,
            Err(e) => {
                failures += 1;
                first_error.get_or_insert(e);
            }
        }
    }
    let mut detail = format!("{}/{} trials agree", trials - failures, trials);
    if let Some(e) = first_error {
        detail.push_str(&format!("; first error: {e}"));
    }
    Check::new(name, failures == 0, detail)
}

fn pfaffian_suite(options: &VerifyOptions) -> Vec<Check> {
    let trials = options.trials.unwrap_or(200);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut checks = Vec::new();
    checks.push(trial_check("Pf^2 = det, sizes 2..10", trials, |i| {
        let u = random_skew(&mut rng, 2 + 2 * (i % 5), false);
        let pf = pfaffian(&u)?;
        Ok(pf.clone() * pf == determinant(u.matrix())?)
    }));
    checks.push(trial_check("Pfaffian of a sum, sizes 4 and 6", trials, |i| {
        let size = if i % 2 == 0 { 4 } else { 6 };
        let r = random_skew(&mut rng, size, false);
        let c = random_skew(&mut rng, size, false);
        Ok(pfaffian_sum_expansion(&r, &c)? == pfaffian(&r.add(&c)?)?)
    }));
    checks.push(trial_check(
        "restricted permutations, wedge and definition, sizes 2..6",
        trials,
        |i| {
            let u = random_skew(&mut rng, 2 + 2 * (i % 3), false);
            let pf = pfaffian(&u)?;
            Ok(pfaffian_restricted_permutations(&u)? == pf
                && pfaffian_wedge(&u)? == pf
                && pfaffian_by_definition(&u)? == pf)
        },
    ));
    checks.push(trial_check("checkerboard reduction, sizes 2..6", trials, |i| {
        let u = random_skew(&mut rng, 2 + 2 * (i % 3), true);
        Ok(checkerboard_pfaffian(&u)? == pfaffian(&u)?)
    }));
    checks.push(trial_check("sign-product Pfaffian, L = 1..6", trials, |i| {
        let len = 1 + i % 6;
        let mut alpha: Vec<f64> = Vec::with_capacity(len);
        while alpha.len() < len {
            let x: f64 = rng.random_range(-10.0..10.0);
            if !alpha.contains(&x) {
                alpha.push(x);
            }
        }
        Ok(pfaffian(&sign_matrix(&alpha))? == BigRational::from_integer(sign_product(&alpha).into()))
    }));
    checks.push(trial_check("Vandermonde product, n = 1..6", trials, |i| {
        let nodes: Vec<BigRational> = (0..1 + i % 6)
            .map(|_| BigRational::from_integer(rng.random_range(-20i64..=20).into()))
            .collect();
        let (v, prod) = vandermonde(&nodes);
        Ok(determinant(&v)? == prod)
    }));
    checks
}

fn closed_value(kind: &RootFunctionKind, moment: MomentType, n: usize, s: f64) -> Result<f64> {
    Ok(MomentClosedForm::for_kind(kind, moment, n)?.eval_f64(s))
}

fn quadrature_suite(options: &VerifyOptions) -> Vec<Check> {
    let tol = options.rel_tol.unwrap_or(1e-6);
    let max_n = options.max_n.unwrap_or(4);
    let spec = QuadratureSpec::default();
    let mut checks = Vec::new();
    for kind in [RootFunctionKind::Mahler, RootFunctionKind::Reciprocal] {
        for n in 1..=max_n {
            for s in [n as f64 + 1.0, n as f64 + 2.5] {
                let name = format!("{} N={n} s={s}", kind.label());
                let family = MonicFamily::monomials(n);
                let outcome = (|| -> Result<Check> {
                    let mut worst = 0.0f64;
                    let mut slowest = Duration::ZERO;
                    let routes: [(MomentType, fn(&RootFunctionKind, f64, &MonicFamily, &QuadratureSpec) -> Result<f64>); 3] = [
                        (MomentType::F, f_numeric),
                        (MomentType::F, f_numeric_det_route),
                        (MomentType::H, h_numeric),
                    ];
                    for (moment, route) in routes {
                        let start = Instant::now();
                        let value = route(&kind, s, &family, &spec)?;
                        slowest = slowest.max(start.elapsed());
                        worst = worst.max(relative_error(value, closed_value(&kind, moment, n, s)?));
                    }
                    Ok(Check::new(
                        name.clone(),
                        worst <= tol && slowest < Duration::from_secs(60),
                        format!("max relative error {worst:.2e} (tol {tol:.0e})"),
                    ))
                })();
                checks.push(outcome.unwrap_or_else(|e| Check::failed(name, &e)));
            }
        }
    }
    checks
}

fn routes_suite(options: &VerifyOptions) -> Vec<Check> {
    let tol = options.rel_tol.unwrap_or(1e-4);
    let max_n = options.max_n.unwrap_or(3);
    let spec = QuadratureSpec::default();
    let rule = OracleRule::default();
    let kinds = [
        RootFunctionKind::Mahler,
        RootFunctionKind::Reciprocal,
        RootFunctionKind::t_reciprocal(1, 2).expect("valid t"),
    ];
    let mut checks = Vec::new();
    for kind in &kinds {
        for n in 1..=max_n {
            let s = n as f64 + 1.0;
            let family = MonicFamily::monomials(n);
            let name = format!("{} N={n} s={s}", kind.label());
            let outcome = (|| -> Result<Check> {
                let h_form = h_numeric(kind, s, &family, &spec)?;
                let f_form = f_numeric(kind, s, &family, &spec)?;
                let h_root = rootspace_oracle_h(kind, s, n, &rule)?;
                let f_root = rootspace_oracle_f(kind, s, n, &rule)?;
                let h_err = relative_error(h_root.value, h_form);
                let f_err = relative_error(f_root.value, f_form);
                let mut detail = format!("H oracle {h_err:.2e}, F oracle {f_err:.2e}");
                let mut closed_ok = true;
                for (moment, value) in [(MomentType::H, h_form), (MomentType::F, f_form)] {
                    if let Ok(c) = closed_value(kind, moment, n, s) {
                        let e = relative_error(value, c);
                        closed_ok &= e <= tol;
                        detail.push_str(&format!(", {moment} forms vs closed {e:.2e}"));
                    }
                }
                Ok(Check::new(name.clone(), h_err <= tol && f_err <= tol && closed_ok, detail))
            })();
            checks.push(outcome.unwrap_or_else(|e| Check::failed(name, &e)));
        }
    }
    checks
}

fn counting_suite(options: &VerifyOptions) -> Vec<Check> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for t in [5.0, 10.0, 20.0] {
        let name = format!("#M_1({t}) = 4 floor(T)");
        checks.push(match enumerate_reciprocal(1, t, options.threads, false) {
            Ok(r) => {
                let expected = 4 * t.floor() as u64;
                Check::new(name, r.exact_count == expected, format!("{} vs {expected}", r.exact_count))
            }
            Err(e) => Check::failed(name, &e),
        });
    }
    for n in [2usize, 3] {
        let name = format!("N={n} ratio to leading term");
        let outcome = (|| -> Result<Check> {
            let small = enumerate_reciprocal(n, 10.0, options.threads, false)?;
            let large = enumerate_reciprocal(n, 40.0, options.threads, false)?;
            let dev = |r: &crate::counting::CountReport| (r.exact_count as f64 / r.predicted - 1.0).abs();
            let (d10, d40) = (dev(&small), dev(&large));
            Ok(Check::new(
                name.clone(),
                d40 <= 0.15 && d40 < d10,
                format!(
                    "T=10: {} / {:.1} (dev {d10:.4}); T=40: {} / {:.1} (dev {d40:.4})",
                    small.exact_count, small.predicted, large.exact_count, large.predicted
                ),
            ))
        })();
        checks.push(outcome.unwrap_or_else(|e| Check::failed(name, &e)));
    }
    let elapsed = start.elapsed();
    checks.push(Check::new(
        "counting runtime under 5 min",
        elapsed < Duration::from_secs(300),
        "exhaustive enumeration for every case above",
    ));
    checks
}

/// Within `k` standard errors; a box that coincides with the body gives a
/// zero standard error, so rounding-level slack is allowed.
fn mc_check(name: String, estimate: &MCEstimate, target: f64) -> Check {
    let slack = 3.0 * estimate.std_error + 1e-12 * target.abs();
    let diff = (estimate.value - target).abs();
    Check::new(
        name,
        diff <= slack,
        format!(
            "{:.6} +- {:.6} vs {target:.6} ({:.2} sigma)",
            estimate.value,
            estimate.std_error,
            if estimate.std_error > 0.0 { diff / estimate.std_error } else { 0.0 }
        ),
    )
}

fn distribution_suite(options: &VerifyOptions) -> Vec<Check> {
    let mut checks = Vec::new();
    let rho_distribution = MomentClosedForm::f_reciprocal(1).and_then(|f| distribution_from_moment(&f));
    for xi in [1.5, 2.0, 4.0] {
        let name = format!("f_1(mu; {xi}) = 2 xi");
        checks.push(
            match mc_distribution(&RootFunctionKind::Mahler, 1, xi, CoefficientField::Real, options.samples, options.seed, options.threads) {
                Ok(e) => mc_check(name, &e, 2.0 * xi),
                Err(e) => Check::failed(name, &e),
            },
        );
        let name = format!("f_1(rho; {xi}) from the moment");
        let target = match &rho_distribution {
            Ok(laurent) => laurent.eval_f64(xi),
            Err(e) => {
                checks.push(Check::failed(name, e));
                continue;
            }
        };
        let formula_ok = relative_error(target, 2.0 * xi + 2.0 / xi) <= 1e-14;
        checks.push(
            match mc_distribution(&RootFunctionKind::Reciprocal, 1, xi, CoefficientField::Real, options.samples, options.seed, options.threads) {
                Ok(e) => {
                    let mut c = mc_check(name, &e, target);
                    c.passed &= formula_ok;
                    c.detail.push_str(&format!("; inverted moment equals 2 xi + 2/xi: {formula_ok}"));
                    c
                }
                Err(e) => Check::failed(name, &e),
            },
        );
    }
    let spec = QuadratureSpec::default();
    let volumes: [(RootFunctionKind, usize, Option<f64>); 3] = [
        (RootFunctionKind::Reciprocal, 1, leading_constant(2).ok().and_then(|c| c.to_f64())),
        (RootFunctionKind::Mahler, 1, Some(4.0)),
        (RootFunctionKind::Mahler, 2, Some(8.0)),
    ];
    for (kind, n, expected) in volumes {
        let name = format!("star volume {} N={n}", kind.label());
        let outcome = (|| -> Result<Check> {
            let target = expected.ok_or_else(|| Error::InvalidArgument("no target".into()))?;
            let closed = star_volume_real(&kind, n, VolumeRoute::Closed, &spec)?.to_f64();
            let estimate = mc_star_volume(&kind, n, CoefficientField::Real, options.samples, options.seed, options.threads)?;
            let mut c = mc_check(name.clone(), &estimate, target);
            let closed_ok = relative_error(closed, target) <= 1e-14;
            c.passed &= closed_ok;
            c.detail.push_str(&format!("; closed volume {closed}"));
            Ok(c)
        })();
        checks.push(outcome.unwrap_or_else(|e| Check::failed(name, &e)));
    }
    checks
}

/// The grid `t = 0.05, 0.10, .., 0.95`.
pub fn standard_t_grid() -> Vec<BigRational> {
    (1..=19).map(|k| q(k, 20)).collect()
}

fn trajectory_suite() -> Vec<Check> {
    let grid = standard_t_grid();
    let mut checks = Vec::new();
    match trajectory_h(6, &grid) {
        Ok(points) => {
            let mut worst = 0.0f64;
            let mut missing = 0;
            let mut numerator_ok = true;
            for t in &grid {
                let tf = t.to_f64().unwrap_or(f64::NAN);
                let closed = MomentClosedForm::h_treciprocal(6, t);
                for n in 1..=6i64 {
                    let p = tf.powi(2 * n as i32);
                    let expected = -(n as f64) * (1.0 + p) / (1.0 - p);
                    match points
                        .iter()
                        .find(|pt| pt.t == tf && pt.feature == Feature::Zero && pt.index == n)
                    {
                        Some(pt) => worst = worst.max((pt.location.re - expected).abs() + pt.location.im.abs()),
                        None => missing += 1,
                    }
                    // The zero must also be a root of the closed form's numerator.
                    let root = crate::moments::h_zero(t, n as u32);
                    numerator_ok &= closed.as_ref().is_ok_and(|c| {
                        c.numerator.iter().any(|f| f.poly.eval_rational(&root).is_zero())
                    });
                }
            }
            checks.push(Check::new(
                "H_6(mu_t) zeros on the 19-point grid",
                worst <= 1e-12 && missing == 0 && numerator_ok,
                format!("max deviation {worst:.2e}, missing {missing}, numerator roots {numerator_ok}"),
            ));
            let mut monotone = true;
            for n in 1..=6i64 {
                let mut distances: Vec<(f64, f64)> = points
                    .iter()
                    .filter(|pt| pt.feature == Feature::Zero && pt.index == n)
                    .map(|pt| (pt.t, (pt.location.re + n as f64).abs()))
                    .collect();
                distances.sort_by(|a, b| b.0.total_cmp(&a.0));
                monotone &= distances.windows(2).all(|w| w[1].1 < w[0].1);
            }
            checks.push(Check::new(
                "H_6 zeros approach the poles at -n as t decreases",
                monotone,
                "distance strictly decreasing along the grid",
            ));
        }
        Err(e) => checks.push(Check::failed("H_6(mu_t) zeros", &e)),
    }
    match trajectory_f(2, &grid, &QuadratureSpec::default()) {
        Ok(tr) => {
            let per_t_ok = grid.iter().all(|t| {
                let tf = t.to_f64().unwrap_or(f64::NAN);
                tr.zeros.iter().filter(|z| z.t == tf).count() == 1
            });
            let worst = tr.zeros.iter().map(|z| z.relative_residual).fold(0.0, f64::max);
            let inside = tr.zeros.iter().all(|z| z.location > -2.0 && z.location < 0.0);
            checks.push(Check::new(
                "F_2(mu_t) has one negative zero per t",
                per_t_ok && inside && worst <= 1e-4 && tr.unbracketed.is_empty(),
                format!(
                    "{} zeros for {} values of t, all in (-2, 0): {inside}, max relative residual {worst:.2e}",
                    tr.zeros.len(),
                    grid.len()
                ),
            ));
        }
        Err(e) => checks.push(Check::failed("F_2(mu_t) zeros", &e)),
    }
    checks
}

fn random_polynomial(rng: &mut ChaCha8Rng) -> Polynomial {
    let degree = rng.random_range(1..=6usize);
    let mut coeffs: Vec<f64> = (0..=degree).map(|_| rng.random_range(-3.0..3.0)).collect();
    if coeffs[0].abs() < 0.1 {
        coeffs[0] = 1.0;
    }
    Polynomial::from_real(&coeffs)
}

fn axioms_suite(options: &VerifyOptions) -> Vec<Check> {
    let trials = options.trials.unwrap_or(500);
    let kinds = [
        RootFunctionKind::Mahler,
        RootFunctionKind::Reciprocal,
        RootFunctionKind::t_reciprocal(1, 2).expect("valid t"),
        RootFunctionKind::t_reciprocal(1, 5).expect("valid t"),
    ];
    let mut checks = Vec::new();
    for kind in &kinds {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        checks.push(trial_check(&format!("{} multiplicativity", kind.label()), trials, |_| {
            let f = random_polynomial(&mut rng);
            let g = random_polynomial(&mut rng);
            let prod = distance(kind, &(&f * &g))?.0;
            let separate = distance(kind, &f)?.0 * distance(kind, &g)?.0;
            Ok(relative_error(prod, separate) <= 1e-9)
        }));
        checks.push(trial_check(&format!("{} homogeneity", kind.label()), trials, |_| {
            let f = random_polynomial(&mut rng);
            let w: f64 = rng.random_range(0.1..10.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
            let scaled = distance(kind, &f.scale(num_complex::Complex64::new(w, 0.0)))?.0;
            Ok(relative_error(scaled, w.abs() * distance(kind, &f)?.0) <= 1e-9)
        }));
        let deviation = asymptotic_check(kind, 1e6, 256);
        let bound = if matches!(kind, RootFunctionKind::Mahler) { 0.0 } else { 2e-6 };
        checks.push(Check::new(
            format!("{} growth phi(z) ~ |z|", kind.label()),
            deviation <= bound,
            format!("max |phi/|z| - 1| = {deviation:.2e} at radius 1e6 (bound {bound:.0e})"),
        ));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn table_suite_passes() {
        assert!(run_suite(Suite::Table, &VerifyOptions::default()).passed());
    }

    #[test]
    fn small_pfaffian_suite_passes() {
        let opts = VerifyOptions {
            trials: Some(12),
            ..VerifyOptions::default()
        };
        let report = run_suite(Suite::Pfaffian, &opts);
        assert!(report.passed(), "{:?}", report.checks);
    }
}
