//! Moment functions integrated directly over root space: an oracle that is
//! independent of the bilinear-form machinery.
//!
//! `H_N` integrates `prod phi(gamma_i)^(-2s) |det V|^2 / N!` over `C^N`.
//! `F_N` sums over root configurations with `L` real roots and `M` pairs of
//! conjugate roots (`L + 2M = N`), each weighted by `2^M / (L! M!)` times
//! the modulus of the Vandermonde determinant of all `N` roots.
//!
//! Both use fixed product rules. Outside the set where the root function
//! equals 1 the plane is parametrized through `gamma = x + t/x` with
//! `|x| > 1`; inside it (a disk or an ellipse) ordinary polar coordinates
//! are used. Real roots are ordered so the Vandermonde modulus is a
//! polynomial on every cell.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::distfun::{ellipse_radius, RootFunctionKind};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_on;

/// Node counts of the product rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleRule {
    /// Angular nodes outside the unit set.
    pub angular: usize,
    /// Radial nodes outside the unit set.
    pub radial: usize,
    /// Nodes per piece of the real line.
    pub real: usize,
}

impl Default for OracleRule {
    fn default() -> Self {
        Self {
            angular: 32,
            radial: 24,
            real: 24,
        }
    }
}

impl OracleRule {
    fn coarser(&self) -> Self {
        Self {
            angular: self.angular * 3 / 4,
            radial: self.radial * 3 / 4,
            real: self.real * 3 / 4,
        }
    }
}

/// Oracle value and the change observed when the rule is coarsened.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    pub delta: f64,
}

type Node<T> = (T, f64);

/// `u = 3v^2 - 2v^3` on `[0, 1]`, flattening both endpoints.
fn smoothed_unit(n: usize) -> Vec<Node<f64>> {
    gauss_legendre_on(n, 0.0, 1.0)
        .into_iter()
        .map(|(v, w)| (v * v * (3.0 - 2.0 * v), w * 6.0 * v * (1.0 - v)))
        .collect()
}

fn pullback_t(kind: &RootFunctionKind) -> Result<f64> {
    kind.pullback_t()
        .ok_or_else(|| Error::InvalidArgument("the root-space oracle supports the built-in root functions".into()))
}

/// Nodes for `integral phi(g)^(-s) phi(conj g)^(-s) dA(g)` over the whole
/// plane or the upper half plane.
fn plane_rule(kind: &RootFunctionKind, s: f64, rule: &OracleRule, upper_half: bool) -> Result<Vec<Node<Complex64>>> {
    let t = pullback_t(kind)?;
    let weight = |g: Complex64| (kind.root_value(g) * kind.root_value(g.conj())).powf(-s);
    let angles = |n: usize| -> Vec<Node<f64>> {
        if upper_half {
            gauss_legendre_on(n, 0.0, PI)
        } else {
            (0..n).map(|i| (2.0 * PI * i as f64 / n as f64, 2.0 * PI / n as f64)).collect()
        }
    };
    let mut nodes = Vec::new();
    // Exterior: x = e^{i theta} / u, gamma = x + t / x, dA = |1 - t/x^2|^2 r dr dtheta.
    let radial = smoothed_unit(rule.radial);
    for (theta, wt) in angles(rule.angular) {
        let dir = Complex64::from_polar(1.0, theta);
        for &(u, wu) in &radial {
            if u <= 0.0 {
                continue;
            }
            let x = dir / u;
            let g = x + t / x;
            let jac = (Complex64::new(1.0, 0.0) - t / (x * x)).norm_sqr();
            let w = weight(g) * jac * wt * wu / (u * u * u);
            if w > 0.0 {
                nodes.push((g, w));
            }
        }
    }
    // Interior: the ellipse with semi-axes 1 + t and 1 - t, where phi = 1.
    if t < 1.0 {
        let n_angle = if t == 0.0 { rule.angular } else { rule.angular * 3 };
        let n_radial = (rule.radial / 2).max(6);
        for (psi, wp) in angles(n_angle) {
            let edge = ellipse_radius(t, psi);
            let dir = Complex64::from_polar(1.0, psi);
            for (r, wr) in gauss_legendre_on(n_radial, 0.0, edge) {
                let g = dir * r;
                nodes.push((g, weight(g) * r * wr * wp));
            }
        }
    }
    Ok(nodes)
}

/// Pieces of `[a, inf)` (or the whole line when `a` is `-inf`) split at the
/// kinks of the root function on the real axis.
fn real_rule(kind: &RootFunctionKind, s: f64, a: f64, n: usize) -> Vec<Node<f64>> {
    let mut cuts: Vec<f64> = kind.real_breakpoints().into_iter().filter(|&b| b > a).collect();
    cuts.sort_by(f64::total_cmp);
    let unit = smoothed_unit(n);
    let mut nodes = Vec::new();
    let mut push = |x: f64, w: f64| {
        let wx = kind.root_value_real(x).powf(-s) * w;
        if wx > 0.0 && wx.is_finite() {
            nodes.push((x, wx));
        }
    };
    let mut lo = a;
    if a == f64::NEG_INFINITY {
        // (-inf, c] with x = c / u, c < 0.
        let c = cuts.first().copied().filter(|&c| c < 0.0).unwrap_or(-1.0);
        for &(u, wu) in &unit {
            if u > 0.0 {
                push(c / u, -c * wu / (u * u));
            }
        }
        lo = c;
        cuts.retain(|&b| b > c);
    }
    for &b in &cuts {
        for &(u, wu) in &unit {
            push(lo + (b - lo) * u, (b - lo) * wu);
        }
        lo = b;
    }
    // [lo, inf) with x = lo / u; lo > 0 because the last kink is positive.
    let start = if lo > 0.0 { lo } else { 1.0 };
    if lo < start {
        for &(u, wu) in &unit {
            push(lo + (start - lo) * u, (start - lo) * wu);
        }
    }
    for &(u, wu) in &unit {
        if u > 0.0 {
            push(start / u, start * wu / (u * u));
        }
    }
    nodes
}

fn check_args(n: usize, s: f64, bound: f64) -> Result<()> {
    if n == 0 || n > 4 {
        return Err(Error::InvalidArgument("the root-space oracle supports 1 <= N <= 4".into()));
    }
    if !(s > bound) {
        return Err(Error::ConvergenceViolation { s, bound });
    }
    Ok(())
}

fn h_with(kind: &RootFunctionKind, s: f64, n: usize, rule: &OracleRule) -> Result<f64> {
    let nodes = plane_rule(kind, s, rule, false)?;
    // Sum over strictly increasing index tuples: the N! orderings cancel the 1/N!.
    fn recurse(nodes: &[Node<Complex64>], start: usize, depth: usize, chosen: &mut Vec<Complex64>, acc: f64) -> f64 {
        if depth == 0 {
            return acc;
        }
        let mut total = 0.0;
        for i in start..nodes.len() {
            let (g, w) = nodes[i];
            let v: f64 = chosen.iter().map(|c| (g - c).norm_sqr()).product();
            if v == 0.0 {
                continue;
            }
            chosen.push(g);
            total += recurse(nodes, i + 1, depth - 1, chosen, acc * w * v);
            chosen.pop();
        }
        total
    }
    Ok(recurse(&nodes, 0, n, &mut Vec::with_capacity(n), 1.0))
}

fn f_with(kind: &RootFunctionKind, s: f64, n: usize, rule: &OracleRule) -> Result<f64> {
    let half = plane_rule(kind, s, rule, true)?;
    let mut total = 0.0;
    for pairs in 0..=n / 2 {
        let reals = n - 2 * pairs;
        let coeff = 2f64.powi(pairs as i32);
        let mut roots = Vec::with_capacity(n);
        total += coeff * real_levels(kind, s, rule, f64::NEG_INFINITY, reals, pairs, &half, &mut roots, 1.0);
    }
    Ok(total)
}

/// Nested ordered integration over the real roots, then the complex pairs.
#[allow(clippy::too_many_arguments)]
fn real_levels(
    kind: &RootFunctionKind,
    s: f64,
    rule: &OracleRule,
    lower: f64,
    reals: usize,
    pairs: usize,
    half: &[Node<Complex64>],
    roots: &mut Vec<Complex64>,
    acc: f64,
) -> f64 {
    if reals == 0 {
        return pair_levels(half, 0, pairs, roots, acc);
    }
    let mut total = 0.0;
    for (x, w) in real_rule(kind, s, lower, rule.real) {
        let z = Complex64::new(x, 0.0);
        let v: f64 = roots.iter().map(|r| (z - r).norm()).product();
        roots.push(z);
        total += real_levels(kind, s, rule, x, reals - 1, pairs, half, roots, acc * w * v);
        roots.pop();
    }
    total
}

fn pair_levels(half: &[Node<Complex64>], start: usize, pairs: usize, roots: &mut Vec<Complex64>, acc: f64) -> f64 {
    if pairs == 0 {
        return acc;
    }
    // Increasing indices only; the M! orderings cancel the 1/M! of the stratum.
    let mut total = 0.0;
    for i in start..half.len() {
        let (b, w) = half[i];
        let bc = b.conj();
        let mut v: f64 = roots.iter().map(|r| (b - r).norm() * (bc - r).norm()).product();
        v *= (b - bc).norm();
        roots.push(b);
        roots.push(bc);
        total += pair_levels(half, i + 1, pairs - 1, roots, acc * w * v);
        roots.pop();
        roots.pop();
    }
    total
}

fn estimate(f: impl Fn(&OracleRule) -> Result<f64>, rule: &OracleRule) -> Result<OracleEstimate> {
    let value = f(rule)?;
    let coarse = f(&rule.coarser())?;
    Ok(OracleEstimate {
        value,
        delta: (value - coarse).abs(),
    })
}

/// `H_N(s)` by direct integration over `C^N`.
pub fn rootspace_oracle_h(kind: &RootFunctionKind, s: f64, n: usize, rule: &OracleRule) -> Result<OracleEstimate> {
    check_args(n, s, n as f64)?;
    estimate(|r| h_with(kind, s, n, r), rule)
}

/// `F_N(s)` by direct integration over the root strata.
pub fn rootspace_oracle_f(kind: &RootFunctionKind, s: f64, n: usize, rule: &OracleRule) -> Result<OracleEstimate> {
    check_args(n, s, n as f64)?;
    estimate(|r| f_with(kind, s, n, r), rule)
}
