//! Globally adaptive Gauss–Kronrod (10/21) quadrature for vector-valued
//! integrands on lines with breakpoints and infinite ends, plus fixed
//! Gauss–Legendre rules.
//!
//! Every panel is reparametrized over `[0, 1]`. Finite panels use the cubic
//! substitution `x = a + (b - a)(3u^2 - 2u^3)`, which flattens square-root
//! type endpoint behaviour at kinks of the root function. Infinite panels
//! use `x = a / v` followed by the same cubic substitution in `v`, so no
//! truncation is needed.

use crate::error::{Error, Result};

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections per adaptive run.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    /// A tighter copy for integrals nested inside another integrand.
    pub fn inner(&self) -> Self {
        Self {
            rel_tol: self.rel_tol * 0.1,
            abs_tol: self.abs_tol * 0.1,
            ..*self
        }
    }
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// 10-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// One piece of the integration domain, parametrized by `u` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Panel {
    Finite { a: f64, b: f64 },
    /// `[a, inf)` with `a > 0`.
    UpperTail { a: f64 },
    /// `(-inf, b]` with `b < 0`.
    LowerTail { b: f64 },
}

fn cubic(u: f64) -> (f64, f64) {
    (u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u))
}

impl Panel {
    /// Point and Jacobian at parameter `u`.
    fn map(&self, u: f64) -> (f64, f64) {
        let (v, dv) = cubic(u);
        match *self {
            Panel::Finite { a, b } => (a + (b - a) * v, (b - a) * dv),
            Panel::UpperTail { a } | Panel::LowerTail { b: a } => {
                let x = a / v;
                (x, (a / (v * v)).abs() * dv)
            }
        }
    }
}

/// Split `[lo, hi]` (either end may be infinite) at the given breakpoints.
pub fn panels(lo: f64, hi: f64, breaks: &[f64]) -> Vec<Panel> {
    let mut pts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|b| b.is_finite() && *b > lo && *b < hi)
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if lo == f64::NEG_INFINITY && pts.first().is_none_or(|&p| p >= 0.0) {
        let first = pts.first().copied().unwrap_or(hi.min(1.0));
        let anchor = first.min(0.0) - 1.0;
        if anchor > lo && anchor < hi {
            pts.insert(0, anchor);
        }
    }
    if hi == f64::INFINITY && pts.last().is_none_or(|&p| p <= 0.0) {
        let last = pts.last().copied().unwrap_or(lo.max(-1.0));
        let anchor = last.max(0.0) + 1.0;
        if anchor > lo && anchor < hi {
            pts.push(anchor);
        }
    }
    let mut out = Vec::with_capacity(pts.len() + 1);
    let mut prev = lo;
    for &p in pts.iter().chain(std::iter::once(&hi)) {
        out.push(match (prev.is_finite(), p.is_finite()) {
            (true, true) => Panel::Finite { a: prev, b: p },
            (false, true) => Panel::LowerTail { b: p },
            (true, false) => Panel::UpperTail { a: prev },
            (false, false) => unreachable!("anchors split doubly infinite ranges"),
        });
        prev = p;
    }
    out.retain(|p| !matches!(p, Panel::Finite { a, b } if a == b));
    out
}

struct Segment {
    panel: usize,
    u0: f64,
    u1: f64,
    value: Vec<f64>,
    error: Vec<f64>,
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: Vec<f64>,
    /// Error estimate per component.
    pub error: Vec<f64>,
    pub evaluations: usize,
}

struct Integrator<'a, F> {
    f: F,
    panels: &'a [Panel],
    dim: usize,
    buf: Vec<f64>,
    evaluations: usize,
}

impl<F: FnMut(f64, &mut [f64])> Integrator<'_, F> {
    fn rule(&mut self, panel: usize, u0: f64, u1: f64) -> Result<Segment> {
        let (c, h) = ((u0 + u1) * 0.5, (u1 - u0) * 0.5);
        let mut kron = vec![0.0; self.dim];
        let mut gauss = vec![0.0; self.dim];
        for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
            let nodes: &[f64] = if x == 0.0 { &[0.0] } else { &[-x, x] };
            for &off in nodes {
                let (pt, jac) = self.panels[panel].map(c + h * off);
                self.buf.iter_mut().for_each(|v| *v = 0.0);
                (self.f)(pt, &mut self.buf);
                self.evaluations += 1;
                for d in 0..self.dim {
                    let v = self.buf[d] * jac;
                    if !v.is_finite() {
                        return Err(Error::ToleranceNotReached {
                            what: "quadrature (non-finite integrand)",
                            estimate: f64::INFINITY,
                        });
                    }
                    kron[d] += wk * v;
                    if i % 2 == 1 {
                        gauss[d] += WG[i / 2] * v;
                    }
                }
            }
        }
        let value: Vec<f64> = kron.iter().map(|k| k * h).collect();
        let error = kron
            .iter()
            .zip(&gauss)
            .map(|(k, g)| ((k - g) * h).abs())
            .collect();
        Ok(Segment { panel, u0, u1, value, error })
    }
}

/// Adaptive integration of a vector-valued `f` over a union of panels.
/// `f(x, out)` writes `dim` components into `out` (pre-zeroed).
pub fn integrate_panels<F>(dim: usize, f: F, panels: &[Panel], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64, &mut [f64]),
{
    let mut it = Integrator {
        f,
        panels,
        dim,
        buf: vec![0.0; dim],
        evaluations: 0,
    };
    let mut segs = Vec::new();
    for p in 0..panels.len() {
        segs.push(it.rule(p, 0.0, 1.0)?);
    }
    let mut splits = 0;
    loop {
        let mut total = vec![0.0; dim];
        let mut err = vec![0.0; dim];
        for s in &segs {
            for d in 0..dim {
                total[d] += s.value[d];
                err[d] += s.error[d];
            }
        }
        let tol: Vec<f64> = total
            .iter()
            .map(|t| spec.abs_tol.max(spec.rel_tol * t.abs()))
            .collect();
        let excess = (0..dim).map(|d| err[d] / tol[d]).fold(0.0, f64::max);
        if excess <= 1.0 {
            return Ok(Estimate {
                value: total,
                error: err,
                evaluations: it.evaluations,
            });
        }
        if splits >= spec.max_subdivisions {
            return Err(Error::ToleranceNotReached {
                what: "adaptive quadrature",
                estimate: (0..dim).map(|d| err[d]).fold(0.0, f64::max),
            });
        }
        let worst = segs
            .iter()
            .enumerate()
            .map(|(i, s)| (i, (0..dim).map(|d| s.error[d] / tol[d]).fold(0.0, f64::max)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.u0 + s.u1);
        if mid <= s.u0 || mid >= s.u1 {
            return Err(Error::ToleranceNotReached {
                what: "adaptive quadrature (interval underflow)",
                estimate: (0..dim).map(|d| err[d]).fold(0.0, f64::max),
            });
        }
        segs.push(it.rule(s.panel, s.u0, mid)?);
        segs.push(it.rule(s.panel, mid, s.u1)?);
        splits += 1;
    }
}

/// Adaptive integral of `f` over `[lo, hi]` split at `breaks`.
pub fn integrate_line<F>(dim: usize, f: F, lo: f64, hi: f64, breaks: &[f64], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64, &mut [f64]),
{
    if lo >= hi {
        return Ok(Estimate {
            value: vec![0.0; dim],
            error: vec![0.0; dim],
            evaluations: 0,
        });
    }
    integrate_panels(dim, f, &panels(lo, hi, breaks), spec)
}

/// Scalar convenience wrapper around [`integrate_line`].
pub fn integrate_scalar<F>(mut f: F, lo: f64, hi: f64, breaks: &[f64], spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    Ok(integrate_line(1, |x, out| out[0] = f(x), lo, hi, breaks, spec)?.value[0])
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let (c, h) = ((a + b) * 0.5, (b - a) * 0.5);
    x.iter().zip(&w).map(|(xi, wi)| (c + h * xi, h * wi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let spec = QuadratureSpec::default();
        let v = integrate_scalar(|x| x * x, 0.0, 3.0, &[], &spec).unwrap();
        assert!((v - 9.0).abs() < 1e-12);
    }

    #[test]
    fn tails_and_kinks() {
        let spec = QuadratureSpec::default();
        // int max(1,|x|)^-2 dx = 4
        let v = integrate_scalar(|x: f64| x.abs().max(1.0).powi(-2), f64::NEG_INFINITY, f64::INFINITY, &[-1.0, 1.0], &spec)
            .unwrap();
        assert!((v - 4.0).abs() < 1e-11, "{v}");
        // int_0^inf dx/(1+x^2) = pi/2
        let v = integrate_scalar(|x| 1.0 / (1.0 + x * x), 0.0, f64::INFINITY, &[], &spec).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-11);
        // sqrt endpoint singularity
        let v = integrate_scalar(|x: f64| (1.0 - x * x).max(0.0).sqrt(), -1.0, 1.0, &[], &spec).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-11);
        let v = integrate_scalar(|x| (-x * x).exp(), f64::NEG_INFINITY, -0.5, &[], &spec).unwrap();
        let expected = 0.5 * PI.sqrt() * (1.0 - 0.520_499_877_813_046_5);
        assert!((v - expected).abs() < 1e-10, "{v} {expected}");
    }

    #[test]
    fn vector_valued() {
        let spec = QuadratureSpec::default();
        let est = integrate_line(3, |x, out| {
            out[0] = 1.0;
            out[1] = x;
            out[2] = x.sin();
        }, 0.0, PI, &[], &spec)
        .unwrap();
        assert!((est.value[0] - PI).abs() < 1e-12);
        assert!((est.value[1] - PI * PI / 2.0).abs() < 1e-11);
        assert!((est.value[2] - 2.0).abs() < 1e-11);
    }

    #[test]
    fn failure_is_reported() {
        let spec = QuadratureSpec { max_subdivisions: 3, ..Default::default() };
        let r = integrate_scalar(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &[], &spec);
        assert!(matches!(r, Err(Error::ToleranceNotReached { .. })));
    }

    #[test]
    fn gauss_rules() {
        for n in [1, 2, 5, 12, 20] {
            let rule = gauss_legendre_on(n, 0.0, 2.0);
            let total: f64 = rule.iter().map(|(x, w)| w * x.powi(2 * n as i32 - 1)).sum();
            let exact = 2f64.powi(2 * n as i32) / (2 * n) as f64;
            assert!((total - exact).abs() < 1e-11 * exact, "n={n}");
        }
    }

    #[test]
    fn panel_splitting() {
        let p = panels(f64::NEG_INFINITY, f64::INFINITY, &[]);
        assert_eq!(p, vec![Panel::LowerTail { b: -1.0 }, Panel::Finite { a: -1.0, b: 1.0 }, Panel::UpperTail { a: 1.0 }]);
        let p = panels(0.0, f64::INFINITY, &[2.0]);
        assert_eq!(p, vec![Panel::Finite { a: 0.0, b: 2.0 }, Panel::UpperTail { a: 2.0 }]);
        let p = panels(f64::NEG_INFINITY, 0.5, &[-3.0]);
        assert_eq!(p, vec![Panel::LowerTail { b: -3.0 }, Panel::Finite { a: -3.0, b: 0.5 }]);
    }
}
