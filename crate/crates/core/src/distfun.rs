//! Root functions and the multiplicative distance functions they induce.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polyroots::{roots, Polynomial, DEFAULT_ROOT_TOL};

/// The parameter `t` of a t-reciprocal measure, kept exactly and as a float.
#[derive(Debug, Clone, PartialEq)]
pub struct TParameter {
    exact: BigRational,
    value: f64,
}

impl TParameter {
    pub fn new(t: BigRational) -> Result<Self> {
        if t.is_negative() || t > BigRational::one() {
            return Err(Error::InvalidArgument(format!("t = {t} must lie in [0, 1]")));
        }
        let value = t.to_f64().unwrap_or(f64::NAN);
        Ok(Self { exact: t, value })
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("t has zero denominator".into()));
        }
        Self::new(BigRational::new(num.into(), den.into()))
    }

    pub fn exact(&self) -> &BigRational {
        &self.exact
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

type PhiFn = dyn Fn(Complex64) -> f64 + Send + Sync;

/// A user-supplied root function with explicit growth constants:
/// `phi(z) >= kappa |z|` whenever `|z| >= r0`, and `phi >= floor` everywhere.
#[derive(Clone)]
pub struct CustomRootFunction {
    name: String,
    phi: Arc<PhiFn>,
    kappa: f64,
    r0: f64,
    floor: f64,
    breakpoints: Vec<f64>,
}

impl CustomRootFunction {
    pub fn new<F>(name: impl Into<String>, phi: F, kappa: f64, r0: f64) -> Result<Self>
    where
        F: Fn(Complex64) -> f64 + Send + Sync + 'static,
    {
        if !(kappa > 0.0 && r0 > 0.0) {
            return Err(Error::InvalidArgument(
                "growth constants must be positive".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            phi: Arc::new(phi),
            kappa,
            r0,
            floor: 1.0,
            breakpoints: vec![r0],
        })
    }

    /// Lower bound for the root function (defaults to 1).
    pub fn with_floor(mut self, floor: f64) -> Self {
        self.floor = floor;
        self
    }

    /// Radii where the root function is not smooth, used to seed quadrature.
    pub fn with_breakpoints(mut self, radii: Vec<f64>) -> Self {
        self.breakpoints = radii;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }
}

impl fmt::Debug for CustomRootFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomRootFunction")
            .field("name", &self.name)
            .field("kappa", &self.kappa)
            .field("r0", &self.r0)
            .field("floor", &self.floor)
            .finish()
    }
}

/// A multiplicative distance function, named by its root function.
#[derive(Debug, Clone)]
pub enum RootFunctionKind {
    /// `max(1, |z|)`
    Mahler,
    /// Pullback of Mahler's root function through `x + 1/x`.
    Reciprocal,
    /// Pullback through `x + t/x`.
    TReciprocal(TParameter),
    Custom(CustomRootFunction),
}

/// Value of a distance function; zero only for the zero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DistanceValue(pub f64);

impl DistanceValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Parses `mahler`, `reciprocal` or `trec:<t>` with `t` written as an
/// integer or `p/q`.
impl std::str::FromStr for RootFunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "mahler" => Ok(Self::Mahler),
            "reciprocal" => Ok(Self::Reciprocal),
            other => {
                let t = other
                    .strip_prefix("trec:")
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown root function '{other}'")))?;
                let t: BigRational = t
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad t parameter '{t}'")))?;
                Ok(Self::TReciprocal(TParameter::new(t)?))
            }
        }
    }
}

impl RootFunctionKind {
    pub fn t_reciprocal(num: i64, den: i64) -> Result<Self> {
        Ok(Self::TReciprocal(TParameter::from_ratio(num, den)?))
    }

    /// The pullback parameter for the built-in kinds (Mahler is `t = 0`).
    pub fn pullback_t(&self) -> Option<f64> {
        match self {
            Self::Mahler => Some(0.0),
            Self::Reciprocal => Some(1.0),
            Self::TReciprocal(t) => Some(t.value()),
            Self::Custom(_) => None,
        }
    }

    /// Exact pullback parameter for the built-in kinds.
    pub fn pullback_t_exact(&self) -> Option<BigRational> {
        match self {
            Self::Mahler => Some(BigRational::zero()),
            Self::Reciprocal => Some(BigRational::one()),
            Self::TReciprocal(t) => Some(t.exact().clone()),
            Self::Custom(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Mahler => "mahler".into(),
            Self::Reciprocal => "reciprocal".into(),
            Self::TReciprocal(t) => format!("trec:{}", t.exact()),
            Self::Custom(c) => format!("custom:{}", c.name),
        }
    }

    /// The root function at `z`.
    pub fn root_value(&self, z: Complex64) -> f64 {
        match self {
            Self::Mahler => z.norm().max(1.0),
            Self::Reciprocal => pullback_value(z, 1.0),
            Self::TReciprocal(t) => pullback_value(z, t.value()),
            Self::Custom(c) => (c.phi)(z),
        }
    }

    /// The root function at a real point.
    pub fn root_value_real(&self, x: f64) -> f64 {
        match self {
            Self::Mahler => x.abs().max(1.0),
            Self::Reciprocal => pullback_value_real(x, 1.0),
            Self::TReciprocal(t) => pullback_value_real(x, t.value()),
            Self::Custom(c) => (c.phi)(Complex64::new(x, 0.0)),
        }
    }

    /// Infimum of the root function.
    pub fn phi_floor(&self) -> f64 {
        match self {
            Self::Custom(c) => c.floor,
            _ => 1.0,
        }
    }

    /// An upper bound for `max(1, |z|) / phi(z)` over the plane.
    pub fn growth_ratio(&self) -> f64 {
        match self {
            Self::Mahler => 1.0,
            Self::Reciprocal => 2.0,
            Self::TReciprocal(t) => 1.0 + t.value(),
            Self::Custom(c) => (1.0 / c.kappa).max(c.r0.max(1.0) / c.floor),
        }
    }

    /// Radius `R` with `{phi <= xi}` contained in the disk `|z| <= R`.
    pub fn root_bound(&self, xi: f64) -> f64 {
        match self {
            Self::Mahler => xi,
            Self::Reciprocal => xi + 1.0,
            Self::TReciprocal(t) => xi + t.value(),
            Self::Custom(c) => c.r0.max(xi / c.kappa),
        }
    }

    /// Whether `phi(-z) = phi(z)`; custom kinds are spot-checked.
    pub fn is_even(&self) -> bool {
        self.symmetry_defect().is_none()
    }

    /// Modulus of the first sample point where `phi(-z) != phi(z)`, if any.
    pub fn symmetry_defect(&self) -> Option<f64> {
        match self {
            Self::Custom(c) => (0..64).find_map(|k| {
                let r = 0.1 + 0.37 * k as f64;
                let z = Complex64::from_polar(r, 0.7 + 1.3 * k as f64);
                let (a, b) = ((c.phi)(z), (c.phi)(-z));
                ((a - b).abs() > 1e-12 * a.abs().max(1.0)).then_some(r)
            }),
            _ => None,
        }
    }

    /// Real points where the root function restricted to the line is not smooth.
    pub fn real_breakpoints(&self) -> Vec<f64> {
        let edge = match self {
            Self::Custom(c) => return symmetric_points(&c.breakpoints),
            other => 1.0 + other.pullback_t().unwrap_or(0.0),
        };
        vec![-edge, edge]
    }

    /// Radii along the ray at angle `theta` where the root function has a kink
    /// or a sharp feature.
    pub fn radial_breakpoints(&self, theta: f64) -> Vec<f64> {
        match self {
            Self::Mahler => vec![1.0],
            Self::Reciprocal => vec![2.0],
            Self::TReciprocal(t) => {
                let t = t.value();
                let mut v = vec![ellipse_radius(t, theta), 1.0 + t];
                v.sort_by(f64::total_cmp);
                v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
                v
            }
            Self::Custom(c) => {
                let mut v: Vec<f64> = c.breakpoints.iter().map(|r| r.abs()).filter(|&r| r > 0.0).collect();
                v.sort_by(f64::total_cmp);
                v.dedup();
                v
            }
        }
    }
}

fn symmetric_points(radii: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = radii
        .iter()
        .filter(|r| **r > 0.0)
        .flat_map(|&r| [-r, r])
        .collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Polar radius of the ellipse with semi-axes `1 + t` and `1 - t`.
pub fn ellipse_radius(t: f64, theta: f64) -> f64 {
    let (a, b) = (1.0 + t, 1.0 - t);
    if b <= 0.0 {
        return 0.0;
    }
    let (c, s) = (theta.cos(), theta.sin());
    1.0 / ((c * c) / (a * a) + (s * s) / (b * b)).sqrt()
}

/// `max(1, |r|)` for the larger root `r` of `x^2 - z x + t`; the other root
/// has modulus at most `sqrt(t) <= 1`.
fn pullback_value(z: Complex64, t: f64) -> f64 {
    if t == 0.0 {
        return z.norm().max(1.0);
    }
    let d = (z * z - 4.0 * t).sqrt();
    let big = (z + d).norm().max((z - d).norm()) * 0.5;
    big.max(1.0)
}

fn pullback_value_real(x: f64, t: f64) -> f64 {
    let disc = x * x - 4.0 * t;
    if disc <= 0.0 {
        return 1.0;
    }
    ((x.abs() + disc.sqrt()) * 0.5).max(1.0)
}

/// The root function of `kind` at `z`.
pub fn root_value(kind: &RootFunctionKind, z: Complex64) -> f64 {
    kind.root_value(z)
}

/// `|a| prod phi(root)`; the zero polynomial has distance 0.
pub fn distance(kind: &RootFunctionKind, p: &Polynomial) -> Result<DistanceValue> {
    if p.is_zero() {
        return Ok(DistanceValue(0.0));
    }
    let rs = roots(p, DEFAULT_ROOT_TOL)?;
    let prod: f64 = rs
        .roots
        .iter()
        .map(|&r| if r.im == 0.0 { kind.root_value_real(r.re) } else { kind.root_value(r) })
        .product();
    Ok(DistanceValue(rs.leading.norm() * prod))
}

/// Distance of the monic polynomial `x^N + b1 x^(N-1) + .. + bN`.
pub fn monic_restriction(kind: &RootFunctionKind, b: &[Complex64]) -> Result<f64> {
    let mut coeffs = Vec::with_capacity(b.len() + 1);
    coeffs.push(Complex64::one());
    coeffs.extend_from_slice(b);
    Ok(distance(kind, &Polynomial::new(coeffs))?.0)
}

/// Largest `|phi(z)/|z| - 1|` over `samples` equally spaced points on `|z| = radius`.
pub fn asymptotic_check(kind: &RootFunctionKind, radius: f64, samples: usize) -> f64 {
    (0..samples.max(1))
        .map(|k| {
            let theta = 2.0 * PI * (k as f64 + 0.5) / samples.max(1) as f64;
            let z = Complex64::from_polar(radius, theta);
            (kind.root_value(z) / z.norm() - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// See [`RootFunctionKind::root_bound`].
pub fn root_bound(kind: &RootFunctionKind, xi: f64) -> f64 {
    kind.root_bound(xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_parse() {
        assert!(matches!("mahler".parse::<RootFunctionKind>(), Ok(RootFunctionKind::Mahler)));
        assert_eq!("trec:1/2".parse::<RootFunctionKind>().unwrap().label(), "trec:1/2");
        assert!("trec:3/2".parse::<RootFunctionKind>().is_err());
        assert!("other".parse::<RootFunctionKind>().is_err());
    }

    const GOLDEN_SQ: f64 = 2.618_033_988_749_895;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn root_value_examples() {
        let m = RootFunctionKind::Mahler;
        assert_eq!(m.root_value(c(0.0, 0.0)), 1.0);
        assert_eq!(m.root_value(c(3.0, 0.0)), 3.0);
        let r = RootFunctionKind::Reciprocal;
        assert!((r.root_value(c(3.0, 0.0)) - GOLDEN_SQ).abs() < 1e-15);
        assert!((r.root_value(c(2.0, 0.0)) - 1.0).abs() < 1e-15);
        assert_eq!(r.root_value(c(0.0, 0.0)), 1.0);
        let t0 = RootFunctionKind::t_reciprocal(0, 1).unwrap();
        for z in [c(0.3, 2.0), c(-5.0, 0.1), c(0.2, 0.2)] {
            assert_eq!(t0.root_value(z), m.root_value(z));
        }
    }

    #[test]
    fn real_fast_path_matches_complex() {
        for kind in [
            RootFunctionKind::Reciprocal,
            RootFunctionKind::t_reciprocal(1, 2).unwrap(),
        ] {
            for k in 0..200 {
                let x = -6.0 + 0.06 * k as f64;
                let a = kind.root_value_real(x);
                let b = kind.root_value(c(x, 0.0));
                assert!((a - b).abs() < 1e-12, "{x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn distance_examples() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let d = distance(&RootFunctionKind::Mahler, &Polynomial::from_ints(&[1, -1, -1])).unwrap();
        assert!((d.0 - phi).abs() < 1e-14);
        let d = distance(&RootFunctionKind::Reciprocal, &Polynomial::from_ints(&[1, 0, -5])).unwrap();
        assert!((d.0 - GOLDEN_SQ).abs() < 1e-13);
        let d = distance(&RootFunctionKind::Mahler, &Polynomial::from_ints(&[7])).unwrap();
        assert_eq!(d.0, 7.0);
        assert_eq!(distance(&RootFunctionKind::Mahler, &Polynomial::zero()).unwrap().0, 0.0);
    }

    #[test]
    fn monic_restriction_examples() {
        let m = RootFunctionKind::Mahler;
        assert_eq!(monic_restriction(&m, &[c(0.5, 0.0)]).unwrap(), 1.0);
        assert_eq!(monic_restriction(&m, &[c(-3.0, 0.0)]).unwrap(), 3.0);
        let r = monic_restriction(&RootFunctionKind::Reciprocal, &[c(-3.0, 0.0)]).unwrap();
        assert!((r - GOLDEN_SQ).abs() < 1e-14);
    }

    #[test]
    fn asymptotics() {
        assert_eq!(asymptotic_check(&RootFunctionKind::Mahler, 1e6, 100), 0.0);
        assert!(asymptotic_check(&RootFunctionKind::Reciprocal, 1e6, 100) <= 2e-6);
        let half = RootFunctionKind::t_reciprocal(1, 2).unwrap();
        assert!(asymptotic_check(&half, 1e6, 100) <= 2e-6);
    }

    #[test]
    fn root_bound_examples() {
        assert_eq!(root_bound(&RootFunctionKind::Mahler, 5.0), 5.0);
        assert_eq!(root_bound(&RootFunctionKind::Reciprocal, 5.0), 6.0);
        assert_eq!(root_bound(&RootFunctionKind::t_reciprocal(0, 1).unwrap(), 5.0), 5.0);
    }

    #[test]
    fn t_parameter_range() {
        assert!(TParameter::from_ratio(3, 2).is_err());
        assert!(TParameter::from_ratio(-1, 2).is_err());
        assert!(TParameter::from_ratio(1, 0).is_err());
    }

    #[test]
    fn pullback_endpoints_agree_pointwise() {
        let t1 = RootFunctionKind::t_reciprocal(1, 1).unwrap();
        let t0 = RootFunctionKind::t_reciprocal(0, 1).unwrap();
        for i in 0..30 {
            for j in 0..30 {
                let z = c(-4.0 + 0.27 * i as f64, -4.0 + 0.27 * j as f64);
                assert!((t1.root_value(z) - RootFunctionKind::Reciprocal.root_value(z)).abs() <= 1e-12);
                assert!((t0.root_value(z) - RootFunctionKind::Mahler.root_value(z)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn growth_ratio_bounds_samples() {
        for kind in [
            RootFunctionKind::Mahler,
            RootFunctionKind::Reciprocal,
            RootFunctionKind::t_reciprocal(1, 2).unwrap(),
        ] {
            let bound = kind.growth_ratio();
            for k in 0..2000 {
                let z = Complex64::from_polar(0.01 * k as f64, 0.37 * k as f64);
                assert!(z.norm().max(1.0) / kind.root_value(z) <= bound + 1e-12);
            }
        }
    }

    #[test]
    fn custom_kind() {
        let sq = CustomRootFunction::new("sq", |z: Complex64| (z.norm_sqr() + 1.0).sqrt(), 1.0, 1.0).unwrap();
        let kind = RootFunctionKind::Custom(sq);
        assert!(kind.is_even());
        assert_eq!(kind.root_bound(5.0), 5.0);
        assert!((kind.root_value(c(0.0, 0.0)) - 1.0).abs() < 1e-15);
        let lopsided = CustomRootFunction::new("l", |z: Complex64| (z.re + 3.0).abs().max(1.0), 0.5, 6.0).unwrap();
        assert!(!RootFunctionKind::Custom(lopsided).is_even());
    }

    #[test]
    fn ellipse_radius_axes() {
        assert!((ellipse_radius(0.5, 0.0) - 1.5).abs() < 1e-15);
        assert!((ellipse_radius(0.5, PI / 2.0) - 0.5).abs() < 1e-15);
        assert!((ellipse_radius(0.0, 1.234) - 1.0).abs() < 1e-15);
    }
}
