use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};
use thiserror::Error;

use mdist::counting::{self, CoefficientField};
use mdist::distfun::{RootFunctionKind, TParameter};
use mdist::forms::MonicFamily;
use mdist::moments::{
    self, MomentClosedForm, MomentType, OracleRule, TrajectoryPoint, Volume, VolumeRoute,
};
use mdist::polyroots::{roots, Polynomial};
use mdist::quadrature::QuadratureSpec;
use mdist::verify::{self, Suite, VerifyOptions};

use crate::args::{
    Cli, Command, CountArgs, EvalArgs, FieldArg, MomentArgs, MomentKind, MomentRoute, TrajectoryArgs, VerifyArgs,
    VolumeArgs, VolumeRouteArg,
};
use crate::output::{csv_row, float, float_text, integers, rational, record, render};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] mdist::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    /// Carries the full report so it can still be printed.
    #[error("verification failed")]
    VerificationFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use mdist::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Library(E::BudgetExceeded(_)) => 4,
            CliError::Library(
                E::ZeroPolynomial
                | E::NonFiniteCoefficient
                | E::InvalidArgument(_)
                | E::ConvergenceViolation { .. }
                | E::SymmetryViolation(_)
                | E::NotReciprocal
                | E::OddDegree(_),
            ) => 2,
            CliError::Library(_) | CliError::Io(_) => 3,
            CliError::VerificationFailed(_) => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<String> {
    let start = Instant::now();
    let (mut rec, text) = match &cli.command {
        Command::Eval(a) => eval(a)?,
        Command::Moment(a) => moment(a)?,
        Command::Volume(a) => volume(a, cli.threads)?,
        Command::Count(a) => count(a, cli.threads, cli.timing)?,
        Command::Trajectory(a) => return trajectory(a, cli),
        Command::Verify(a) => return run_verify(a, cli),
    };
    if cli.timing {
        rec.insert("elapsed_seconds".into(), float(start.elapsed().as_secs_f64()));
    }
    if cli.json {
        Ok(render(rec))
    } else if cli.timing {
        Ok(format!("{text}elapsed: {:.3} s\n", start.elapsed().as_secs_f64()))
    } else {
        Ok(text)
    }
}

pub fn parse_kind(text: &str) -> CliResult<RootFunctionKind> {
    match text {
        "mahler" => Ok(RootFunctionKind::Mahler),
        "reciprocal" => Ok(RootFunctionKind::Reciprocal),
        other => {
            let t = other
                .strip_prefix("trec:")
                .ok_or_else(|| CliError::Usage(format!("unknown kind '{other}'; use mahler, reciprocal or trec:<t>")))?;
            let t = parse_rational(t)?;
            Ok(RootFunctionKind::TReciprocal(TParameter::new(t)?))
        }
    }
}

/// Parses `p/q`, an integer, or a plain decimal into an exact rational.
pub fn parse_rational(text: &str) -> CliResult<BigRational> {
    let bad = || CliError::Usage(format!("not a rational number: '{text}'"));
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty()
        || !whole.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let value = BigRational::new(digits, scale);
    Ok(if negative { -value } else { value })
}

fn parse_poly(text: &str) -> CliResult<Polynomial> {
    let coeffs = text
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad coefficient '{c}'")))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    if coeffs.is_empty() {
        return Err(CliError::Usage("empty polynomial".into()));
    }
    let p = Polynomial::from_real(&coeffs);
    if p.is_zero() {
        return Err(mdist::Error::ZeroPolynomial.into());
    }
    Ok(p)
}

fn complex_json(re: f64, im: f64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), float(re));
    m.insert("im".into(), float(im));
    Value::Object(m)
}

type Output = (Map<String, Value>, String);

fn eval(a: &EvalArgs) -> CliResult<Output> {
    let kind = parse_kind(&a.kind)?;
    let p = parse_poly(&a.poly)?;
    let rs = roots(&p, a.tol)?;
    let value = rs.leading.norm() * rs.roots.iter().map(|&r| kind.root_value(r)).product::<f64>();
    let mut rec = record("eval");
    rec.insert("kind".into(), Value::String(kind.label()));
    rec.insert("distance".into(), float(value));
    rec.insert("roots".into(), Value::Array(rs.roots.iter().map(|r| complex_json(r.re, r.im)).collect()));
    let mut text = format!("distance: {}\n", float_text(value));
    for r in &rs.roots {
        let _ = writeln!(text, "root: {} {:+e}i", float_text(r.re), r.im);
    }
    Ok((rec, text))
}

fn moment_type(m: MomentKind) -> MomentType {
    match m {
        MomentKind::H => MomentType::H,
        MomentKind::F => MomentType::F,
    }
}

fn require_s(a: &MomentArgs) -> CliResult<f64> {
    let s = a
        .s
        .as_deref()
        .ok_or_else(|| CliError::Usage("this route needs --s".into()))?;
    let q = parse_rational(s)?;
    Ok(num_traits::ToPrimitive::to_f64(&q).unwrap_or(f64::NAN))
}

fn moment(a: &MomentArgs) -> CliResult<Output> {
    let kind = parse_kind(&a.kind)?;
    let mt = moment_type(a.moment);
    let mut rec = record("moment");
    rec.insert("kind".into(), Value::String(kind.label()));
    rec.insert("type".into(), Value::String(mt.to_string()));
    rec.insert("N".into(), Value::Number(a.n.into()));
    let mut text = String::new();
    match a.route {
        MomentRoute::Closed => {
            rec.insert("route".into(), Value::String("closed".into()));
            let form = MomentClosedForm::for_kind(&kind, mt, a.n)?;
            let expanded = form.expanded();
            rec.insert("pi_power".into(), Value::Number(form.pi_power.into()));
            rec.insert("constant".into(), rational(&form.constant));
            rec.insert("factored".into(), Value::String(form.to_string()));
            rec.insert("numerator".into(), integers(expanded.body.numerator().coeffs()));
            rec.insert("denominator".into(), integers(expanded.body.denominator().coeffs()));
            let _ = writeln!(text, "{}_{}({}; s) = {}", mt, a.n, kind.label(), form);
            if let Some(s) = a.s.as_deref() {
                let s_exact = parse_rational(s)?;
                let exact = form.eval_rational_part(&s_exact)?;
                let s_f = num_traits::ToPrimitive::to_f64(&s_exact).unwrap_or(f64::NAN);
                let value = form.eval_f64(s_f);
                rec.insert("s".into(), rational(&s_exact));
                rec.insert("value_times_pi^-k".into(), rational(&exact));
                rec.insert("value".into(), float(value));
                let _ = writeln!(text, "at s = {s_exact}: pi^{} * {exact} = {}", form.pi_power, float_text(value));
            }
        }
        MomentRoute::Numeric => {
            rec.insert("route".into(), Value::String("numeric".into()));
            let s = require_s(a)?;
            let family = MonicFamily::monomials(a.n);
            let fine = QuadratureSpec {
                rel_tol: a.tol,
                ..QuadratureSpec::default()
            };
            let coarse = QuadratureSpec {
                rel_tol: (a.tol * 1e3).min(1e-3),
                ..fine
            };
            let route = |spec: &QuadratureSpec| match mt {
                MomentType::H => moments::h_numeric(&kind, s, &family, spec),
                MomentType::F => moments::f_numeric(&kind, s, &family, spec),
            };
            let value = route(&fine)?;
            let error = (value - route(&coarse)?).abs();
            rec.insert("s".into(), float(s));
            rec.insert("value".into(), float(value));
            rec.insert("error_estimate".into(), float(error));
            let _ = writeln!(text, "value: {} +- {:.1e}", float_text(value), error);
            if mt == MomentType::F && kind.is_even() {
                let det = moments::f_numeric_det_route(&kind, s, &family, &fine)?;
                rec.insert("det_route".into(), float(det));
                let _ = writeln!(text, "det route: {}", float_text(det));
            }
        }
        MomentRoute::Oracle => {
            rec.insert("route".into(), Value::String("oracle".into()));
            let s = require_s(a)?;
            let rule = OracleRule::default();
            let est = match mt {
                MomentType::H => moments::rootspace_oracle_h(&kind, s, a.n, &rule)?,
                MomentType::F => moments::rootspace_oracle_f(&kind, s, a.n, &rule)?,
            };
            rec.insert("s".into(), float(s));
            rec.insert("value".into(), float(est.value));
            rec.insert("error_estimate".into(), float(est.delta));
            let _ = writeln!(text, "value: {} +- {:.1e}", float_text(est.value), est.delta);
        }
    }
    Ok((rec, text))
}

fn volume(a: &VolumeArgs, threads: Option<usize>) -> CliResult<Output> {
    let kind = parse_kind(&a.kind)?;
    let mut rec = record("volume");
    rec.insert("kind".into(), Value::String(kind.label()));
    rec.insert("N".into(), Value::Number(a.n.into()));
    let field = match a.field {
        FieldArg::Real => CoefficientField::Real,
        FieldArg::Complex => CoefficientField::Complex,
    };
    rec.insert(
        "field".into(),
        Value::String(if field == CoefficientField::Real { "real" } else { "complex" }.into()),
    );
    let spec = QuadratureSpec {
        rel_tol: a.tol,
        ..QuadratureSpec::default()
    };
    let text;
    match a.route {
        VolumeRouteArg::Closed | VolumeRouteArg::Numeric => {
            let route = if a.route == VolumeRouteArg::Closed {
                VolumeRoute::Closed
            } else {
                VolumeRoute::Numeric
            };
            rec.insert(
                "route".into(),
                Value::String(if route == VolumeRoute::Closed { "closed" } else { "numeric" }.into()),
            );
            let v = match field {
                CoefficientField::Real => moments::star_volume_real(&kind, a.n, route, &spec)?,
                CoefficientField::Complex => moments::star_volume_complex(&kind, a.n, route, &spec)?,
            };
            match &v {
                Volume::Exact { pi_power, value } => {
                    rec.insert("pi_power".into(), Value::Number((*pi_power).into()));
                    rec.insert("value_times_pi^-k".into(), rational(value));
                    text = format!("volume: pi^{pi_power} * {value} = {}\n", float_text(v.to_f64()));
                }
                Volume::Approximate(x) => text = format!("volume: {}\n", float_text(*x)),
            }
            rec.insert("value".into(), float(v.to_f64()));
        }
        VolumeRouteArg::Mc => {
            rec.insert("route".into(), Value::String("mc".into()));
            let e = counting::mc_star_volume(&kind, a.n, field, a.samples, a.seed, threads)?;
            rec.insert("value".into(), float(e.value));
            rec.insert("std_error".into(), float(e.std_error));
            rec.insert("samples".into(), Value::Number(e.samples.into()));
            rec.insert("seed".into(), Value::Number(e.seed.into()));
            text = format!(
                "volume: {} +- {} ({} samples, seed {})\n",
                float_text(e.value),
                float_text(e.std_error),
                e.samples,
                e.seed
            );
        }
    }
    Ok((rec, text))
}

fn count(a: &CountArgs, threads: Option<usize>, timing: bool) -> CliResult<Output> {
    let r = counting::enumerate_reciprocal(a.n, a.t, threads, a.force)?;
    let mut rec = record("count");
    rec.insert("N".into(), Value::Number(r.n.into()));
    rec.insert("T".into(), float(r.t));
    rec.insert("exact".into(), Value::Number(r.exact_count.into()));
    rec.insert("predicted".into(), float(r.predicted));
    rec.insert("leading".into(), rational(&r.predicted_leading));
    rec.insert(
        "per_degree".into(),
        Value::Array(r.per_degree.iter().map(|&c| Value::Number(c.into())).collect()),
    );
    if timing {
        rec.insert("enumeration_seconds".into(), float(r.elapsed.as_secs_f64()));
    }
    let text = format!(
        "exact: {}\npredicted: {} ({} * T^{})\n",
        r.exact_count,
        float_text(r.predicted),
        r.predicted_leading,
        r.n / 2 + 1
    );
    Ok((rec, text))
}

/// Expands `start:end:step` (inclusive, exact arithmetic) or a comma list.
pub fn parse_grid(text: &str) -> CliResult<Vec<BigRational>> {
    let parts: Vec<&str> = text.split(':').collect();
    let values = match parts.as_slice() {
        [start, end, step] => {
            let (start, end, step) = (parse_rational(start)?, parse_rational(end)?, parse_rational(step)?);
            if !step.is_positive() {
                return Err(CliError::Usage("grid step must be positive".into()));
            }
            let mut out = Vec::new();
            let mut t = start;
            while t <= end {
                out.push(t.clone());
                t += &step;
                if out.len() > 100_000 {
                    return Err(CliError::Usage("grid has too many points".into()));
                }
            }
            out
        }
        [_] => text.split(',').map(parse_rational).collect::<CliResult<Vec<_>>>()?,
        _ => return Err(CliError::Usage(format!("bad grid '{text}'"))),
    };
    if values.is_empty() {
        return Err(CliError::Usage("empty grid".into()));
    }
    if values.iter().any(|t| !t.is_positive() || t >= &BigRational::one()) {
        return Err(CliError::Usage("grid values must lie strictly between 0 and 1".into()));
    }
    Ok(values)
}

fn trajectory(a: &TrajectoryArgs, cli: &Cli) -> CliResult<String> {
    let grid = parse_grid(&a.grid)?;
    let points: Vec<TrajectoryPoint> = match a.moment {
        MomentKind::H => moments::trajectory_h(a.n, &grid)?,
        MomentKind::F => {
            let spec = QuadratureSpec::default();
            let tr = counting::with_thread_budget(cli.threads, || moments::trajectory_f(a.n, &grid, &spec))??;
            for t in &tr.unbracketed {
                eprintln!("warning: fewer than {} negative zeros bracketed at t = {}", a.n / 2, float_text(*t));
            }
            tr.points
        }
    };
    let mut csv = csv_row(&["t", "feature", "index", "re_s", "im_s"]);
    for p in &points {
        csv.push_str(&csv_row(&[
            float_text(p.t),
            p.feature.as_str().to_string(),
            p.index.to_string(),
            float_text(p.location.re),
            float_text(p.location.im),
        ]));
    }
    match &a.out {
        Some(path) => {
            std::fs::write(path, &csv)?;
            let mut rec = record("trajectory");
            rec.insert("rows".into(), Value::Number(points.len().into()));
            rec.insert("out".into(), Value::String(path.display().to_string()));
            Ok(if cli.json {
                render(rec)
            } else {
                format!("wrote {} rows to {}\n", points.len(), path.display())
            })
        }
        None => Ok(csv),
    }
}

fn run_verify(a: &VerifyArgs, cli: &Cli) -> CliResult<String> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        a.suite
            .split(',')
            .map(|s| s.trim().parse::<Suite>().map_err(|e| CliError::Usage(e.to_string())))
            .collect::<CliResult<_>>()?
    };
    let options = VerifyOptions {
        max_n: a.n,
        rel_tol: a.tol,
        trials: a.trials,
        samples: a.samples,
        seed: a.seed,
        threads: cli.threads,
    };
    let mut all_passed = true;
    let mut text = String::new();
    let mut reports = Vec::new();
    for suite in suites {
        let report = verify::run_suite(suite, &options);
        all_passed &= report.passed();
        for c in &report.checks {
            let _ = writeln!(text, "{} [{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, suite, c.name, c.detail);
        }
        let passed = report.checks.iter().filter(|c| c.passed).count();
        let _ = write!(text, "suite {suite}: {passed}/{} checks passed", report.checks.len());
        if cli.timing {
            let _ = write!(text, " in {:.3} s", report.elapsed.as_secs_f64());
        }
        text.push('\n');
        let mut r = Map::new();
        r.insert("suite".into(), Value::String(suite.to_string()));
        r.insert("passed".into(), Value::Bool(report.passed()));
        r.insert(
            "checks".into(),
            Value::Array(
                report
                    .checks
                    .iter()
                    .map(|c| {
                        let mut m = Map::new();
                        m.insert("name".into(), Value::String(c.name.clone()));
                        m.insert("passed".into(), Value::Bool(c.passed));
                        m.insert("detail".into(), Value::String(c.detail.clone()));
                        Value::Object(m)
                    })
                    .collect(),
            ),
        );
        if cli.timing {
            r.insert("elapsed_seconds".into(), float(report.elapsed.as_secs_f64()));
        }
        reports.push(Value::Object(r));
    }
    let out = if cli.json {
        let mut rec = record("verify");
        rec.insert("passed".into(), Value::Bool(all_passed));
        rec.insert("suites".into(), Value::Array(reports));
        render(rec)
    } else {
        text
    };
    if all_passed {
        Ok(out)
    } else {
        Err(CliError::VerificationFailed(out))
    }
}
