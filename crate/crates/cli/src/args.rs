use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "mdist", version, about = "Multiplicative distance functions on polynomials")]
pub struct Cli {
    /// Emit a JSON record instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (defaults to MDIST_THREADS, then the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Include wall-clock timings in the output.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance of one polynomial.
    Eval(EvalArgs),
    /// Moment function in closed form or by numerical integration.
    Moment(MomentArgs),
    /// Volume of the star body of polynomials with distance at most 1.
    Volume(VolumeArgs),
    /// Count reciprocal integer polynomials of bounded Mahler measure.
    Count(CountArgs),
    /// Zeros and poles of the moment functions of mu_t as CSV.
    Trajectory(TrajectoryArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// mahler, reciprocal or trec:<t> with rational t in [0, 1].
    #[arg(long)]
    pub kind: String,
    /// Coefficients from the leading one down, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    /// Root-finder tolerance.
    #[arg(long, default_value_t = 1e-13)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentKind {
    #[value(name = "H")]
    H,
    #[value(name = "F")]
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentRoute {
    Closed,
    Numeric,
    Oracle,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[arg(long = "type", value_enum)]
    pub moment: MomentKind,
    #[arg(long)]
    pub kind: String,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = MomentRoute::Closed)]
    pub route: MomentRoute,
    /// Evaluation point; rational (e.g. 5/2) or decimal.
    #[arg(long)]
    pub s: Option<String>,
    /// Relative tolerance for the numeric route.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VolumeRouteArg {
    Closed,
    Numeric,
    Mc,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[arg(long)]
    pub kind: String,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = FieldArg::Real)]
    pub field: FieldArg,
    #[arg(long, value_enum, default_value_t = VolumeRouteArg::Closed)]
    pub route: VolumeRouteArg,
    /// Monte Carlo samples; accepts forms like 1e6.
    #[arg(long, value_parser = parse_count, default_value = "1000000")]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long = "T")]
    pub t: f64,
    /// Allow degrees above 5 or bounds above 100.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    #[arg(long = "type", value_enum)]
    pub moment: MomentKind,
    #[arg(long = "N")]
    pub n: usize,
    /// Grid `start:end:step` or a comma-separated list of values in (0, 1).
    #[arg(long = "t", default_value = "0.05:0.95:0.05")]
    pub grid: String,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Largest degree for the quadrature and route suites.
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Relative tolerance for the quadrature and route suites.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, value_parser = parse_count, default_value = "1000000")]
    pub samples: u64,
    #[arg(long, default_value_t = 20240607)]
    pub seed: u64,
}

/// A positive integer written plainly or in exponent form.
pub fn parse_count(text: &str) -> Result<u64, String> {
    if let Ok(v) = text.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = text.parse().map_err(|_| format!("not a count: {text}"))?;
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(format!("not a whole number: {text}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn counts_in_exponent_form() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("250"), Ok(250));
        assert!(parse_count("1.5").is_err());
    }
}
