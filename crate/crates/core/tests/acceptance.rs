//! Acceptance run: one PASS/FAIL line per criterion, with every tolerance and
//! time limit written out here rather than inherited from library defaults.

use std::process::ExitCode;
use std::time::Duration;

use mdist::verify::{run_suite, Suite, SuiteReport, VerifyOptions};

const SEED: u64 = 20240607;

struct Criterion {
    number: u32,
    title: &'static str,
    suite: Suite,
    options: VerifyOptions,
    time_limit: Duration,
}

fn options(max_n: Option<usize>, rel_tol: Option<f64>, trials: Option<usize>) -> VerifyOptions {
    VerifyOptions {
        max_n,
        rel_tol,
        trials,
        samples: 1_000_000,
        seed: SEED,
        threads: None,
    }
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            number: 1,
            title: "counting table, exact",
            suite: Suite::Table,
            options: options(None, None, None),
            time_limit: Duration::from_secs(1),
        },
        Criterion {
            number: 2,
            title: "closed-form consistency, exact",
            suite: Suite::Closed,
            options: options(None, None, None),
            time_limit: Duration::from_secs(30),
        },
        Criterion {
            number: 3,
            title: "Pfaffian identities, 200 exact trials each",
            suite: Suite::Pfaffian,
            options: options(None, None, Some(200)),
            time_limit: Duration::from_secs(600),
        },
        Criterion {
            number: 4,
            title: "quadrature vs closed forms, rel. error <= 1e-6, N <= 4",
            suite: Suite::Quadrature,
            options: options(Some(4), Some(1e-6), None),
            // 16 evaluations at no more than 60 s each
            time_limit: Duration::from_secs(16 * 60),
        },
        Criterion {
            number: 5,
            title: "root-space oracle vs Gram route, rel. error <= 1e-4, N <= 3",
            suite: Suite::Routes,
            options: options(Some(3), Some(1e-4), None),
            time_limit: Duration::from_secs(600),
        },
        Criterion {
            number: 6,
            title: "enumeration vs asymptotics",
            suite: Suite::Counting,
            options: options(None, None, None),
            time_limit: Duration::from_secs(300),
        },
        Criterion {
            number: 7,
            title: "distribution functions, 1e6 samples, 3 sigma",
            suite: Suite::Distribution,
            options: options(None, None, None),
            time_limit: Duration::from_secs(600),
        },
        Criterion {
            number: 8,
            title: "trajectory structure",
            suite: Suite::Trajectory,
            options: options(None, None, None),
            time_limit: Duration::from_secs(600),
        },
        Criterion {
            number: 9,
            title: "distance axioms, 500 trials",
            suite: Suite::Axioms,
            options: options(None, None, Some(500)),
            time_limit: Duration::from_secs(600),
        },
    ]
}

fn print_failures(report: &SuiteReport) {
    for check in report.checks.iter().filter(|c| !c.passed) {
        println!("      failed: {}: {}", check.name, check.detail);
    }
}

fn main() -> ExitCode {
    let mut failures = 0;
    for criterion in criteria() {
        let report = run_suite(criterion.suite, &criterion.options);
        let checks_ok = report.passed();
        let in_time = report.elapsed <= criterion.time_limit;
        let passed = checks_ok && in_time;
        let ok_count = report.checks.iter().filter(|c| c.passed).count();
        println!(
            "{} criterion {}: {} ({}/{} checks, {:.2} s, limit {} s)",
            if passed { "PASS" } else { "FAIL" },
            criterion.number,
            criterion.title,
            ok_count,
            report.checks.len(),
            report.elapsed.as_secs_f64(),
            criterion.time_limit.as_secs(),
        );
        if !checks_ok {
            print_failures(&report);
        }
        if !in_time {
            println!("      over the time limit");
        }
        failures += usize::from(!passed);
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
