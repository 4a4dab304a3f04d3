use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use ellq::config::{self, Overrides};
use ellq::report::{now_unix_ms, Report, Timing};
use ellq::suites::{run_suite, SuiteConfig, SUITES};
use ellq::{EllError, Params};

/// Run a verification suite and report one residual per check.
#[derive(Parser, Debug)]
#[command(name = "ellq-verify", version)]
struct Cli {
    /// One of theta, rmatrix, relations, exterior, minors, cherednik, laplace, cobraiding,
    /// determinant, antipode, all.
    suite: String,
    /// Restrict every size loop to this n (2..=4).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Dynamical sample points per comparison.
    #[arg(long)]
    samples: Option<usize>,
    /// Equality tolerance; every check tolerance scales with it (reference 1e-8).
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Flat key=value file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (0 = available parallelism).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("ellq-verify: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.suite != "all" && !SUITES.contains(&cli.suite.as_str()) {
        return usage_error(EllError::UnknownSuite(format!(
            "{} (expected one of {}, all)",
            cli.suite,
            SUITES.join(", ")
        )));
    }
    let file = match &cli.config {
        Some(path) => match config::load(path) {
            Ok(o) => o,
            Err(e) => return usage_error(e),
        },
        None => Overrides::default(),
    };
    let flags = Overrides {
        p: cli.p,
        q: cli.q,
        n: cli.n,
        seed: cli.seed,
        samples: cli.samples,
        eq_tol: cli.tol,
        ..Overrides::default()
    };
    let merged = file.overlay(&flags);
    let params = match merged.apply(Params::default()) {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    let cfg = SuiteConfig {
        params,
        n_override: merged.n,
        threads: cli.threads,
    };

    let started = now_unix_ms();
    let clock = Instant::now();
    let report = match run_suite(&cli.suite, &cfg) {
        Ok(r) => r,
        Err(e @ (EllError::Config(_) | EllError::UnknownSuite(_))) => return usage_error(e),
        Err(e) => {
            eprintln!("ellq-verify: {e}");
            return ExitCode::from(1);
        }
    };
    let timing = Timing {
        started_unix_ms: started,
        total_ms: clock.elapsed().as_millis(),
    };

    for c in &report.checks {
        let residual = c
            .residual
            .map_or_else(|| "n/a".to_string(), |r| format!("{r:.3e}"));
        let status = if c.pass { "ok  " } else { "FAIL" };
        print!(
            "{status} {:<44} residual {residual:>10}  tol {:.1e}  {:>6} ms",
            c.id, c.tol, c.ms
        );
        match &c.error {
            Some(err) => println!("  ({err})"),
            None => println!(),
        }
    }
    let passed = report.checks.iter().filter(|c| c.pass).count();
    println!(
        "{}: {passed}/{} checks passed in {} ms",
        report.suite,
        report.checks.len(),
        timing.total_ms
    );

    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, Report::new(&report, timing).to_json()) {
            return usage_error(format!("cannot write report {}: {e}", path.display()));
        }
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
