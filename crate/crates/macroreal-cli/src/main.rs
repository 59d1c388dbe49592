//! Command-line surface of the macroreal toolkit: evaluate criteria,
//! maximise violations, solve critical sharpness, scan the sharpness range
//! to CSV, run the exact classical certification, and cross-check with
//! Monte Carlo sampling.
//!
//! Exit codes: 0 on success, 1 on runtime or certification failure, 2 on
//! usage errors. Error paths print to standard error only.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use macroreal::inequalities::{lookup, wlgi3_catalog, Criterion};
use macroreal::montecarlo::estimate_inequality;
use macroreal::optimize::{
    critical_lambda, lgi_critical_lambda, maximize_violation, GridResolution,
};
use macroreal::oracle::certify_catalog;
use macroreal::qm::ModelParams;

#[derive(Parser)]
#[command(
    name = "macroreal",
    version,
    about = "Macrorealism criteria for an oscillating two-level system \
             under sharp and unsharp measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a criterion at one parameter point
    Eval(EvalArgs),
    /// Maximise a criterion's violation over the state and evolution parameters
    Maximize(MaximizeArgs),
    /// Solve for the critical sharpness of a criterion
    CriticalLambda(CriticalLambdaArgs),
    /// Scan the sharpness range and write a CSV comparison table
    Scan(ScanArgs),
    /// Certify every catalog bound with the exact classical oracle
    Validate,
    /// Monte Carlo estimate of a criterion with a propagated standard error
    Mc(McArgs),
}

/// A parameter point shared by several subcommands. Angles are radians
/// unless `--degrees` is given.
#[derive(Args)]
struct PointArgs {
    /// Initial-state polar angle in [0, pi/2]
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Initial-state azimuthal phase in [0, 2*pi]
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Evolution phase between adjacent measurement times
    #[arg(long)]
    tau: f64,
    /// Measurement sharpness in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Interpret theta, phi, and tau as degrees
    #[arg(long)]
    degrees: bool,
}

impl PointArgs {
    fn params(&self) -> Result<ModelParams, CliError> {
        let scale = if self.degrees { PI / 180.0 } else { 1.0 };
        ModelParams::new(
            self.theta * scale,
            self.phi * scale,
            self.tau * scale,
            self.lambda,
        )
        .map_err(CliError::usage)
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Criterion name: wlgi3-4, wlgi3-5a..wlgi3-5k (optionally -flipped),
    /// wlgi-n:<n>, lgi:<n>, or nsit
    spec: String,
    #[command(flatten)]
    point: PointArgs,
    /// Emit a JSON object instead of the key=value line
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MaximizeArgs {
    /// Criterion name
    spec: String,
    /// Measurement sharpness in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Coarse-grid resolution for theta
    #[arg(long, default_value_t = GridResolution::default().theta)]
    theta_points: usize,
    /// Full-phi confirmation sweep resolution
    #[arg(long, default_value_t = GridResolution::default().phi)]
    phi_points: usize,
    /// Coarse-grid resolution for tau
    #[arg(long, default_value_t = GridResolution::default().tau)]
    tau_points: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CriticalLambdaArgs {
    /// Criterion name; lgi:<n> uses the closed form
    spec: String,
    /// Fixed point to solve at (all three or none; the default maximises
    /// the sharp violation first and solves at its optimum)
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 0.05)]
    lambda_min: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda_max: f64,
    /// Number of rows; sharpness values are equally spaced inclusive
    #[arg(long, default_value_t = 20)]
    steps: usize,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct McArgs {
    /// Criterion name
    spec: String,
    #[command(flatten)]
    point: PointArgs,
    /// Trajectories per event sub-ensemble
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Seed for the deterministic generator
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(err: impl std::fmt::Display) -> Self {
        Self {
            message: err.to_string(),
            code: 2,
        }
    }

    fn runtime(err: impl std::fmt::Display) -> Self {
        Self {
            message: err.to_string(),
            code: 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Maximize(args) => cmd_maximize(args),
        Command::CriticalLambda(args) => cmd_critical_lambda(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Validate => cmd_validate(),
        Command::Mc(args) => cmd_mc(args),
    }
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode, CliError> {
    let criterion = lookup(&args.spec).map_err(CliError::usage)?;
    let params = args.point.params()?;
    let result = criterion.evaluate(&params);
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "spec": criterion.name(),
                "value": result.value,
                "bound": result.bound,
                "margin": result.margin,
            })
        );
    } else {
        println!(
            "{} value={:.6} bound={:.6} margin={:.6}",
            criterion.name(),
            result.value,
            result.bound,
            result.margin
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_maximize(args: MaximizeArgs) -> Result<ExitCode, CliError> {
    let grid = GridResolution {
        theta: args.theta_points,
        phi: args.phi_points,
        tau: args.tau_points,
    };
    let report = maximize_violation(&args.spec, args.lambda, grid).map_err(CliError::usage)?;
    let p = report.best_params;
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "spec": args.spec,
                "lambda": args.lambda,
                "best_value": report.best_value,
                "theta": p.theta(),
                "phi": p.phi(),
                "tau": p.tau(),
                "gradient_norm": report.gradient_norm_at_optimum,
                "refinement_iterations": report.refinement_iterations,
            })
        );
    } else {
        println!(
            "{} lambda={:.6} best_value={:.6} theta={:.6} phi={:.6} tau={:.6} gradient_norm={:.3e}",
            args.spec,
            args.lambda,
            report.best_value,
            p.theta(),
            p.phi(),
            p.tau(),
            report.gradient_norm_at_optimum
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_critical_lambda(args: CriticalLambdaArgs) -> Result<ExitCode, CliError> {
    // Correlator chains have a closed-form answer.
    if let Criterion::Lgi(n) = lookup(&args.spec).map_err(CliError::usage)? {
        let value = lgi_critical_lambda(n).map_err(CliError::usage)?;
        if args.json {
            println!(
                "{}",
                serde_json::json!({ "spec": args.spec, "critical_lambda": value })
            );
        } else {
            println!("{} critical_lambda={:.6}", args.spec, value);
        }
        return Ok(ExitCode::SUCCESS);
    }

    let (theta, phi, tau) = match (args.theta, args.phi, args.tau) {
        (Some(theta), Some(phi), Some(tau)) => (theta, phi, tau),
        (None, None, None) => {
            let report = maximize_violation(&args.spec, 1.0, GridResolution::default())
                .map_err(CliError::usage)?;
            let p = report.best_params;
            (p.theta(), p.phi(), p.tau())
        }
        _ => {
            return Err(CliError::usage(
                "provide --theta, --phi, and --tau together, or none to solve at the sharp optimum",
            ))
        }
    };
    let result = critical_lambda(&args.spec, theta, phi, tau).map_err(CliError::usage)?;
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "spec": args.spec,
                "critical_lambda": result.lambda,
                "violated_at_full_sharpness": result.violated_at_full_sharpness,
                "theta": theta,
                "phi": phi,
                "tau": tau,
            })
        );
    } else {
        println!(
            "{} critical_lambda={:.6} violated_at_full_sharpness={}",
            args.spec, result.lambda, result.violated_at_full_sharpness
        );
    }
    Ok(ExitCode::SUCCESS)
}

/// One CSV row of the sharpness scan.
struct ScanRow {
    lambda: f64,
    wlgi3_max: f64,
    lgi3_margin: f64,
    lgi4_margin: f64,
    nsit_max: f64,
}

fn scan_row(lambda: f64, catalog_names: &[String]) -> ScanRow {
    use rayon::prelude::*;

    // Catalog maximum with the cheap grid; refinement still converges.
    let wlgi3_max = catalog_names
        .par_iter()
        .map(|name| {
            maximize_violation(name, lambda, GridResolution::coarse())
                .expect("catalog names resolve")
                .best_value
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);

    // The correlator chain peaks at tau = pi/(2n) regardless of the state.
    let chain_margin = |n: usize| {
        let params = ModelParams::new(0.0, 0.0, PI / (2.0 * n as f64), lambda)
            .expect("valid chain point");
        macroreal::inequalities::lgi_kn(n, &params)
            .expect("n >= 3")
            .margin
    };

    // The signalling residual peaks at theta = pi/4, phi = pi/2, tau = pi/4.
    let nsit_params = ModelParams::new(FRAC_PI_4, FRAC_PI_2, FRAC_PI_4, lambda)
        .expect("valid residual point");

    ScanRow {
        lambda,
        wlgi3_max,
        lgi3_margin: chain_margin(3),
        lgi4_margin: chain_margin(4),
        nsit_max: macroreal::inequalities::nsit_delta(&nsit_params),
    }
}

fn cmd_scan(args: ScanArgs) -> Result<ExitCode, CliError> {
    use rayon::prelude::*;

    if !(args.lambda_min > 0.0 && args.lambda_min < args.lambda_max && args.lambda_max <= 1.0) {
        return Err(CliError::usage(
            "require 0 < --lambda-min < --lambda-max <= 1",
        ));
    }
    if args.steps < 2 {
        return Err(CliError::usage("require --steps >= 2"));
    }

    let threads = std::env::var("MACROREAL_THREADS")
        .ok()
        .and_then(|value| value.parse::<usize>().ok())
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(CliError::runtime)?;

    let lambdas: Vec<f64> = (0..args.steps)
        .map(|i| {
            args.lambda_min
                + (args.lambda_max - args.lambda_min) * i as f64 / (args.steps - 1) as f64
        })
        .collect();
    let catalog_names: Vec<String> = wlgi3_catalog()
        .iter()
        .map(|spec| spec.name().to_string())
        .collect();

    let rows: Vec<ScanRow> = pool.install(|| {
        lambdas
            .par_iter()
            .map(|&lambda| scan_row(lambda, &catalog_names))
            .collect()
    });

    let file = File::create(&args.out)
        .map_err(|err| CliError::runtime(format!("cannot write {}: {err}", args.out.display())))?;
    let mut writer = BufWriter::new(file);
    let mut emit = || -> std::io::Result<()> {
        writeln!(writer, "lambda,wlgi3_max,lgi3_margin,lgi4_margin,nsit_max")?;
        for row in &rows {
            writeln!(
                writer,
                "{:.6},{:.6},{:.6},{:.6},{:.6}",
                row.lambda, row.wlgi3_max, row.lgi3_margin, row.lgi4_margin, row.nsit_max
            )?;
        }
        writer.flush()
    };
    emit().map_err(|err| CliError::runtime(format!("cannot write {}: {err}", args.out.display())))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate() -> Result<ExitCode, CliError> {
    let report = certify_catalog();
    print!("{report}");

    let passed = |prefix: &str| {
        report
            .entries
            .iter()
            .filter(|e| e.name.starts_with(prefix) && e.passed)
            .count()
    };
    let total = |prefix: &str| {
        report
            .entries
            .iter()
            .filter(|e| e.name.starts_with(prefix))
            .count()
    };
    println!(
        "{}/{} WLGI-3 certified, wlgi-n 3..8 certified {}/{}, lgi 3..8 bounds certified {}/{}",
        passed("wlgi3-"),
        total("wlgi3-"),
        passed("wlgi-n:"),
        total("wlgi-n:"),
        passed("lgi:"),
        total("lgi:")
    );
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_mc(args: McArgs) -> Result<ExitCode, CliError> {
    let params = args.point.params()?;
    let (estimate, std_error) = estimate_inequality(&args.spec, &params, args.samples, args.seed)
        .map_err(CliError::usage)?;
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "spec": args.spec,
                "estimate": estimate,
                "std_error": std_error,
                "samples": args.samples,
                "seed": args.seed,
            })
        );
    } else {
        println!(
            "{} estimate={:.6} std_error={:.6} samples={} seed={}",
            args.spec, estimate, std_error, args.samples, args.seed
        );
    }
    Ok(ExitCode::SUCCESS)
}
