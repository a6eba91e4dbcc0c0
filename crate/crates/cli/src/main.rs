// `!(x < 1.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nonlocal_young::angle_solver::solve_theta;
use nonlocal_young::{AngleQuery, RegionSpec};
use nonlocal_young_cli::sweep::{self, TableFormat, DEFAULT_SIGMA_COUNT, DEFAULT_S_LIST};
use nonlocal_young_cli::verify::{self, Suite, VerifyOptions};
use nonlocal_young_cli::{check_angle_args, spec_for, CliError, CliResult};
use serde_json::json;

#[derive(Parser)]
#[command(name = "nlyoung", version, about = "Fractional Young's law contact angles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the contact angle θ(s, σ).
    Angle {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        sigma: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = AngleFormat::Text)]
        format: AngleFormat,
    },
    /// Tabulate θ and its two truncated expansions over an (s, σ) grid.
    Sweep {
        /// Comma-separated s values [default: 0.01,0.1,0.3,0.5,0.7,0.9,0.99]
        #[arg(long)]
        s_list: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SIGMA_COUNT)]
        sigma_count: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SweepFormat::Csv)]
        format: SweepFormat,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run a self-check suite; exits 0 only if every check passes.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// JSON file with {"E": shape, "Omega": shape} for the szero suite.
        #[arg(long)]
        regions: Option<PathBuf>,
        /// Adhesion coefficient for the szero suite [default: 0.5].
        #[arg(long, allow_negative_numbers = true)]
        sigma: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AngleFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepFormat {
    Csv,
    Json,
}

fn angle(s: f64, sigma: f64, tol: f64, format: AngleFormat) -> CliResult<()> {
    check_angle_args(s, sigma)?;
    let spec = spec_for(tol)?;
    let sol = solve_theta(AngleQuery::new(s, sigma)?, &spec)?;
    match format {
        AngleFormat::Text => {
            println!("s          {s}");
            println!("sigma      {sigma}");
            println!("theta      {:.16} rad ({:.12} deg)", sol.theta, sol.theta.to_degrees());
            println!("residual   {:.3e}", sol.residual);
            println!("iterations {}", sol.iterations);
        }
        AngleFormat::Json => {
            let v = json!({
                "s": s,
                "sigma": sigma,
                "theta": sol.theta,
                "theta_degrees": sol.theta.to_degrees(),
                "residual": sol.residual,
                "iterations": sol.iterations,
            });
            println!("{v}");
        }
    }
    Ok(())
}

fn run_sweep(
    s_list: Option<String>,
    sigma_count: usize,
    out: Option<PathBuf>,
    format: SweepFormat,
    tol: f64,
) -> CliResult<()> {
    let s_values = match s_list {
        Some(text) => sweep::parse_s_list(&text)?,
        None => DEFAULT_S_LIST.to_vec(),
    };
    let spec = spec_for(tol)?;
    sweep::sigma_grid(sigma_count)?;
    let table = sweep::build_table(&s_values, sigma_count, &spec)?;
    let format = match format {
        SweepFormat::Csv => TableFormat::Csv,
        SweepFormat::Json => TableFormat::Json,
    };
    match out {
        Some(path) => sweep::write_to_path(&table, format, &path),
        None => {
            let stdout = io::stdout().lock();
            match format {
                TableFormat::Csv => sweep::write_csv(&table, stdout),
                TableFormat::Json => sweep::write_json(&table, stdout),
            }
        }
    }
}

fn run_verify(suite: Suite, tol: f64, regions: Option<PathBuf>, sigma: Option<f64>) -> CliResult<()> {
    let regions = match regions {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|source| CliError::Io { path: path.clone(), source })?;
            let spec: RegionSpec = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            spec.validate()
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Some(spec)
        }
        None => None,
    };
    if let Some(g) = sigma {
        if !(g.abs() < 1.0) {
            return Err(CliError::Usage(format!("sigma out of range: {g} (expected |sigma| < 1)")));
        }
    }
    let checks = verify::run(suite, tol, &VerifyOptions { regions, sigma })?;
    print!("{}", verify::render(&checks));
    let _ = io::stdout().flush();
    let failed: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
    match failed.first() {
        None => Ok(()),
        Some(first) => {
            eprintln!("first failing check:\n{first}");
            Err(CliError::VerificationFailed {
                failed: failed.len(),
                total: checks.len(),
                first: first.name.clone(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Angle { s, sigma, tol, format } => angle(s, sigma, tol, format),
        Command::Sweep { s_list, sigma_count, out, format, tol } => {
            run_sweep(s_list, sigma_count, out, format, tol)
        }
        Command::Verify { suite, tol, regions, sigma } => run_verify(suite, tol, regions, sigma),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nlyoung: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
