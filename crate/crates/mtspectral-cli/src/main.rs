//! Batch experiment driver for the MT-spectral library.
//!
//! Each subcommand runs one experiment and writes a CSV or JSON data file
//! (plots are left to external scripts). Exit codes: 0 on success, 2 on
//! configuration errors, 3 when `--assert` is given and a numerical check
//! fails.

mod experiments;
mod registry;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use experiments::{Experiment, ExperimentConfig, OutputFormat};
use mt_spectral::{BasisSpec, GeneralMtParams, PhaseConvention};

#[derive(Parser)]
#[command(
    name = "mtspectral",
    about = "Experiments with the Malmquist-Takenaka spectral basis",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default, Clone)]
struct CommonArgs {
    /// Basis family: mt | gmt:<re>,<im>,<omega>,<delta> | fl:<alpha> | hermite:<alpha>
    #[arg(long)]
    basis: Option<String>,

    /// Half-size of the transform / index window bound
    #[arg(long = "N")]
    n: Option<usize>,

    /// Registry key of the test function (see `mtspectral list`)
    #[arg(long)]
    function: Option<String>,

    /// Propagation time for the advection demo
    #[arg(long)]
    t: Option<f64>,

    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format: csv | json
    #[arg(long)]
    format: Option<String>,

    /// Fail (exit 3) when a numerical check does not meet its threshold
    #[arg(long = "assert")]
    assert_checks: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Gram-matrix residual of a basis window under the quadrature oracle
    Orthonormality(CommonArgs),
    /// Expansion coefficients of a registry function via the fast transform
    Coeffs(CommonArgs),
    /// Coefficient magnitudes plus fitted decay models
    Decay(CommonArgs),
    /// Pointwise error curves: MT expansion vs Hermite expansion
    CompareHermite(CommonArgs),
    /// Residuals of the product, x d/dx and Cayley-weight identities
    Identities(CommonArgs),
    /// Advection by exp(tD): norm drift and shift error vs N
    PdeAdvect(CommonArgs),
    /// Analyticity discs attached to geometric decay rates
    RhoRegion(CommonArgs),
    /// List the built-in function registry
    List,
    /// Run an experiment described by a key = value config file
    Run {
        /// Config file; command-line flags override its values
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        args: CommonArgs,
    },
}

fn parse_basis(s: &str) -> Result<BasisSpec, String> {
    if s == "mt" {
        return Ok(BasisSpec::Mt);
    }
    if let Some(rest) = s.strip_prefix("gmt:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 4 {
            return Err(format!("expected gmt:<re>,<im>,<omega>,<delta>, got '{s}'"));
        }
        let vals: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
        let vals = vals.map_err(|e| format!("bad gmt parameter in '{s}': {e}"))?;
        let params = GeneralMtParams::new(
            Complex64::new(vals[0], vals[1]),
            vals[2],
            vals[3],
            PhaseConvention::PowersOfMinusI,
        )
        .map_err(|e| e.to_string())?;
        return Ok(BasisSpec::GeneralMt(params));
    }
    if let Some(rest) = s.strip_prefix("fl:") {
        let alpha: f64 = rest
            .trim()
            .parse()
            .map_err(|e| format!("bad alpha '{rest}': {e}"))?;
        return BasisSpec::fourier_laguerre(alpha).map_err(|e| e.to_string());
    }
    if let Some(rest) = s.strip_prefix("hermite:") {
        let alpha: f64 = rest
            .trim()
            .parse()
            .map_err(|e| format!("bad alpha '{rest}': {e}"))?;
        return Ok(BasisSpec::ShiftedHermite { alpha });
    }
    Err(format!("unknown basis '{s}'"))
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(format!("unknown format '{other}' (csv | json)")),
    }
}

/// `key = value` lines with `#` comments; flags override file values.
fn load_config_file(path: &PathBuf, args: &mut CommonArgs) -> Result<Option<Experiment>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut experiment = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "experiment" => {
                experiment = Some(
                    Experiment::parse(value)
                        .ok_or_else(|| format!("unknown experiment '{value}'"))?,
                );
            }
            "basis" => {
                if args.basis.is_none() {
                    args.basis = Some(value.to_string());
                }
            }
            "N" => {
                if args.n.is_none() {
                    args.n = Some(value.parse().map_err(|e| format!("bad N '{value}': {e}"))?);
                }
            }
            "function" => {
                if args.function.is_none() {
                    args.function = Some(value.to_string());
                }
            }
            "t" => {
                if args.t.is_none() {
                    args.t = Some(value.parse().map_err(|e| format!("bad t '{value}': {e}"))?);
                }
            }
            "out" => {
                if args.out.is_none() {
                    args.out = Some(PathBuf::from(value));
                }
            }
            "format" => {
                if args.format.is_none() {
                    args.format = Some(value.to_string());
                }
            }
            "assert" => {
                args.assert_checks |= value == "true" || value == "1";
            }
            other => return Err(format!("unknown config key '{other}'")),
        }
    }
    Ok(experiment)
}

fn build_config(
    experiment: Experiment,
    args: &CommonArgs,
) -> Result<(ExperimentConfig, Option<PathBuf>), String> {
    let basis = match &args.basis {
        Some(s) => parse_basis(s)?,
        None => BasisSpec::Mt,
    };
    let n = args.n.unwrap_or(64);
    if n < 1 {
        return Err("N must be at least 1".into());
    }
    let format = match &args.format {
        Some(s) => parse_format(s)?,
        None => OutputFormat::Csv,
    };
    let seed = match std::env::var("MTSPECTRAL_SEED") {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|e| format!("bad MTSPECTRAL_SEED '{v}': {e}"))?,
        Err(_) => 0x6D74_7370,
    };
    Ok((
        ExperimentConfig {
            experiment,
            basis,
            n,
            function: args.function.clone().unwrap_or_else(|| "runge".into()),
            t: args.t.unwrap_or(1.0),
            format,
            assert_checks: args.assert_checks,
            seed,
        },
        args.out.clone(),
    ))
}

fn execute(experiment: Experiment, args: &CommonArgs) -> Result<(), (u8, String)> {
    let (config, out) = build_config(experiment, args).map_err(|e| (2, e))?;
    let report = experiments::run(&config).map_err(|e| (2, e))?;

    let payload = match config.format {
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Json => report.to_json(),
    };
    match &out {
        Some(path) => {
            std::fs::write(path, payload)
                .map_err(|e| (2, format!("cannot write {}: {e}", path.display())))?;
            for note in &report.notes {
                println!("{note}");
            }
        }
        None => {
            print!("{payload}");
            // Keep stdout parseable; summaries go to stderr.
            for note in &report.notes {
                eprintln!("{note}");
            }
        }
    }

    if config.assert_checks && !report.failed_checks.is_empty() {
        let mut message = String::from("numerical checks failed:");
        for f in &report.failed_checks {
            message.push_str("\n  ");
            message.push_str(f);
        }
        return Err((3, message));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::List => {
            println!("available functions:");
            for entry in registry::REGISTRY {
                let tag = entry
                    .expected_decay
                    .map(|m| format!("{m:?}"))
                    .unwrap_or_else(|| "-".into());
                println!("  {:12} {:14} {}", entry.key, tag, entry.description);
            }
            Ok(())
        }
        Command::Orthonormality(args) => execute(Experiment::Orthonormality, args),
        Command::Coeffs(args) => execute(Experiment::Coeffs, args),
        Command::Decay(args) => execute(Experiment::Decay, args),
        Command::CompareHermite(args) => execute(Experiment::CompareHermite, args),
        Command::Identities(args) => execute(Experiment::Identities, args),
        Command::PdeAdvect(args) => execute(Experiment::PdeAdvect, args),
        Command::RhoRegion(args) => execute(Experiment::RhoRegion, args),
        Command::Run { config, args } => {
            let mut merged = args.clone();
            match load_config_file(config, &mut merged) {
                Ok(Some(experiment)) => execute(experiment, &merged),
                Ok(None) => Err((2, "config file does not name an experiment".into())),
                Err(e) => Err((2, e)),
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
