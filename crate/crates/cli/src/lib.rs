//! Command-line front end for the ablab pipeline.
//!
//! `run` takes parsed arguments and writers so tests can drive every
//! subcommand in-process; the binary only forwards `std::env::args`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;

use std::io::Write;
use std::path::{Path, PathBuf};

use ablab::scalar::parse_rational;
use ablab::{Rational, Tau};
use anyhow::anyhow;
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::config::{load_json, parse_json, resolve_depth_cap, NumberSpec, Overrides, RunConfig};
use crate::error::{CliError, EXIT_OK};
use crate::output::{to_json, Outputs, Timings};

#[derive(Debug, Parser)]
#[command(
    name = "ablab",
    version,
    about = "Certified alpha-beta orbit experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Input file: a run config, a number spec, or a manifest to replay.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Overrides the word seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Overrides the orbit precision, e.g. 1/1000000.
    #[arg(long, global = true, value_parser = parse_rational_arg)]
    pub precision: Option<Rational>,

    /// Maximum number of partial quotients materialized per number.
    #[arg(long, global = true)]
    pub depth_cap: Option<usize>,

    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a number from a spec and print its convergent table.
    Construct {
        /// Rows of the table.
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Run the full pipeline for a run config and write the report.
    VerifyBound,
    /// Box-count a CSV of points at the given radii. With a boxdim manifest
    /// as --config, both come from the manifest.
    Boxdim {
        #[arg(long)]
        points: Option<PathBuf>,
        /// Comma-separated radii, e.g. 1/8,1/64.
        #[arg(long)]
        scales: Option<String>,
    },
    /// Approximation witnesses of a number, or with --window-q the convergent
    /// denominator in [q, q^(tau1+epsilon-1)].
    Witness {
        #[arg(long, value_parser = parse_rational_arg)]
        tau2: Option<Rational>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        window_q: Option<BigInt>,
        #[arg(long, value_parser = parse_rational_arg, default_value = "2")]
        tau1: Rational,
        #[arg(long, value_parser = parse_rational_arg, default_value = "1/4")]
        epsilon: Rational,
    },
    /// Print the dimension lower bound and the embedding threshold.
    Bound {
        #[arg(long, value_parser = parse_rational_arg)]
        tau1: Rational,
        /// A rational or "inf".
        #[arg(long)]
        tau2: Tau,
    },
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Default output directory for `verify-bound`.
pub const DEFAULT_OUT: &str = "ablab-run";

#[derive(Debug, Serialize, Deserialize)]
struct ConstructConfig {
    spec: NumberSpec,
    n: usize,
    depth_cap: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct WitnessConfig {
    spec: NumberSpec,
    tau2: Option<ablab::wire::DecRat>,
    count: usize,
    window_q: Option<ablab::wire::DecInt>,
    tau1: ablab::wire::DecRat,
    epsilon: ablab::wire::DecRat,
    depth_cap: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct BoxdimConfig {
    points: String,
    points_sha256: String,
    scales: Vec<ablab::wire::DecRat>,
}

fn require_config(cli: &Cli) -> Result<&Path, CliError> {
    cli.config
        .as_deref()
        .ok_or_else(|| CliError::config("config", anyhow!("--config is required")))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::config("config", anyhow!("reading {}: {e}", path.display())))
}

/// For a manifest, checks that it was written by `command`. Returns whether
/// `text` is a manifest at all.
fn is_manifest(text: &str, command: &str) -> Result<bool, CliError> {
    let Ok(v) = serde_json::from_str::<serde_json::Value>(text) else {
        return Ok(false);
    };
    if v.get("tool").and_then(|t| t.as_str()) != Some(output::TOOL) {
        return Ok(false);
    }
    match v.get("command").and_then(|c| c.as_str()) {
        Some(c) if c == command => Ok(true),
        other => Err(CliError::config(
            "config",
            anyhow!(
                "manifest was written by {:?}, not {command}",
                other.unwrap_or("?")
            ),
        )),
    }
}

fn write_outputs<C: Serialize, O: Serialize>(
    out: Option<&Path>,
    outputs: &Outputs,
    command: &'static str,
    config: &C,
    timings: Timings,
    outcome: O,
) -> Result<(), CliError> {
    if let Some(dir) = out {
        outputs.write_all(dir, command, config, timings, outcome)?;
    }
    Ok(())
}

fn construct(cli: &Cli, n: usize, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let text = read_text(require_config(cli)?)?;
    let bad = |e| CliError::config("config", e);
    let cfg = if is_manifest(&text, "construct")? {
        let mut cfg: ConstructConfig = parse_json(&text).map_err(bad)?;
        if let Some(cap) = cli.depth_cap {
            cfg.depth_cap = cap;
        }
        cfg
    } else {
        let spec: NumberSpec = parse_json(&text).map_err(bad)?;
        ConstructConfig {
            spec,
            n,
            depth_cap: resolve_depth_cap(cli.depth_cap, None)?,
        }
    };
    let mut timings = Timings::default();
    let built = timings.time("construct", || {
        commands::construct(&cfg.spec, cfg.n, cfg.depth_cap)
    })?;
    let mut outputs = Outputs::default();
    outputs.add("number.json", to_json(&built.number));
    outputs.add(
        "convergents.csv",
        commands::convergents_csv(&built.convergents),
    );
    write_outputs(
        cli.out.as_deref(),
        &outputs,
        "construct",
        &cfg,
        timings,
        "ok",
    )?;
    emit(stdout, &to_json(&built))?;
    Ok(EXIT_OK)
}

fn witness(cli: &Cli, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let Command::Witness {
        tau2,
        count,
        window_q,
        tau1,
        epsilon,
    } = &cli.command
    else {
        unreachable!()
    };
    let text = read_text(require_config(cli)?)?;
    let bad = |e| CliError::config("config", e);
    let cfg = if is_manifest(&text, "witness")? {
        parse_json::<WitnessConfig>(&text).map_err(bad)?
    } else {
        WitnessConfig {
            spec: parse_json(&text).map_err(bad)?,
            tau2: tau2.clone().map(ablab::wire::DecRat),
            count: *count,
            window_q: window_q.clone().map(ablab::wire::DecInt),
            tau1: ablab::wire::DecRat(tau1.clone()),
            epsilon: ablab::wire::DecRat(epsilon.clone()),
            depth_cap: resolve_depth_cap(cli.depth_cap, None)?,
        }
    };
    let mut timings = Timings::default();
    let json = match (&cfg.window_q, &cfg.tau2) {
        (Some(q), _) => to_json(&timings.time("window", || {
            commands::window(&cfg.spec, &q.0, &cfg.tau1.0, &cfg.epsilon.0, cfg.depth_cap)
        })?),
        (None, Some(t2)) => to_json(&timings.time("witnesses", || {
            commands::witnesses(&cfg.spec, &t2.0, cfg.count, cfg.depth_cap)
        })?),
        (None, None) => {
            return Err(CliError::config(
                "config",
                anyhow!("give --tau2 or --window-q"),
            ))
        }
    };
    let mut outputs = Outputs::default();
    outputs.add("witnesses.json", json.clone());
    write_outputs(cli.out.as_deref(), &outputs, "witness", &cfg, timings, "ok")?;
    emit(stdout, &json)?;
    Ok(EXIT_OK)
}

fn boxdim(
    cli: &Cli,
    points: Option<&Path>,
    scales: Option<&str>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<u8, CliError> {
    let bad = |e| CliError::config("config", e);
    let replay: Option<BoxdimConfig> = match &cli.config {
        Some(path) => {
            let text = read_text(path)?;
            if !is_manifest(&text, "boxdim")? {
                return Err(bad(anyhow!("boxdim --config takes a boxdim manifest")));
            }
            Some(parse_json(&text).map_err(bad)?)
        }
        None => None,
    };
    let points = match (points, &replay) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(r)) => PathBuf::from(&r.points),
        (None, None) => return Err(bad(anyhow!("--points is required"))),
    };
    let scales = match (scales, &replay) {
        (Some(s), _) => commands::parse_scales(s)?,
        (None, Some(r)) => r.scales.iter().map(|r| r.0.clone()).collect(),
        (None, None) => return Err(bad(anyhow!("--scales is required"))),
    };
    let raw = std::fs::read(&points)
        .map_err(|e| CliError::config("points", anyhow!("reading {}: {e}", points.display())))?;
    let points_sha256 = output::sha256_hex(&raw);
    if let Some(r) = &replay {
        if r.points_sha256 != points_sha256 {
            return Err(CliError::config(
                "points",
                anyhow!(
                    "{} changed since the manifest was written",
                    points.display()
                ),
            ));
        }
    }
    let mut timings = Timings::default();
    let pts = timings.time("read", || commands::read_points(&points))?;
    let result = timings.time("boxdim", || commands::boxdim(&pts, &scales))?;
    let outputs = commands::boxdim_outputs(&result);
    let cfg = BoxdimConfig {
        points: points.display().to_string(),
        points_sha256,
        scales: scales.into_iter().map(ablab::wire::DecRat).collect(),
    };
    write_outputs(cli.out.as_deref(), &outputs, "boxdim", &cfg, timings, "ok")?;
    emit(stdout, outputs.get("boxcount.csv").unwrap_or_default())?;
    if let Some(e) = result.estimate {
        let _ = writeln!(stderr, "estimate_approx={e:.6}");
    }
    Ok(EXIT_OK)
}

fn verify_bound(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8, CliError> {
    let path = require_config(cli)?;
    is_manifest(&read_text(path)?, "verify-bound")?;
    let cfg: RunConfig = load_json(path)?;
    let overrides = Overrides {
        seed: cli.seed,
        precision: cli.precision.clone().map(ablab::wire::DecRat),
        depth_cap: cli.depth_cap,
    };
    let cfg = cfg.resolve(&overrides)?;
    let run = pipeline::verify_bound(&cfg)?;
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let code = run.report.outcome.exit_code;
    run.outputs
        .write_all(&out, "verify-bound", &cfg, run.timings, &run.report.outcome)?;
    emit(stdout, run.outputs.get("report.json").unwrap_or_default())?;
    let outcome = &run.report.outcome;
    if code != EXIT_OK {
        let stage = outcome.failure_stage.as_deref().unwrap_or_default();
        let level_error = stage
            .strip_prefix("separation:l=")
            .and_then(|l| l.parse::<usize>().ok())
            .and_then(|l| run.report.levels.iter().find(|r| r.l == l))
            .and_then(|r| r.error.clone());
        let orbit_error = outcome
            .warnings
            .iter()
            .find(|w| w.starts_with("orbit:"))
            .cloned();
        let detail = level_error
            .or(orbit_error)
            .unwrap_or_else(|| "no level produced a verified separation".into());
        let e = CliError::new(code, stage, anyhow!(detail));
        let _ = writeln!(stderr, "{}", e.to_json());
    }
    Ok(code)
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::internal("output", e))
}

/// Runs one command; returns the process exit code. Failures are reported on
/// `stderr` as one JSON line with the failing stage.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let result = match &cli.command {
        Command::Construct { n } => construct(cli, *n, stdout),
        Command::VerifyBound => verify_bound(cli, stdout, stderr),
        Command::Boxdim { points, scales } => {
            boxdim(cli, points.as_deref(), scales.as_deref(), stdout, stderr)
        }
        Command::Witness { .. } => witness(cli, stdout),
        Command::Bound { tau1, tau2 } => commands::bound(tau1, tau2).and_then(|b| {
            emit(stdout, &to_json(&b))?;
            Ok(EXIT_OK)
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            e.code
        }
    }
}

/// Parses `args` (including the program name) and runs.
pub fn run_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdout, stderr),
        Err(e) => {
            let code = if e.use_stderr() {
                error::EXIT_CONFIG
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            code
        }
    }
}
