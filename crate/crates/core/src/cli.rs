//! `abring` command line.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 failed
//! verification, 3 I/O failure.

use std::ffi::OsString;
use std::f64::consts::FRAC_PI_4;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::eigensystem::{bethe_state, eigen_pair_coefficients, singular_state, Branch, LatticeState, SingularSign};
use crate::equivalence::verify_equivalence;
use crate::error::{Error, Result};
use crate::params::{singularity_locus, ModelParams};
use crate::scattering::{max_phase_shift_with, phase_profile, CriticalPoint, DEFAULT_SHIFT_POINTS};
use crate::sweep::{run_sweep, Axis, AxisSpec, Format, Quantity, SweepConfig, SweepSettings};
use crate::verify::{run_suite, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "abring", version, about = "Non-Hermitian Aharonov-Bohm interferometer toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a quantity on a (gamma, phi, k) grid and write CSV or JSON.
    Sweep(SweepArgs),
    /// Critical fluxes of the spectral singularity for one gamma.
    Locus {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
    },
    /// Maximal transmission phase shift over the flux.
    PhaseShift {
        #[arg(long, allow_negative_numbers = true)]
        k: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value_t = DEFAULT_SHIFT_POINTS)]
        points: usize,
    },
    /// Run a named self-check suite.
    Verify(VerifyArgs),
    /// Conjugation report for the quarter-flux basis changes.
    Equivalence {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
    },
    /// Write one eigenstate as a JSON array of {site, re, im}.
    StateDump(StateDumpArgs),
}

#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub quantity: Option<Quantity>,
    /// Value or lo:hi:count.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Defaults to stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with the same keys; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, conflicts_with = "suite_flag")]
    pub suite: Option<Suite>,
    #[arg(long = "suite", id = "suite_flag", value_enum)]
    pub suite_flag: Option<Suite>,
    /// Lead length for the equivalence suite.
    #[arg(long)]
    pub n: Option<usize>,
    /// Gain/loss for the equivalence suite.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct StateDumpArgs {
    #[arg(long, value_enum, default_value = "psi1")]
    pub branch: Branch,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Ignored for singular branches, which sit on the locus.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, default_value_t = 60)]
    pub n: usize,
    /// Incoming spinor (cos theta, e^{i varphi} sin theta).
    #[arg(long, allow_negative_numbers = true, default_value_t = FRAC_PI_4)]
    pub theta: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub varphi: f64,
    /// Which critical flux to use for singular branches (0 or 1).
    #[arg(long, default_value_t = 0)]
    pub locus_branch: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl SweepArgs {
    fn settings(&self) -> SweepSettings {
        let spec = |s: &Option<String>| s.clone().map(AxisSpec::Text);
        SweepSettings {
            quantity: self.quantity,
            gamma: spec(&self.gamma),
            phi: spec(&self.phi),
            k: spec(&self.k),
            output: self.output.clone(),
            format: self.format,
        }
    }

    pub fn resolve(&self) -> Result<SweepConfig> {
        let base = match &self.config {
            Some(path) => SweepSettings::from_json_file(path)?,
            None => SweepSettings::default(),
        };
        SweepConfig::from_settings(base.overridden_by(self.settings()))
    }
}

/// Parses a full `abring sweep ...` argument vector into a validated config.
pub fn parse_cli<I, T>(argv: I) -> Result<SweepConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Config(e.to_string()))?;
    match cli.command {
        Command::Sweep(a) => a.resolve(),
        _ => Err(Error::Config("not a sweep command".into())),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(v).expect("value serializes to JSON");
    writeln!(out, "{s}")?;
    Ok(())
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Sweep(args) => cmd_sweep(&args.resolve()?, out, err),
        Command::Locus { gamma } => {
            write_json(out, &json!({ "phi_c": singularity_locus(gamma)? }))?;
            Ok(EXIT_OK)
        }
        Command::PhaseShift { k, gamma, points } => {
            let d = max_phase_shift_with(k, gamma, points)?;
            write_json(out, &json!({ "gamma": gamma, "k": k, "delta_omega": d }))?;
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let suite = args.suite.or(args.suite_flag).unwrap_or(Suite::All);
            let reports = run_suite(suite, VerifyOptions { n: args.n, gamma: args.gamma })?;
            let ok = reports.iter().all(|r| r.passed);
            write_json(out, &json!({ "passed": ok, "suites": reports }))?;
            Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Equivalence { n, gamma } => {
            let r = verify_equivalence(n, gamma)?;
            write_json(out, &r)?;
            Ok(if r.passes(1e-12) { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::StateDump(args) => {
            let state = build_state(&args)?;
            match &args.output {
                Some(path) => state.dump_json(path)?,
                None => write_json(out, &state.site_amplitudes())?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn cmd_sweep(cfg: &SweepConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let result = run_sweep(cfg)?;
    let text = result.render(cfg.format);
    match &cfg.output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    if cfg.quantity == Quantity::PhaseProfile {
        if let (Axis::Fixed(gamma), Axis::Fixed(k), Some(Axis::Range { lo, hi, count })) = (cfg.gamma, cfg.k, cfg.phi) {
            let prof = phase_profile(k, gamma, (lo, hi), count)?;
            let summary = json!({ "lapse_events": prof.lapse_events, "node_events": prof.node_events });
            // keep stdout clean when it carries the dataset
            if cfg.output.is_some() {
                write_json(out, &summary)?;
            } else {
                write_json(err, &summary)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn build_state(a: &StateDumpArgs) -> Result<LatticeState> {
    let singular = |sign, barred| -> Result<LatticeState> {
        let cp = CriticalPoint::on_locus(a.gamma, a.locus_branch)?;
        singular_state(&cp, sign, barred, a.n)
    };
    match a.branch {
        Branch::SingularPlus => singular(SingularSign::Plus, false),
        Branch::SingularMinus => singular(SingularSign::Minus, false),
        Branch::BarSingularPlus => singular(SingularSign::Plus, true),
        Branch::BarSingularMinus => singular(SingularSign::Minus, true),
        regular => {
            let p = ModelParams::with_sites(a.gamma, a.phi, a.k, a.n)?;
            let am = Complex64::new(a.theta.cos(), 0.0);
            let ap = Complex64::from_polar(a.theta.sin(), a.varphi);
            let coeffs = eigen_pair_coefficients(&p, am, ap)?;
            bethe_state(&p, &coeffs, regular)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("abring").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parse_examples() {
        let c = parse_cli(["abring", "sweep", "--quantity", "phase_profile", "--gamma", "0.707", "--k", "1.5708994", "--phi", "0:1.5708:2001"]).unwrap();
        assert_eq!(c.phi, Some(Axis::Range { lo: 0.0, hi: 1.5708, count: 2001 }));
        let c = parse_cli(["abring", "sweep", "--gamma", "0:1:10", "--phi", "0:1:10", "--k", "0:1:10", "--quantity", "amplitudes"]).unwrap();
        assert!(c.gamma.is_range() && c.k.is_range());
        assert!(parse_cli(["abring", "sweep", "--gamma", "0", "--phi", "0", "--k", "1"]).is_err());
    }

    #[test]
    fn locus_output() {
        let (code, out, _) = run_capture(&["locus", "--gamma", "1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["phi_c"][0].as_f64().unwrap(), FRAC_PI_4);
        assert_eq!(run_capture(&["locus", "--gamma", "1.5"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["locus", "--gamma", "-0.5"]).0, EXIT_USAGE);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["sweep", "--gamma", "0", "--phi", "0", "--k", "1"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["nonsense"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["sweep", "--quantity", "amplitudes", "--gamma", "0:1", "--phi", "0", "--k", "1"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn sweep_to_stdout() {
        let (code, out, _) = run_capture(&["sweep", "--quantity", "amplitudes", "--gamma", "0", "--phi", "0", "--k", "1"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].ends_with(",ok"));
    }

    #[test]
    fn io_failure_code() {
        let (code, _, err) = run_capture(&[
            "sweep", "--quantity", "amplitudes", "--gamma", "0", "--phi", "0", "--k", "1",
            "--output", "/nonexistent-dir/x.csv",
        ]);
        assert_eq!(code, EXIT_IO, "{err}");
    }

    #[test]
    fn verify_and_equivalence() {
        let (code, out, _) = run_capture(&["verify", "equivalence", "--n", "10", "--gamma", "0.5"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"passed\": true"));
        assert_eq!(run_capture(&["verify", "--suite", "unitarity"]).0, 0);
        let (code, out, _) = run_capture(&["equivalence", "--n", "20", "--gamma", "1.0"]);
        assert_eq!(code, 0);
        assert!(out.contains("norm1"));
    }

    #[test]
    fn state_dump_branches() {
        let (code, out, _) = run_capture(&["state-dump", "--gamma", "0.5", "--phi", "0.3", "--k", "1.2", "--n", "4"]);
        assert_eq!(code, 0, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 10);
        let (code, _, _) = run_capture(&["state-dump", "--branch", "bar-singular-minus", "--gamma", "0.707", "--locus-branch", "1"]);
        assert_eq!(code, 0);
    }
}
