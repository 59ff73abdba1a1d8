//! Command-line front end: `certify`, `basis-check` and `sample`.
//!
//! Exit codes: 0 success, 1 invalid input (bad flags, malformed config,
//! non-unitary gate, capacity exceeded), 2 internal numerical-consistency
//! failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::certify::{certify_with_chi, ghz_chain_gate, FidelityReport};
use crate::channel::{kraus_to_chi, Channel};
use crate::error::{Error, Result};
use crate::noise::{noisy_gate, NoiseSpec};
use crate::qcore::{build_error_basis, CMatrix, GateSpec, C64};
use crate::sampler::{sampled_report, FidelityEstimate, ThresholdMargins};
use crate::tolerance::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "qgate-cert", version, about = "Certify noisy multi-qubit gates from Z- and X-basis classical fidelities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute Fz, Fx, process-fidelity bounds and certification flags.
    Certify(RunArgs),
    /// Build the gate's error basis and check its orthogonality.
    BasisCheck(RunArgs),
    /// Like `certify`, but with Fz and Fx estimated from finite shots.
    Sample(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Builtin gate name: ghz-chain or identity.
    #[arg(long)]
    pub gate: Option<String>,
    #[arg(long)]
    pub qubits: Option<usize>,
    /// kind:p, or random_cptp:rank[:seed].
    #[arg(long)]
    pub noise: Option<NoiseSpec>,
    /// JSON run configuration; flags given alongside override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Shots per input state (sampled mode).
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report path, or "-" for standard output.
    #[arg(long)]
    pub output: Option<String>,
    /// Add the process matrix to the report.
    #[arg(long)]
    pub include_chi: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Sampled,
}

/// Gate selection in a config file: `{"builtin": "ghz-chain", "n_qubits": 3}`
/// or `{"unitary": [[[re, im], ...], ...]}` (row-major).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GateConfig {
    Builtin { builtin: String, n_qubits: usize },
    Explicit { unitary: Vec<Vec<[f64; 2]>> },
}

impl GateConfig {
    pub fn build(&self) -> Result<GateSpec> {
        match self {
            GateConfig::Builtin { builtin, n_qubits } => match builtin.as_str() {
                "ghz-chain" => ghz_chain_gate(*n_qubits),
                "identity" => GateSpec::identity(*n_qubits),
                other => Err(Error::Config(format!(
                    "unknown builtin gate '{other}' (known: ghz-chain, identity)"
                ))),
            },
            GateConfig::Explicit { unitary } => {
                let dim = unitary.len();
                if dim == 0 || unitary.iter().any(|row| row.len() != dim) {
                    return Err(Error::Config("explicit unitary must be a non-empty square matrix".into()));
                }
                let m = CMatrix::from_fn(dim, dim, |r, c| C64::new(unitary[r][c][0], unitary[r][c][1]));
                GateSpec::from_matrix(m, Some("explicit".into()))
            }
        }
    }

    fn label(&self) -> String {
        match self {
            GateConfig::Builtin { builtin, .. } => builtin.clone(),
            GateConfig::Explicit { .. } => "explicit".into(),
        }
    }
}

fn default_output() -> String {
    "-".into()
}

/// A complete run description, as read from `--config` or assembled from flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub gate: GateConfig,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub shots: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: String,
    #[serde(default)]
    pub include_chi: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed config: {e}")))
    }

    pub fn from_args(args: &RunArgs) -> Result<Self> {
        let mut cfg = match &args.config {
            Some(path) => Self::from_json(&fs::read_to_string(path)?)?,
            None => {
                let name = args
                    .gate
                    .clone()
                    .ok_or_else(|| Error::Config("--gate or --config is required".into()))?;
                let n_qubits = args
                    .qubits
                    .ok_or_else(|| Error::Config("--qubits is required with --gate".into()))?;
                RunConfig {
                    gate: GateConfig::Builtin {
                        builtin: name,
                        n_qubits,
                    },
                    noise: None,
                    mode: Mode::Exact,
                    shots: None,
                    seed: 0,
                    output: default_output(),
                    include_chi: false,
                }
            }
        };
        if args.config.is_some() {
            match (&args.gate, args.qubits, &mut cfg.gate) {
                (Some(name), Some(n), gate) => {
                    *gate = GateConfig::Builtin {
                        builtin: name.clone(),
                        n_qubits: n,
                    }
                }
                (Some(name), None, GateConfig::Builtin { builtin, .. }) => *builtin = name.clone(),
                (None, Some(n), GateConfig::Builtin { n_qubits, .. }) => *n_qubits = n,
                (None, None, _) => {}
                _ => {
                    return Err(Error::Config(
                        "--gate and --qubits together are needed to replace an explicit unitary".into(),
                    ))
                }
            }
        }
        if let Some(noise) = &args.noise {
            cfg.noise = Some(noise.clone());
        }
        if let Some(mode) = args.mode {
            cfg.mode = mode;
        }
        if let Some(shots) = args.shots {
            cfg.shots = Some(shots);
        }
        if let Some(seed) = args.seed {
            cfg.seed = seed;
        }
        if let Some(out) = &args.output {
            cfg.output = out.clone();
        }
        cfg.include_chi |= args.include_chi;
        Ok(cfg)
    }

    fn channel(&self, gate: &GateSpec) -> Result<Channel> {
        match &self.noise {
            Some(spec) => noisy_gate(gate, spec),
            None => Ok(Channel::unitary(gate)),
        }
    }

    fn shots(&self) -> Result<u64> {
        match self.shots {
            Some(s) if s >= 1 => Ok(s),
            Some(_) => Err(Error::Config("--shots must be at least 1".into())),
            None => Err(Error::Config("sampled mode needs --shots".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateSummary {
    pub name: String,
    pub n_qubits: usize,
}

/// Shot statistics of a sampled run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub z: FidelityEstimate,
    pub x: FidelityEstimate,
    pub margins: ThresholdMargins,
}

/// The JSON document written by `certify` and `sample`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub gate: GateSummary,
    pub noise: Option<NoiseSpec>,
    pub mode: Mode,
    #[serde(flatten)]
    pub fidelity: FidelityReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Counts>,
    /// Process matrix as row-major `[re, im]` pairs, phase-mask-major indexing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<Vec<[f64; 2]>>>,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Result of `basis-check`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisCheck {
    pub schema_version: u32,
    pub gate: GateSummary,
    pub n_operators: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn summary(cfg: &RunConfig, gate: &GateSpec) -> GateSummary {
    GateSummary {
        name: cfg.gate.label(),
        n_qubits: gate.n_qubits(),
    }
}

/// Builds the report for `cfg`, exact or sampled according to its mode.
pub fn build_report(cfg: &RunConfig) -> Result<Report> {
    let gate = cfg.gate.build()?;
    let ch = cfg.channel(&gate)?;
    let chi_pairs = |chi: &crate::channel::ChiMatrix| {
        cfg.include_chi
            .then(|| chi.to_pairs(Tolerances::DEFAULT.chi_print_zero))
    };
    let (fidelity, counts, chi) = match cfg.mode {
        Mode::Exact => {
            let (report, chi) = certify_with_chi(&ch, &gate)?;
            (report, None, chi_pairs(&chi))
        }
        Mode::Sampled => {
            let sampled = sampled_report(&ch, &gate, cfg.shots()?, cfg.seed)?;
            let chi = if cfg.include_chi {
                chi_pairs(&kraus_to_chi(&ch, &gate)?)
            } else {
                None
            };
            let counts = Counts {
                z: sampled.z,
                x: sampled.x,
                margins: sampled.margins,
            };
            (sampled.report, Some(counts), chi)
        }
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        gate: summary(cfg, &gate),
        noise: cfg.noise.clone(),
        mode: cfg.mode,
        fidelity,
        counts,
        chi,
    })
}

pub fn basis_check(cfg: &RunConfig) -> Result<BasisCheck> {
    let gate = cfg.gate.build()?;
    let basis = build_error_basis(&gate)?;
    let max_residual = basis.orthogonality_residual();
    let tolerance = Tolerances::DEFAULT.orthogonality;
    Ok(BasisCheck {
        schema_version: SCHEMA_VERSION,
        gate: summary(cfg, &gate),
        n_operators: basis.len(),
        max_residual,
        tolerance,
        passed: max_residual < tolerance,
    })
}

fn emit(text: &str, target: &str, stdout: &mut dyn Write) -> Result<()> {
    if target == "-" {
        writeln!(stdout, "{text}")?;
    } else {
        fs::write(target, format!("{text}\n"))?;
    }
    Ok(())
}

pub fn cmd_certify(args: &RunArgs, stdout: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::from_args(args)?;
    let report = build_report(&cfg)?;
    emit(&report.to_json()?, &cfg.output, stdout)?;
    Ok(0)
}

pub fn cmd_sample(args: &RunArgs, stdout: &mut dyn Write) -> Result<i32> {
    let mut cfg = RunConfig::from_args(args)?;
    cfg.mode = Mode::Sampled;
    let report = build_report(&cfg)?;
    emit(&report.to_json()?, &cfg.output, stdout)?;
    Ok(0)
}

pub fn cmd_basis_check(args: &RunArgs, stdout: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::from_args(args)?;
    let check = basis_check(&cfg)?;
    emit(&serde_json::to_string_pretty(&check)?, &cfg.output, stdout)?;
    Ok(if check.passed { 0 } else { 2 })
}

/// Runs a parsed command, reporting failures on `stderr` and mapping them to exit codes.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Certify(a) => cmd_certify(a, stdout),
        Command::BasisCheck(a) => cmd_basis_check(a, stdout),
        Command::Sample(a) => cmd_sample(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdout, stderr),
        Err(e) if e.use_stderr() => {
            let _ = write!(stderr, "{}", e.render());
            1
        }
        Err(e) => {
            let _ = write!(stdout, "{}", e.render());
            0
        }
    }
}
