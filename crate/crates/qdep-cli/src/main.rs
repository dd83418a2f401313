//! `qdep`: unitary dependence analysis of quantum circuits.
//!
//! Exit codes: 0 success, 1 soundness finding from `verify`, 2 input error,
//! 3 oracle capacity exceeded. Stdout carries exactly one artifact per run;
//! diagnostics go to stderr.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use qdep_core::{
    analyze, build_fixture, circuit_hash, parse_circuit, restrict_picture, serialize_circuit,
    verify_circuit, CapacityError, Circuit, CircuitFormat, Fixture, ProbeConfig, VerifyOutcome,
};

const EXIT_FINDING: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAPACITY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qdep",
    version,
    about = "Static unitary-dependence pictures of quantum circuits, cross-checked against a statevector oracle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the static dependence picture of a circuit
    Analyze(AnalyzeArgs),
    /// Probe the circuit empirically and reconcile it with the static picture
    Verify(VerifyArgs),
    /// List or emit the built-in fixture circuits
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Circuit file (native or OpenQASM 2 subset) or `fixtures:<name>`
    input: String,
    #[arg(long, value_enum, default_value_t = PictureFormat::Json)]
    format: PictureFormat,
    /// Keep only these qubits, e.g. `--restrict 0,2` or `--restrict q0,q2`
    #[arg(long)]
    restrict: Option<String>,
    /// Write the artifact to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Circuit file (native or OpenQASM 2 subset) or `fixtures:<name>`
    input: String,
    /// Random parameter draws per probed gate
    #[arg(long, default_value_t = ProbeConfig::default().samples)]
    samples: usize,
    /// Central-difference step
    #[arg(long, default_value_t = ProbeConfig::default().eps)]
    eps: f64,
    /// Sensitivity threshold on |dp/dparam|
    #[arg(long, default_value_t = ProbeConfig::default().tol)]
    tol: f64,
    /// Probe RNG seed
    #[arg(long, env = "QDEP_SEED", default_value_t = ProbeConfig::default().seed)]
    seed: u64,
    /// Probe worker threads (output is identical for any value)
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FixturesAction {
    /// Print the fixture names with one-line descriptions
    List,
    /// Write a fixture as native circuit source
    Emit { name: String, path: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PictureFormat {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

/// Errors mapped onto the exit-code contract.
enum CliError {
    /// Unreadable, unparsable, or otherwise invalid input (exit 2).
    Input(anyhow::Error),
    /// Circuit too large for the statevector oracle (exit 3).
    Capacity(CapacityError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Capacity(_) => EXIT_CAPACITY,
        }
    }
}

impl From<CapacityError> for CliError {
    fn from(err: CapacityError) -> Self {
        CliError::Capacity(err)
    }
}

/// Embedded in every JSON artifact so runs are reproducible from the output
/// alone. Identical manifests and inputs produce byte-identical outputs.
#[derive(Serialize)]
struct RunManifest {
    tool: &'static str,
    version: &'static str,
    command: String,
    input: String,
    circuit_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    probe: Option<ProbeConfig>,
    output: String,
}

impl RunManifest {
    fn new(command: &str, input: &str, circuit: &Circuit, probe: Option<ProbeConfig>, out: &Option<PathBuf>) -> Self {
        RunManifest {
            tool: "qdep",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input: input.to_string(),
            circuit_hash: circuit_hash(circuit),
            probe,
            output: out
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "-".to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            match &err {
                CliError::Input(e) => eprintln!("error: {e:#}"),
                CliError::Capacity(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Fixtures { action } => cmd_fixtures(action),
    }
}

fn load_circuit(input: &str) -> Result<Circuit, CliError> {
    if let Some(name) = input.strip_prefix("fixtures:") {
        return build_fixture(name).map_err(|e| CliError::Input(anyhow!(e)));
    }
    let text = fs::read_to_string(input)
        .with_context(|| format!("cannot read `{input}`"))
        .map_err(CliError::Input)?;
    let format = if text.trim_start().starts_with("OPENQASM") {
        CircuitFormat::Qasm2
    } else {
        CircuitFormat::Native
    };
    parse_circuit(&text, format).map_err(|e| CliError::Input(anyhow!("{input}: {e}")))
}

fn parse_restrict(spec: &str, n: usize) -> Result<BTreeSet<usize>, CliError> {
    let mut keep = BTreeSet::new();
    for part in spec.split(',') {
        let token = part.trim().trim_start_matches('q');
        let qubit: usize = token
            .parse()
            .map_err(|_| CliError::Input(anyhow!("invalid qubit `{part}` in --restrict")))?;
        if qubit >= n {
            return Err(CliError::Input(anyhow!(
                "--restrict qubit {qubit} out of range (circuit has {n} qubits)"
            )));
        }
        keep.insert(qubit);
    }
    if keep.is_empty() {
        return Err(CliError::Input(anyhow!("--restrict must keep at least one qubit")));
    }
    Ok(keep)
}

fn emit(artifact: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, artifact)
                .with_context(|| format!("cannot write `{}`", path.display()))
                .map_err(CliError::Input)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{artifact}"),
    }
    Ok(())
}

/// Prepend the manifest to an artifact object, keeping key order.
fn with_manifest(manifest: &RunManifest, body: Value) -> Value {
    let mut root = Map::new();
    root.insert("manifest".into(), serde_json::to_value(manifest).unwrap());
    if let Value::Object(fields) = body {
        root.extend(fields);
    }
    Value::Object(root)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode, CliError> {
    let circuit = load_circuit(&args.input)?;
    let mut picture = analyze(&circuit);
    if let Some(spec) = &args.restrict {
        let keep = parse_restrict(spec, circuit.qubit_count())?;
        picture = restrict_picture(&picture, &keep)
            .map_err(|e| CliError::Input(anyhow!(e.to_string())))?;
    }

    let manifest = RunManifest::new("analyze", &args.input, &circuit, None, &args.out);
    let artifact = match args.format {
        PictureFormat::Json => {
            let mut text = with_manifest(&manifest, picture.to_json()).to_string();
            text.push('\n');
            text
        }
        PictureFormat::Dot => picture.to_dot(),
        PictureFormat::Text => picture.to_text(),
    };
    emit(&artifact, &args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn run_probe<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .expect("failed to build probe thread pool")
            .install(work),
        None => work(),
    }
}

fn render_verify_text(input: &str, circuit: &Circuit, outcome: &VerifyOutcome) -> String {
    let mut out = String::new();
    let cfg = outcome.probe_report.config;
    let _ = writeln!(
        out,
        "circuit: {input} (n={}, gates={}, hash={})",
        circuit.qubit_count(),
        circuit.gates().len(),
        &outcome.divergence.circuit_hash[..12],
    );
    let _ = writeln!(
        out,
        "probe: samples={} eps={} tol={} seed={} (bit order: qubit0=lsb)",
        cfg.samples, cfg.eps, cfg.tol, cfg.seed
    );
    out.push_str(&outcome.divergence.to_table());
    let _ = writeln!(
        out,
        "independence audit: pairs={} violations={} (tolerance {})",
        outcome.audit.rows.len(),
        outcome.audit.violations,
        outcome.audit.tolerance
    );
    let _ = writeln!(
        out,
        "result: {}",
        if outcome.is_clean() { "clean" } else { "SOUNDNESS FINDINGS" }
    );
    out
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let circuit = load_circuit(&args.input)?;
    let cfg = ProbeConfig {
        samples: args.samples,
        eps: args.eps,
        tol: args.tol,
        seed: args.seed,
    };
    if cfg.samples == 0 || cfg.eps <= 0.0 || cfg.tol <= 0.0 {
        return Err(CliError::Input(anyhow!(
            "--samples must be >= 1 and --eps/--tol must be positive"
        )));
    }

    let outcome = run_probe(args.jobs, || verify_circuit(&circuit, &cfg))?;

    let manifest = RunManifest::new("verify", &args.input, &circuit, Some(cfg), &args.out);
    let artifact = match args.format {
        ReportFormat::Json => {
            let body = json!({
                "bit_order": "qubit0=lsb",
                "divergence": outcome.divergence.to_json(),
                "audit": outcome.audit.to_json(),
                "probe": outcome.probe_report.to_json(),
            });
            let mut text = with_manifest(&manifest, body).to_string();
            text.push('\n');
            text
        }
        ReportFormat::Text => render_verify_text(&args.input, &circuit, &outcome),
    };
    emit(&artifact, &args.out)?;

    if outcome.is_clean() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_FINDING))
    }
}

fn cmd_fixtures(action: FixturesAction) -> Result<ExitCode, CliError> {
    match action {
        FixturesAction::List => {
            let mut out = String::new();
            for fixture in Fixture::ALL {
                let _ = writeln!(out, "{:<10} {}", fixture.name(), fixture.description());
            }
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        FixturesAction::Emit { name, path } => {
            let circuit = build_fixture(&name).map_err(|e| CliError::Input(anyhow!(e)))?;
            let text = serialize_circuit(&circuit, CircuitFormat::Native);
            fs::write(&path, text)
                .with_context(|| format!("cannot write `{}`", path.display()))
                .map_err(CliError::Input)?;
            eprintln!("wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
