//! Batch command line.
//!
//! Every subcommand emits one report, as JSON (default) or CSV, to standard
//! output or to `--output`. Floats are rounded to 6 significant digits, 12
//! for `paper-table`. Exit status is 0 on success, 2 when an argument or
//! input file is invalid, and 1 when a numerical consistency check fails.
//!
//! CSV layout: one header line, then one row per record. Nested objects
//! become dotted column names (`sampled.trials`), arrays of numbers are
//! joined with `;`, and columns keep the order of the JSON keys. Reports
//! that are lists (`paper-table` checks, `clone-check` violating pairs) get
//! one row per list entry.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cloning::{apparatus_clonability_check, clonability_check, DEFAULT_CLONE_TOL};
use crate::commsim::{run_experiment, ExperimentConfig};
use crate::ensembles::QuantumEnsemble;
use crate::error::{Error, Result};
use crate::geometry::{
    classical_microstate_bits, classical_vs_quantum_counts, projective_volume, resolution_fraction, resolution_volume,
    small_angle_ratio, sphere_area, PhaseSpaceSpec, QuantumResolutionSpec,
};
use crate::hilbert::{encode_amplitudes, StateFile};
use crate::information::{
    accessible_info_uniform, info_report, mean_measurement_info_closed, mean_measurement_info_mc, shannon_info,
    InfoRecord,
};
use crate::paper_table;
use crate::sampling::RandomStream;
use crate::subsystems::{schmidt_decompose, BipartiteState};

/// Exit status for a completed run.
pub const EXIT_OK: i32 = 0;
/// Exit status when a numerical consistency check fails.
pub const EXIT_NUMERICAL: i32 = 1;
/// Exit status for invalid flags or input files.
pub const EXIT_INVALID: i32 = 2;

const DEFAULT_DIGITS: usize = 6;
const TABLE_DIGITS: usize = 12;

#[derive(Parser, Debug)]
#[command(name = "qinfo", version, about = "Information content of quantum state vectors")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Projective volume, sphere area and resolution-sphere volume.
    Volumes {
        #[arg(long)]
        dim: usize,
        /// Resolution angle in radians.
        #[arg(long, default_value_t = crate::commsim::DEFAULT_RESOLUTION_ANGLE)]
        phi: f64,
    },
    /// Quantum or classical microstate counts in bits.
    Microstates {
        #[arg(long, required_unless_present = "classical", conflicts_with = "classical")]
        dim: Option<usize>,
        /// Resolution angle in radians.
        #[arg(long, conflicts_with_all = ["bits", "classical"])]
        phi: Option<f64>,
        /// Bits per amplitude, as an alternative to `--phi`.
        #[arg(long, conflicts_with = "classical")]
        bits: Option<f64>,
        #[arg(long, requires_all = ["dof", "area_ratio"])]
        classical: bool,
        #[arg(long)]
        dof: Option<u32>,
        #[arg(long)]
        area_ratio: Option<f64>,
    },
    /// Preparation information against von Neumann entropy.
    Entropy {
        #[arg(long)]
        ensemble: PathBuf,
    },
    /// Mean information from a random measurement.
    AvgInfo {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Accessible information of the uniform ensemble.
    Accessible {
        #[arg(long)]
        dim: usize,
    },
    /// Prepare-and-measure channel experiment.
    Commsim {
        #[arg(long)]
        config: PathBuf,
        /// Also write the joint input/outcome counts as CSV.
        #[arg(long)]
        counts: Option<PathBuf>,
    },
    /// Whether a unitary can copy every member of an ensemble.
    CloneCheck {
        #[arg(long)]
        ensemble: PathBuf,
        #[arg(long, default_value_t = 1)]
        copies: u32,
        /// Allow a measuring apparatus in the copying unitary.
        #[arg(long)]
        apparatus: bool,
        #[arg(long, default_value_t = DEFAULT_CLONE_TOL)]
        tol: f64,
    },
    /// Schmidt decomposition of a bipartite pure state.
    Schmidt {
        #[arg(long)]
        state: PathBuf,
        /// Subsystem dimensions as `a,b`.
        #[arg(long, value_parser = parse_dims)]
        dims: (usize, usize),
    },
    /// Reproduces every reference number and checks it against its tolerance.
    PaperTable {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_dims(text: &str) -> std::result::Result<(usize, usize), String> {
    let parse = |s: &str| s.trim().parse::<usize>().ok().filter(|&d| d > 0);
    match text.split_once(',') {
        Some((a, b)) => parse(a).zip(parse(b)).ok_or_else(|| format!("expected two positive integers, got {text:?}")),
        None => Err(format!("expected `a,b`, got {text:?}")),
    }
}

/// A finished report plus whether its consistency checks passed.
struct Report {
    value: Value,
    digits: usize,
    consistent: bool,
    /// Key of a list whose entries become CSV rows.
    rows: Option<&'static str>,
}

impl Report {
    fn new(value: impl Serialize) -> Result<Self> {
        Ok(Self { value: serde_json::to_value(value)?, digits: DEFAULT_DIGITS, consistent: true, rows: None })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidArgument(format!("--{name} must be a positive number, got {value}")))
    }
}

fn execute(command: &Command) -> Result<Report> {
    match command {
        Command::Volumes { dim, phi } => {
            let spec = QuantumResolutionSpec::new(*dim, *phi)?;
            Report::new(json!({
                "dim": dim,
                "projective_volume": projective_volume(*dim)?,
                "sphere_area": sphere_area(*dim)?,
                "resolution_angle": phi,
                "resolution_volume": resolution_volume(&spec),
                "resolution_fraction": resolution_fraction(&spec),
                "small_angle_ratio": small_angle_ratio(&spec),
            }))
        }
        Command::Microstates { classical: true, dof, area_ratio, .. } => {
            let (Some(dof), Some(ratio)) = (dof, area_ratio) else {
                return Err(Error::InvalidArgument("--classical needs --dof and --area-ratio".into()));
            };
            let spec = PhaseSpaceSpec::from_ratio(*dof, positive("area-ratio", *ratio)?)?;
            Report::new(json!({
                "dof": dof,
                "area_ratio": ratio,
                "microstate_bits": classical_microstate_bits(&spec),
            }))
        }
        Command::Microstates { dim, phi, bits, .. } => {
            let dim = dim.ok_or_else(|| Error::InvalidArgument("--dim is required".into()))?;
            let spec = match (phi, bits) {
                (Some(phi), None) => QuantumResolutionSpec::new(dim, *phi)?,
                (None, Some(bits)) => QuantumResolutionSpec::from_bits_per_amplitude(dim, positive("bits", *bits)?)?,
                (None, None) => QuantumResolutionSpec::new(dim, crate::commsim::DEFAULT_RESOLUTION_ANGLE)?,
                (Some(_), Some(_)) => return Err(Error::InvalidArgument("give --phi or --bits, not both".into())),
            };
            let counts = classical_vs_quantum_counts(dim, spec.bits_per_amplitude())?;
            Report::new(json!({
                "dim": dim,
                "resolution_angle": spec.resolution_angle(),
                "resolution_angle_degrees": spec.resolution_angle().to_degrees(),
                "bits_per_amplitude": counts.bits_per_amplitude,
                "quantum_bits": counts.quantum_bits,
                "classical_bits": counts.classical_bits,
                "quantum_exceeds": counts.quantum_exceeds,
            }))
        }
        Command::Entropy { ensemble } => {
            let e = QuantumEnsemble::from_json(&read(ensemble)?)?;
            Report::new(info_report(&e)?)
        }
        Command::AvgInfo { dim, mc: false, .. } => {
            Report::new(InfoRecord::closed("H_bar", *dim, mean_measurement_info_closed(*dim)?))
        }
        Command::AvgInfo { dim, mc: true, samples, seed } => {
            let r = mean_measurement_info_mc(*dim, *samples, &mut RandomStream::new(*seed, 0))?;
            let record = InfoRecord::mc(
                "H_bar",
                *dim,
                r.mc_estimate_bits.unwrap_or(f64::NAN),
                r.mc_stderr_bits.unwrap_or(f64::NAN),
            );
            let mut value = serde_json::to_value(record)?;
            if let Value::Object(map) = &mut value {
                map.insert("closed_form_bits".into(), json!(r.closed_form_bits));
                map.insert("samples".into(), json!(samples));
                map.insert("consistent".into(), json!(r.is_consistent()));
            }
            Ok(Report { consistent: r.is_consistent(), ..Report::new(value)? })
        }
        Command::Accessible { dim } => Report::new(InfoRecord::closed("J", *dim, accessible_info_uniform(*dim)?)),
        Command::Commsim { config, counts } => {
            let config = ExperimentConfig::from_json(&read(config)?)?;
            let out = run_experiment(&config)?;
            if let (Some(path), Some(table)) = (counts, &out.counts) {
                table.write_csv(fs::File::create(path)?)?;
            }
            let consistent = out.report.check().is_ok();
            Ok(Report { consistent, ..Report::new(&out.report)? })
        }
        Command::CloneCheck { ensemble, copies, apparatus, tol } => {
            let e = QuantumEnsemble::from_json(&read(ensemble)?)?;
            let verdict = if *apparatus {
                apparatus_clonability_check(&e, *copies, *tol)?
            } else {
                clonability_check(&e, *copies, *tol)?
            };
            Ok(Report { rows: Some("violating_pairs"), ..Report::new(verdict)? })
        }
        Command::Schmidt { state, dims } => {
            let file: StateFile = serde_json::from_str(&read(state)?)?;
            let s = BipartiteState::new(file.into_state()?, dims.0, dims.1)?;
            let r = schmidt_decompose(&s)?;
            Report::new(json!({
                "dims": [dims.0, dims.1],
                "coefficients": r.coefficients.as_slice(),
                "rank": r.rank(1e-12),
                "entanglement_bits": shannon_info(&r.coefficients),
                "basis_a": r.basis_a.iter().map(encode_amplitudes).collect::<Vec<_>>(),
                "basis_b": r.basis_b.iter().map(encode_amplitudes).collect::<Vec<_>>(),
            }))
        }
        Command::PaperTable { seed } => {
            let table = paper_table::run(*seed)?;
            eprintln!("paper-table finished in {:.2} s", table.elapsed_seconds);
            Ok(Report { digits: TABLE_DIGITS, consistent: table.passed, rows: Some("checks"), ..Report::new(&table)? })
        }
    }
}

/// Rounds every float in `value` to `digits` significant digits; non-finite
/// floats become `null`.
pub fn round_floats(value: &mut Value, digits: usize) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x);
            *value = serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_floats(v, digits)),
        Value::Object(map) => map.values_mut().for_each(|v| round_floats(v, digits)),
        _ => {}
    }
}

fn cell(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        Value::Object(_) => value.to_string(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        _ => out.push((prefix.to_string(), cell(value))),
    }
}

fn to_csv(value: &Value, rows: Option<&str>) -> Result<String> {
    let records: Vec<Value> = match (rows, value) {
        (Some(key), Value::Object(map)) => {
            let shared: Map<String, Value> =
                map.iter().filter(|(k, _)| k.as_str() != key).map(|(k, v)| (k.clone(), v.clone())).collect();
            let list = map.get(key).and_then(Value::as_array).cloned().unwrap_or_default();
            if list.is_empty() {
                vec![Value::Object(shared)]
            } else {
                list.into_iter()
                    .map(|item| {
                        let mut row = shared.clone();
                        if let Value::Object(fields) = item {
                            row.extend(fields);
                        }
                        Value::Object(row)
                    })
                    .collect()
            }
        }
        _ => vec![value.clone()],
    };
    let flat: Vec<Vec<(String, String)>> = records
        .iter()
        .map(|r| {
            let mut cells = Vec::new();
            flatten("", r, &mut cells);
            cells
        })
        .collect();
    let mut header: Vec<String> = Vec::new();
    for row in &flat {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(&header).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    for row in &flat {
        let line = header.iter().map(|h| row.iter().find(|(k, _)| k == h).map_or("", |(_, v)| v.as_str()));
        writer.write_record(line).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn render(report: &mut Report, format: Format) -> Result<String> {
    round_floats(&mut report.value, report.digits);
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&report.value)? + "\n"),
        Format::Csv => to_csv(&report.value, report.rows),
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("QINFO_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("QINFO_THREADS must be a positive integer, got {raw:?}")))?;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Runs parsed arguments and returns the process exit status.
pub fn run(cli: &Cli) -> i32 {
    let outcome = configure_threads().and_then(|()| {
        let mut report = execute(&cli.command)?;
        let text = render(&mut report, cli.common.format)?;
        emit(&text, cli.common.output.as_deref())?;
        Ok(report.consistent)
    });
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("error: numerical consistency check failed");
            EXIT_NUMERICAL
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_INVALID
            }
        }
    }
}

/// Parses `std::env::args` and runs. Usage errors exit with status 2.
pub fn main() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
