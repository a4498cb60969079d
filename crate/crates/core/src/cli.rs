//! The `flowscope` command line.
//!
//! Every subcommand ends its output with one `VERDICT:` line. Exit codes:
//! 0 flow found or property holds, 1 no flow or property fails, 2 input
//! error, 3 undecided.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::extremal::{gamma, generate_extremal, ExtremalPartition};
use crate::flow::{
    brute_force_flow, find_causal_flow, verify_flow, CausalFlow, FlowCheck, FlowOutcome,
    SearchConfig, DEFAULT_BUDGET, DEFAULT_ORACLE_BOUND,
};
use crate::graph::{Geometry, Vertex};
use crate::io::{load_flow, load_geometry, serialize_flow, serialize_geometry};
use crate::sim::{
    measurement_order, random_angles, simulate_postselected, MeasurementPattern,
    DEFAULT_SIMULATION_BOUND,
};

pub const ORACLE_BOUND_ENV: &str = "FLOWSCOPE_ORACLE_BOUND";

/// Defect below which a simulated map counts as an isometry.
pub const ISOMETRY_TOLERANCE: f64 = 1e-9;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "flowscope", version, about = "Causal flows for one-way measurement geometries")]
struct Cli {
    /// Print only the verdict line.
    #[arg(long, global = true)]
    porcelain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare |E| with the edge bound Γ(n, |O|).
    CheckBound {
        geometry: PathBuf,
    },
    /// Search for a causal flow.
    FindFlow {
        geometry: PathBuf,
        /// Use the exhaustive oracle instead of the search pipeline.
        #[arg(long)]
        oracle: bool,
        /// Rejected partial matchings allowed before giving up.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Write the flow file here when one is found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a flow file against a geometry.
    VerifyFlow {
        geometry: PathBuf,
        flow: PathBuf,
    },
    /// Write the extremal geometry for a sorted partition, e.g. 6,8,9.
    GenExtremal {
        #[arg(long)]
        partition: String,
        #[arg(long)]
        out: PathBuf,
        /// Also write the defining path cover as a flow file.
        #[arg(long)]
        flow_out: Option<PathBuf>,
    },
    /// Simulate the post-selected pattern and report its isometry defect.
    Simulate {
        geometry: PathBuf,
        flow: PathBuf,
        /// Comma-separated label=radians pairs.
        #[arg(long, conflicts_with = "random_angles")]
        angles: Option<String>,
        /// Number of uniform random angle draws.
        #[arg(long)]
        random_angles: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print each simulated matrix.
        #[arg(long)]
        dump_map: bool,
        #[arg(long, default_value_t = DEFAULT_SIMULATION_BOUND)]
        max_qubits: usize,
    },
    /// Print the measurement order a flow induces.
    Order {
        geometry: PathBuf,
        flow: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    FlowFound,
    NoFlow,
    Undecided,
    PropertyHolds,
    PropertyFails,
}

impl Status {
    fn as_str(&self) -> &'static str {
        match self {
            Status::FlowFound => "flow-found",
            Status::NoFlow => "no-flow",
            Status::Undecided => "undecided",
            Status::PropertyHolds => "property-holds",
            Status::PropertyFails => "property-fails",
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            Status::FlowFound | Status::PropertyHolds => EXIT_OK,
            Status::NoFlow | Status::PropertyFails => EXIT_NEGATIVE,
            Status::Undecided => EXIT_UNDECIDED,
        }
    }
}

/// Final line of every successful invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub reason: Option<&'static str>,
    pub witness: Option<String>,
}

impl Verdict {
    fn new(status: Status) -> Self {
        Verdict {
            status,
            reason: None,
            witness: None,
        }
    }

    fn reason(mut self, reason: &'static str) -> Self {
        self.reason = Some(reason);
        self
    }

    fn witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VERDICT: {}", self.status.as_str())?;
        if let Some(reason) = self.reason {
            write!(f, " reason={reason}")?;
        }
        if let Some(witness) = &self.witness {
            write!(f, " witness={witness}")?;
        }
        Ok(())
    }
}

struct InputError(String);

impl<E: std::error::Error> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

/// Report lines printed before the verdict unless `--porcelain` is set.
struct Report<'a> {
    out: &'a mut dyn Write,
    quiet: bool,
}

impl Report<'_> {
    fn line(&mut self, text: impl fmt::Display) {
        if !self.quiet {
            let _ = writeln!(self.out, "{text}");
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let mut report = Report {
        out,
        quiet: cli.porcelain,
    };
    let result = match cli.command {
        Command::CheckBound { geometry, .. } => check_bound(&geometry, &mut report),
        Command::FindFlow {
            geometry,
            oracle,
            budget,
            out,
            ..
        } => find_flow(&geometry, oracle, budget, out.as_deref(), &mut report),
        Command::VerifyFlow { geometry, flow, .. } => verify(&geometry, &flow, &mut report),
        Command::GenExtremal {
            partition,
            out,
            flow_out,
            ..
        } => gen_extremal(&partition, &out, flow_out.as_deref(), &mut report),
        Command::Simulate {
            geometry,
            flow,
            angles,
            random_angles,
            seed,
            dump_map,
            max_qubits,
            ..
        } => simulate(
            &geometry,
            &flow,
            AngleSource::from_flags(angles, random_angles, seed),
            dump_map,
            max_qubits,
            &mut report,
        ),
        Command::Order { geometry, flow, .. } => order(&geometry, &flow, &mut report),
    };
    match result {
        Ok(verdict) => {
            let _ = writeln!(report.out, "{verdict}");
            verdict.status.exit_code()
        }
        Err(InputError(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
    }
}

fn read_geometry(path: &Path) -> Result<Geometry, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    load_geometry(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn read_flow(geom: &Geometry, path: &Path) -> Result<CausalFlow, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    load_flow(geom, &text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), InputError> {
    std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn oracle_bound() -> Result<usize, InputError> {
    match std::env::var(ORACLE_BOUND_ENV) {
        Ok(value) => value
            .trim()
            .parse()
            .map_err(|_| InputError(format!("{ORACLE_BOUND_ENV}={value:?} is not a count"))),
        Err(_) => Ok(DEFAULT_ORACLE_BOUND),
    }
}

fn labels(geom: &Geometry, vertices: &[Vertex]) -> String {
    vertices
        .iter()
        .map(|&v| geom.label(v))
        .collect::<Vec<_>>()
        .join(",")
}

fn check_bound(path: &Path, report: &mut Report) -> Result<Verdict, InputError> {
    let geom = read_geometry(path)?;
    let (n, k, m) = (geom.vertex_count(), geom.output_count(), geom.edge_count());
    let bound = gamma(n as u64, k as u64)?;
    report.line(format!("n = {n}"));
    report.line(format!("k = {k}"));
    report.line(format!("|E| = {m}"));
    report.line(format!("Γ(n,k) = {bound}"));
    if m as u64 > bound {
        report.line("reject");
        Ok(Verdict::new(Status::NoFlow).reason("edge-bound"))
    } else {
        report.line("pass");
        Ok(Verdict::new(Status::PropertyHolds))
    }
}

fn find_flow(
    path: &Path,
    oracle: bool,
    budget: usize,
    out: Option<&Path>,
    report: &mut Report,
) -> Result<Verdict, InputError> {
    let geom = read_geometry(path)?;
    let bound = oracle_bound()?;
    let found = |flow: CausalFlow, reason: &'static str, report: &mut Report| {
        let text = serialize_flow(&geom, &flow);
        match out {
            Some(out) => {
                write_file(out, &text)?;
                report.line(format!("flow written to {}", out.display()));
            }
            None => report.line(text.trim_end()),
        }
        Ok(Verdict::new(Status::FlowFound).reason(reason))
    };
    if oracle {
        return match brute_force_flow(&geom, bound)? {
            Some(flow) => found(flow, "oracle", report),
            None => Ok(Verdict::new(Status::NoFlow).reason("oracle")),
        };
    }
    let config = SearchConfig {
        budget,
        oracle_bound: bound,
        oracle_fallback: true,
    };
    match find_causal_flow(&geom, &config) {
        FlowOutcome::Found { flow, by_oracle } => {
            found(flow, if by_oracle { "oracle" } else { "certificate" }, report)
        }
        FlowOutcome::NoFlow { reason, cycle } => {
            let mut verdict = Verdict::new(Status::NoFlow).reason(reason.tag());
            if let Some(cycle) = cycle {
                report.line(format!("cycle: {}", labels(&geom, cycle.vertices())));
                verdict = verdict.witness(labels(&geom, cycle.vertices()));
            }
            Ok(verdict)
        }
        FlowOutcome::Undecided { rejected } => {
            report.line(format!("search budget exhausted after {rejected} rejections"));
            Ok(Verdict::new(Status::Undecided))
        }
    }
}

fn verify(geometry: &Path, flow: &Path, report: &mut Report) -> Result<Verdict, InputError> {
    let geom = read_geometry(geometry)?;
    let flow = read_flow(&geom, flow)?;
    match verify_flow(&geom, &flow)? {
        FlowCheck::Valid => {
            report.line("all flow conditions hold");
            Ok(Verdict::new(Status::PropertyHolds).reason("certificate"))
        }
        FlowCheck::Violated(violation) => {
            use crate::flow::Violation::*;
            let l = |v: Vertex| geom.label(v).to_string();
            let (condition, witness) = match violation {
                NotAdjacent { x, fx } => ("x ~ f(x)", format!("{},{}", l(x), l(fx))),
                SuccessorNotAfter { x, fx } => ("x < f(x)", format!("{},{}", l(x), l(fx))),
                NeighborNotAfter { x, fx, y } => {
                    ("y ~ f(x) => x < y", format!("{},{},{}", l(x), l(fx), l(y)))
                }
            };
            report.line(format!("violated: {condition} at {witness}"));
            Ok(Verdict::new(Status::PropertyFails)
                .reason("certificate")
                .witness(witness))
        }
    }
}

fn gen_extremal(
    partition: &str,
    out: &Path,
    flow_out: Option<&Path>,
    report: &mut Report,
) -> Result<Verdict, InputError> {
    let partition: ExtremalPartition = partition.parse()?;
    let (geom, cover) = generate_extremal(&partition);
    let (n, k, m) = (partition.total(), partition.len(), geom.edge_count());
    let bound = gamma(n as u64, k as u64)?;
    assert_eq!(m as u64, bound, "generated graph must meet the edge bound");
    write_file(out, &serialize_geometry(&geom))?;
    report.line(format!("n = {n}"));
    report.line(format!("k = {k}"));
    report.line(format!("|E| = {m}"));
    report.line(format!("Γ(n,k) = {bound}"));
    report.line(format!("geometry written to {}", out.display()));
    if let Some(flow_out) = flow_out {
        let f = cover.successor_function();
        let ranks = crate::flow::acyclic_order(&crate::flow::build_influencing_digraph(&geom, &f))
            .expect("generated digraph is acyclic");
        let flow = CausalFlow::new(f, ranks).expect("one rank per vertex");
        write_file(flow_out, &serialize_flow(&geom, &flow))?;
        report.line(format!("flow written to {}", flow_out.display()));
    }
    Ok(Verdict::new(Status::PropertyHolds))
}

enum AngleSource {
    Fixed(String),
    Random { draws: usize, seed: u64 },
}

impl AngleSource {
    fn from_flags(angles: Option<String>, random: Option<usize>, seed: u64) -> Self {
        match (angles, random) {
            (Some(text), _) => AngleSource::Fixed(text),
            (None, Some(draws)) => AngleSource::Random { draws, seed },
            (None, None) => AngleSource::Random { draws: 1, seed },
        }
    }
}

fn parse_angles(geom: &Geometry, text: &str) -> Result<BTreeMap<Vertex, f64>, InputError> {
    let index = geom.label_index();
    let mut angles = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (label, value) = item
            .split_once('=')
            .ok_or_else(|| InputError(format!("angle {item:?} is not label=radians")))?;
        let v = *index
            .get(label.trim())
            .ok_or_else(|| InputError(format!("angle for unknown vertex {label:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| InputError(format!("angle {value:?} is not a number")))?;
        angles.insert(v, value);
    }
    Ok(angles)
}

fn simulate(
    geometry: &Path,
    flow: &Path,
    angles: AngleSource,
    dump_map: bool,
    max_qubits: usize,
    report: &mut Report,
) -> Result<Verdict, InputError> {
    let geom = read_geometry(geometry)?;
    let flow = read_flow(&geom, flow)?;
    let flow_ok = verify_flow(&geom, &flow)?.is_valid();
    report.line(format!(
        "flow conditions: {}",
        if flow_ok { "hold" } else { "fail" }
    ));
    let draws: Vec<BTreeMap<Vertex, f64>> = match angles {
        AngleSource::Fixed(text) => vec![parse_angles(&geom, &text)?],
        AngleSource::Random { draws, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..draws).map(|_| random_angles(&geom, &mut rng)).collect()
        }
    };
    let mut worst: f64 = 0.0;
    let mut zero = false;
    for (i, angles) in draws.into_iter().enumerate() {
        let pattern = MeasurementPattern::new(geom.clone(), flow.clone(), angles)?;
        let map = simulate_postselected(&pattern, max_qubits)?;
        if dump_map {
            report.line(format!("map {i}:"));
            report.line(map.to_text().trim_end());
        }
        match map.isometry_defect() {
            Ok(defect) => {
                report.line(format!("draw {i}: defect = {defect:.3e}"));
                worst = worst.max(defect);
            }
            Err(_) => {
                report.line(format!("draw {i}: zero map"));
                zero = true;
            }
        }
    }
    report.line(format!("max defect = {worst:.3e}"));
    if zero {
        Ok(Verdict::new(Status::PropertyFails).witness("zero-map"))
    } else if worst < ISOMETRY_TOLERANCE {
        Ok(Verdict::new(Status::PropertyHolds).witness(format!("{worst:.3e}")))
    } else {
        Ok(Verdict::new(Status::PropertyFails).witness(format!("{worst:.3e}")))
    }
}

fn order(geometry: &Path, flow: &Path, report: &mut Report) -> Result<Verdict, InputError> {
    let geom = read_geometry(geometry)?;
    let flow = read_flow(&geom, flow)?;
    let check = verify_flow(&geom, &flow)?;
    let schedule = measurement_order(&flow);
    for &v in &schedule {
        report.line(format!("{} rank={}", geom.label(v), flow.rank(v)));
    }
    let verdict = if check.is_valid() {
        Verdict::new(Status::PropertyHolds)
    } else {
        Verdict::new(Status::PropertyFails).reason("certificate")
    };
    Ok(verdict.witness(labels(&geom, &schedule)))
}
