//! Command-line front end for the quantum weightless network simulator.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 resource cap hit,
//! 3 no configuration reaches the threshold.

mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use qsal::qstate::DEFAULT_QUBIT_CAP;
use qsal::qwnn::PresentationEvent;
use qsal::wnn::{builtin_arch, eval_network, oracle_search, performance, BUILTIN_ARCHS};
use qsal::{data, Architecture, Dataset, Error, LOrder, SalConfig, SalOutcome, SelectorString};

use report::{status_name, OracleReport, RunConfig, RunReport};

const CAP_ENV: &str = "QWNN_QUBIT_CAP";

#[derive(Parser)]
#[command(
    name = "qsal",
    version,
    about = "Quantum weightless neural networks and superposition-based learning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn selector bits for one architecture.
    Sal {
        /// Architecture file or builtin name.
        #[arg(long)]
        arch: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Learn the architecture and its selector bits together.
    ArchSelect {
        /// Candidate architecture files or builtin names.
        #[arg(long, num_args = 1.., required = true)]
        archs: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Classically enumerate every configuration reaching the threshold.
    Oracle {
        #[arg(long, num_args = 1.., required = true)]
        archs: Vec<String>,
        #[arg(long)]
        dataset: String,
        #[arg(long)]
        theta: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Evaluate a network with fixed selector bits on a dataset.
    Eval {
        #[arg(long)]
        arch: String,
        /// Selector bits; spaces, commas and underscores are ignored.
        #[arg(long)]
        selectors: String,
        #[arg(long)]
        dataset: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Dataset file or builtin name (xor, table1, parity4).
    #[arg(long)]
    dataset: String,
    /// Minimum number of correctly classified patterns.
    #[arg(long)]
    theta: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Order in which bit values are tried: 01 or 10.
    #[arg(long, default_value = "01", value_parser = parse_l_order)]
    l_order: LOrder,
    /// Print the per-bit trace and every pattern presentation.
    #[arg(long)]
    trace: bool,
    /// Write a machine-readable report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_l_order(s: &str) -> Result<LOrder, String> {
    LOrder::parse(s).ok_or_else(|| format!("expected 01 or 10, got `{s}`"))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::QubitCap { .. } | Error::EnumerationCap { .. } => Failure::Cap(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let result = match cli.command {
        Command::Sal { arch, run } => cmd_sal(&[arch], run, false, echo),
        Command::ArchSelect { archs, run } => cmd_sal(&archs, run, true, echo),
        Command::Oracle {
            archs,
            dataset,
            theta,
            json,
        } => cmd_oracle(&archs, &dataset, theta, json.as_deref(), echo),
        Command::Eval {
            arch,
            selectors,
            dataset,
        } => cmd_eval(&arch, &selectors, &dataset),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn qubit_cap() -> Result<usize, Failure> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{CAP_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_QUBIT_CAP),
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read `{path}`: {e}")))
}

fn load_dataset(source: &str) -> Result<Dataset, Failure> {
    if let Some(d) = data::builtin(source) {
        if Path::new(source).exists() {
            eprintln!("warning: `{source}` names a builtin dataset; the file of the same name is ignored");
        }
        return Ok(d);
    }
    Ok(data::parse_dataset(&read_file(source)?)?)
}

fn load_arch(source: &str) -> Result<Architecture, Failure> {
    if let Some(a) = builtin_arch(source) {
        if Path::new(source).exists() {
            eprintln!("warning: `{source}` names a builtin architecture; the file of the same name is ignored");
        }
        return Ok(a);
    }
    if !Path::new(source).exists() && !source.contains(['/', '.']) {
        return Err(Failure::Usage(format!(
            "`{source}` is neither a file nor a builtin architecture ({})",
            BUILTIN_ARCHS.join(", ")
        )));
    }
    let stem = Path::new(source).file_stem().and_then(|s| s.to_str()).unwrap_or("arch");
    Ok(Architecture::parse(&read_file(source)?, stem)?)
}

fn load_archs(specs: &[String]) -> Result<Vec<Architecture>, Failure> {
    specs.iter().map(|s| load_arch(s)).collect()
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write `{}`: {e}", path.display())))
}

fn print_event(e: &PresentationEvent) {
    let mut hist = String::new();
    for (score, count) in &e.perf_histogram {
        let _ = write!(hist, " {score}:{count}");
    }
    println!("  pattern {} entries {} perf{}", e.pattern_index, e.entry_count, hist);
}

fn cmd_sal(arch_specs: &[String], run: RunArgs, select: bool, echo: Vec<String>) -> CmdResult {
    let archs = load_archs(arch_specs)?;
    let data = load_dataset(&run.dataset)?;
    let cfg = SalConfig::new(run.theta)
        .with_seed(run.seed)
        .with_l_order(run.l_order)
        .with_qubit_cap(qubit_cap()?);

    let started = Instant::now();
    let outcome: SalOutcome = if run.trace {
        let mut listener = print_event;
        qsal::sal::sal_search::<f64>(&archs, &data, &cfg, Some(&mut listener))?
    } else {
        qsal::sal::sal_search::<f64>(&archs, &data, &cfg, None)?
    };
    let elapsed = started.elapsed();

    if run.trace {
        print!("{}", outcome.trace.to_text());
    }
    println!("status {}", status_name(outcome.status));
    if let (Some(i), Some(sel)) = (outcome.arch_index, outcome.selectors.as_ref()) {
        if select {
            println!("arch {} ({})", archs[i].name(), i);
        }
        println!("selectors {}", sel.grouped(&archs[i]));
        println!("performance {}/{}", outcome.verified_performance, data.len());
    }
    println!(
        "presentations {} nonlinear_calls {} peak_entries {}",
        outcome.trace.presentations, outcome.trace.nonlinear_calls, outcome.trace.peak_entries
    );
    println!("wall_time_ms {:.3}", elapsed.as_secs_f64() * 1000.0);

    if let Some(path) = &run.json {
        let config = RunConfig {
            theta: cfg.theta,
            seed: cfg.seed,
            l_order: cfg.l_order.as_str().to_string(),
            qubit_cap: cfg.qubit_cap,
        };
        write_json(path, &RunReport::new(echo, config, &outcome, &archs))?;
    }
    Ok(if outcome.is_found() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn cmd_oracle(specs: &[String], dataset: &str, theta: usize, json: Option<&Path>, echo: Vec<String>) -> CmdResult {
    let archs = load_archs(specs)?;
    let data = load_dataset(dataset)?;
    if theta > data.len() {
        return Err(Error::ThetaOutOfRange {
            theta,
            patterns: data.len(),
        }
        .into());
    }
    let hits = oracle_search(&archs, &data, theta)?;
    for h in &hits {
        let a = &archs[h.arch_index];
        println!(
            "{} {} {}/{}",
            a.name(),
            h.selectors.grouped(a),
            h.performance,
            data.len()
        );
    }
    println!("count {}", hits.len());
    if let Some(path) = json {
        write_json(path, &OracleReport::new(echo, theta, &hits, &archs))?;
    }
    Ok(if hits.is_empty() {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_eval(arch: &str, selectors: &str, dataset: &str) -> CmdResult {
    let arch = load_arch(arch)?;
    let data = load_dataset(dataset)?;
    let sel = SelectorString::parse(selectors)?;
    if sel.len() != arch.selector_count() {
        return Err(Error::WidthMismatch {
            what: "selectors".into(),
            expected: arch.selector_count(),
            actual: sel.len(),
        }
        .into());
    }
    for p in data.patterns() {
        let y = eval_network(&arch, &sel, &p.input)?;
        let bits: String = p.input.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let mark = if y == p.target { "ok" } else { "miss" };
        println!("{bits} -> {} (target {}) {mark}", y as u8, p.target as u8);
    }
    println!("performance {}/{}", performance(&arch, &sel, &data)?, data.len());
    Ok(ExitCode::SUCCESS)
}
