//! Command-line front end: single-point correlation reports, strength and
//! noise sweeps to CSV, canned result figures, and a self-verification
//! battery. Usage errors exit with 2, numerical failures with 3.

mod figures;
mod svg;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qdiscord::channels::{evolve_params, p_of_time};
use qdiscord::discord::{CorrelationReport, OptimizerConfig};
use qdiscord::measurement::MeasurementStrength;
use qdiscord::states::{ValidationMode, XStateParams};
use qdiscord::sweep::{self, fmt_sig, SweepSpec, SweepVariable};
use qdiscord::verify::{self, VerifyConfig};

/// Application-level error: wraps library errors and I/O, plus plain usage
/// mistakes that clap cannot catch (e.g. a malformed `--grid`).
#[derive(Debug)]
pub enum AppError {
    Core(qdiscord::Error),
    Io(std::io::Error),
    Usage(String),
}

pub type AppResult<T> = Result<T, AppError>;

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Io(e) => write!(f, "{e}"),
            AppError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<qdiscord::Error> for AppError {
    fn from(e: qdiscord::Error) -> Self {
        AppError::Core(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

impl AppError {
    /// 2 for anything the caller got wrong (bad input, bad path), 3 for
    /// failures inside the computation itself.
    fn exit_code(&self) -> u8 {
        use qdiscord::Error as E;
        match self {
            AppError::Usage(_) | AppError::Io(_) => 2,
            AppError::Core(e) => match e {
                E::InvalidParams { .. }
                | E::Domain { .. }
                | E::LogDomain { .. }
                | E::NotUnit { .. }
                | E::BadOptimizerConfig { .. } => 2,
                _ => 3,
            },
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qdiscord",
    version,
    about = "Quantum discord and weak-measurement super discord for two-qubit X states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every correlation measure for one state and strength
    Compute(ComputeArgs),
    /// Sweep the measurement strength and write a CSV
    Sweep(SweepArgs),
    /// Sweep phase-flip noise at fixed strength and write a CSV
    Channel(ChannelArgs),
    /// Write the canned result figures (CSV + SVG)
    Figures(FiguresArgs),
    /// Run the self-verification battery
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Ordered family: |c1| < |c2| < |c3| and 0 < |s| < 1 - |c3|
    Strict,
    /// Any physical X state
    Relaxed,
}

impl ModeArg {
    fn core(self) -> ValidationMode {
        match self {
            ModeArg::Strict => ValidationMode::Strict,
            ModeArg::Relaxed => ValidationMode::Relaxed,
        }
    }
}

#[derive(Args)]
struct StateArgs {
    /// Bloch z bias of the measured qubit
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    /// sigma_x correlation coefficient
    #[arg(long, allow_negative_numbers = true)]
    c1: f64,
    /// sigma_y correlation coefficient
    #[arg(long, allow_negative_numbers = true)]
    c2: f64,
    /// sigma_z correlation coefficient
    #[arg(long, allow_negative_numbers = true)]
    c3: f64,
    /// Parameter validation to apply
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    mode: ModeArg,
}

impl StateArgs {
    fn params(&self) -> XStateParams {
        XStateParams::new(self.s, self.c1, self.c2, self.c3)
    }
}

#[derive(Args)]
struct OptArgs {
    /// Direction-search grid as POLARxAZIMUTH points
    #[arg(long, default_value = "61x121")]
    grid: String,
    /// Simplex refinement tolerance for the oracle minimizers
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Seed recorded with sweep output (the search itself is deterministic)
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl OptArgs {
    fn config(&self) -> AppResult<OptimizerConfig> {
        let (polar_steps, azimuth_steps) = parse_grid(&self.grid)?;
        Ok(OptimizerConfig {
            polar_steps,
            azimuth_steps,
            refine_tolerance: self.tol,
            seed: self.seed,
            ..OptimizerConfig::default()
        })
    }
}

fn parse_grid(s: &str) -> AppResult<(usize, usize)> {
    let err = || AppError::Usage(format!("--grid expects POLARxAZIMUTH (e.g. 61x121), got `{s}`"));
    let (polar, azimuth) = s.split_once('x').ok_or_else(err)?;
    Ok((polar.parse().map_err(|_| err())?, azimuth.parse().map_err(|_| err())?))
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Measurement strength
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    /// Send the state through two-sided phase flips with this probability first
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["gamma", "time"])]
    p: Option<f64>,
    /// Decay rate: with --time, sets the flip probability to 1 - exp(-gamma t)
    #[arg(long, allow_negative_numbers = true, requires = "time")]
    gamma: Option<f64>,
    /// Evolution time for --gamma
    #[arg(long, allow_negative_numbers = true, requires = "gamma")]
    time: Option<f64>,
    #[command(flatten)]
    opt: OptArgs,
    /// Also write the report as JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Strength range start
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    from: f64,
    /// Strength range end
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    to: f64,
    /// Evenly spaced points, endpoints included
    #[arg(long, default_value_t = 201)]
    steps: usize,
    /// Worker threads for the oracle columns
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    opt: OptArgs,
    /// CSV output path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ChannelArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Fixed measurement strength during the noise sweep
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    /// Range start: flip probability, or time when --gamma is given
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    from: f64,
    /// Range end
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    to: f64,
    /// Evenly spaced points, endpoints included
    #[arg(long, default_value_t = 101)]
    steps: usize,
    /// Interpret --from/--to as times under this decay rate
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Worker threads for the oracle columns
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    opt: OptArgs,
    /// CSV output path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FiguresArgs {
    /// Which figure to write: 1a, 1b, 2a, 2b, 2c, or all
    #[arg(long, default_value = "all")]
    figure: String,
    /// Output directory, created if missing
    #[arg(long, default_value = "figures")]
    outdir: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Baseline sample budget; criteria scale their counts from it
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Seed for the randomized criteria
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Agreement tolerance for oracle-vs-closed-form checks
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Direction-search grid for the oracles, POLARxAZIMUTH
    #[arg(long, default_value = "61x121")]
    grid: String,
}

/// `fs::write` with the path folded into the error message.
pub fn write_file(path: &std::path::Path, contents: &str) -> AppResult<()> {
    fs::write(path, contents).map_err(|e| {
        AppError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => run_compute(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Channel(a) => run_channel(a),
        Command::Figures(a) => run_figures(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run_compute(args: ComputeArgs) -> AppResult<u8> {
    let params = args.state.params();
    let mode = args.state.mode.core();
    params.validate(mode)?;
    let cfg = args.opt.config()?;
    let flip = match (args.p, args.gamma, args.time) {
        (Some(p), _, _) => Some(p),
        (None, Some(g), Some(t)) => Some(p_of_time(g, t)?),
        _ => None,
    };
    // Noise breaks the strict ordering of the family, so the evolved state is
    // validated in relaxed mode regardless of the requested mode.
    let (working, work_mode) = match flip {
        Some(p) => (evolve_params(&params, p)?, ValidationMode::Relaxed),
        None => (params, mode),
    };
    let x = MeasurementStrength::new(args.x)?;
    let report = CorrelationReport::compute(&working, &x, work_mode, &cfg)?;

    println!(
        "state: s = {}, c1 = {}, c2 = {}, c3 = {}",
        fmt_sig(params.s),
        fmt_sig(params.c1),
        fmt_sig(params.c2),
        fmt_sig(params.c3)
    );
    if let Some(p) = flip {
        println!(
            "dephased with p = {}: c1 = {}, c2 = {}",
            fmt_sig(p),
            fmt_sig(working.c1),
            fmt_sig(working.c2)
        );
    }
    println!("measurement strength x = {}", fmt_sig(report.x));
    println!("mutual information       {}", fmt_sig(report.mutual_information));
    println!("discord (closed form)    {}", fmt_sig(report.qd_closed));
    println!("discord (oracle)         {}", fmt_sig(report.qd_oracle));
    println!("super discord (closed)   {}", fmt_sig(report.sqd_closed));
    println!("super discord (oracle)   {}", fmt_sig(report.sqd_oracle));
    let d = &report.argmin_direction;
    println!(
        "argmin direction         ({}, {}, {})",
        fmt_sig(d.z1),
        fmt_sig(d.z2),
        fmt_sig(d.z3)
    );
    println!("closed-form residual     {}", fmt_sig(report.closed_form_residual));
    if report.clamped {
        eprintln!("note: a tiny negative value (within 1e-9 of zero) was clamped to 0");
    }
    if let Some(path) = &args.out {
        write_file(path, &report_json(&report, flip))?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn report_json(report: &CorrelationReport, flip: Option<f64>) -> String {
    let d = &report.argmin_direction;
    let value = serde_json::json!({
        "params": {
            "s": report.params.s,
            "c1": report.params.c1,
            "c2": report.params.c2,
            "c3": report.params.c3,
        },
        "x": report.x,
        "flip_probability": flip,
        "mutual_information": report.mutual_information,
        "qd_closed": report.qd_closed,
        "qd_oracle": report.qd_oracle,
        "sqd_paper": report.sqd_closed,
        "sqd_oracle": report.sqd_oracle,
        "argmin_direction": [d.z1, d.z2, d.z3],
        "paper_residual": report.closed_form_residual,
        "clamped": report.clamped,
    });
    let mut out = serde_json::to_string_pretty(&value).expect("report serializes");
    out.push('\n');
    out
}

fn write_sweep(spec: &SweepSpec, cfg: &OptimizerConfig, workers: usize, out: &PathBuf) -> AppResult<u8> {
    let text = sweep::csv(spec, cfg, workers)?;
    write_file(out, &text)?;
    println!("wrote {} rows to {}", spec.steps, out.display());
    Ok(0)
}

fn run_sweep(args: SweepArgs) -> AppResult<u8> {
    let cfg = args.opt.config()?;
    let spec = SweepSpec {
        params: args.state.params(),
        variable: SweepVariable::Strength,
        from: args.from,
        to: args.to,
        steps: args.steps,
        mode: args.state.mode.core(),
    };
    write_sweep(&spec, &cfg, args.workers, &args.out)
}

fn run_channel(args: ChannelArgs) -> AppResult<u8> {
    let cfg = args.opt.config()?;
    let (from, to) = match args.gamma {
        Some(g) => (p_of_time(g, args.from)?, p_of_time(g, args.to)?),
        None => (args.from, args.to),
    };
    let spec = SweepSpec {
        params: args.state.params(),
        variable: SweepVariable::FlipProbability { x: args.x },
        from,
        to,
        steps: args.steps,
        mode: args.state.mode.core(),
    };
    write_sweep(&spec, &cfg, args.workers, &args.out)
}

fn run_figures(args: FiguresArgs) -> AppResult<u8> {
    let ids: Vec<&str> = if args.figure == "all" {
        figures::FIGURE_IDS.to_vec()
    } else {
        vec![args.figure.as_str()]
    };
    for id in ids {
        for path in figures::write_figure(id, &args.outdir)? {
            println!("wrote {}", path.display());
        }
    }
    Ok(0)
}

fn run_verify(args: VerifyArgs) -> AppResult<u8> {
    let (polar_steps, azimuth_steps) = parse_grid(&args.grid)?;
    let cfg = VerifyConfig {
        samples: args.samples,
        seed: args.seed,
        tol: args.tol,
        optimizer: OptimizerConfig {
            polar_steps,
            azimuth_steps,
            ..OptimizerConfig::default()
        },
    };
    let outcomes = verify::run_all(&cfg);
    for o in &outcomes {
        println!("{}", o.line());
        if !o.pass && !o.detail.is_empty() {
            for line in o.detail.lines() {
                println!("    {line}");
            }
        }
    }
    let hard_failures = outcomes.iter().filter(|o| o.hard && !o.pass).count();
    let soft_failures = outcomes.iter().filter(|o| !o.hard && !o.pass).count();
    if hard_failures == 0 {
        println!(
            "verification passed ({} criteria, {} soft failures)",
            outcomes.len(),
            soft_failures
        );
        Ok(0)
    } else {
        println!("verification FAILED ({hard_failures} hard criteria)");
        Ok(3)
    }
}
