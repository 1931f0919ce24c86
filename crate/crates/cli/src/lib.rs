//! Command-line front end: `construct`, `encode`, `decode`, `puncture`,
//! `verify` and `simulate`.
//!
//! A code on disk is a path prefix `P` naming the pair `P.alist` and
//! `P.profile`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use e2rc::decode::DEFAULT_MAX_ITERS;
use e2rc::encode::{encode_back_substitution, encode_by_erasure, encode_sliding_window};
use e2rc::io::{format_bit_frames, format_indices, parse_bit_frames, parse_llr_frames};
use e2rc::peg::{audit_4cycles, DEFAULT_GIRTH_FLOOR};
use e2rc::puncture::rate_f64;
use e2rc::sim::{to_csv, DEFAULT_MAX_FRAMES, DEFAULT_MIN_FRAME_ERRORS};
use e2rc::{
    classify_sr, puncture_schedule, run_ber_sweep, BpDecoder, ConstructParams, DegreeDistribution,
    E2rcCode, EncodePlan, LlrFrame, SimConfig, SrLevel,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "e2rc",
    version,
    about = "Efficiently-encodable rate-compatible LDPC codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a code and write PREFIX.alist and PREFIX.profile.
    Construct(ConstructArgs),
    /// Encode message frames into codewords.
    Encode(EncodeArgs),
    /// Decode LLR frames with sum-product belief propagation.
    Decode(DecodeArgs),
    /// Write the punctured codeword indices for a target rate.
    Puncture(PunctureArgs),
    /// Audit the parity part, 4-cycles and step-recoverability of a code.
    Verify(CodeArg),
    /// Run a BER/FER sweep and write CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, clap::Args)]
struct CodeArg {
    /// Code path prefix (reads PREFIX.alist and PREFIX.profile).
    #[arg(long)]
    code: PathBuf,
}

#[derive(Debug, clap::Args)]
struct ConstructArgs {
    /// Parity symbol count.
    #[arg(long = "M")]
    m: usize,
    /// Message symbol count.
    #[arg(long = "K")]
    k: usize,
    /// Degree-2 parity column count; M - 1 selects the full regime.
    #[arg(long, conflicts_with = "dist")]
    nv2: Option<usize>,
    /// Degree distribution file (variable and check sections of degree:fraction lines).
    #[arg(long)]
    dist: Option<PathBuf>,
    /// Degree of every systematic column when no distribution is given.
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Shortest cycle allowed in the systematic part.
    #[arg(long, default_value_t = DEFAULT_GIRTH_FLOOR)]
    girth: usize,
    /// Steer check degrees toward the distribution's ρ.
    #[arg(long)]
    match_check_degrees: bool,
    /// Output path prefix.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Backsub,
    Window,
    Erasure,
    Plan,
}

#[derive(Debug, clap::Args)]
struct EncodeArgs {
    #[arg(long)]
    code: PathBuf,
    /// Message bits, one frame of K characters per line.
    #[arg(long = "in")]
    input: PathBuf,
    /// Codeword bits, one frame of N characters per line.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Backsub)]
    method: Method,
}

#[derive(Debug, clap::Args)]
struct DecodeArgs {
    #[arg(long)]
    code: PathBuf,
    /// LLRs, one value per line, frames separated by blank lines.
    #[arg(long)]
    llr_in: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Treat the schedule prefix for this rate as punctured.
    #[arg(long)]
    rate: Option<f64>,
    /// Hard decisions, one frame per line; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct PunctureArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    rate: f64,
    /// Punctured indices, one 0-based index per line.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Precision {
    F32,
    F64,
}

#[derive(Debug, clap::Args)]
#[command(
    after_help = "Eb/N0 is energy per information bit at the transmitted (punctured) rate; \
    the rate column reports that realized rate."
)]
struct SimulateArgs {
    #[arg(long)]
    code: PathBuf,
    /// Target rates, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    rates: Vec<f64>,
    /// Eb/N0 grid in dB, comma separated; `inf` is a noiseless channel.
    #[arg(long, value_delimiter = ',', required = true)]
    ebn0: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_MIN_FRAME_ERRORS)]
    min_frame_errors: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_FRAMES)]
    max_frames: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
    #[arg(long, value_enum, default_value_t = Precision::F64)]
    precision: Precision,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure of a subcommand, mapped onto an exit status.
#[derive(Debug)]
enum Failure {
    Runtime(String),
    Audit,
}

impl From<e2rc::Error> for Failure {
    fn from(e: e2rc::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Outcome {
    match path {
        Some(p) => write(p, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Runtime(e.to_string())),
    }
}

fn construct(args: &ConstructArgs, stdout: &mut dyn Write) -> Outcome {
    let mut params = ConstructParams::new(args.m, args.k, args.seed);
    params.column_degree = args.degree;
    params.girth_floor = args.girth;
    params.match_check_degrees = args.match_check_degrees;
    if let Some(nv2) = args.nv2 {
        params = params.with_nv2(nv2);
    }
    if let Some(path) = &args.dist {
        params = params.with_distribution(DegreeDistribution::parse(&read(path)?)?);
    }
    let code = E2rcCode::construct(&params)?;
    code.save(&args.out)?;
    let p = code.profile();
    let _ = writeln!(
        stdout,
        "wrote {}.alist and {}.profile: M={} K={} N={} nv2={} d={} gamma={:?}",
        args.out.display(),
        args.out.display(),
        p.m(),
        p.k(),
        p.n(),
        p.nv2(),
        p.depth(),
        p.gammas()
    );
    Ok(())
}

fn encode(args: &EncodeArgs) -> Outcome {
    let code = E2rcCode::load(&args.code)?;
    let messages = parse_bit_frames(&read(&args.input)?)?;
    let plan = match args.method {
        Method::Plan => Some(EncodePlan::build(&code.h2())?),
        _ => None,
    };
    let h2 = code.h2();
    let mut frames = Vec::with_capacity(messages.len());
    for m in &messages {
        let s = code.syndrome_target(m)?;
        let p = match (args.method, &plan) {
            (Method::Backsub, _) => encode_back_substitution(&h2, &s)?,
            (Method::Window, _) => encode_sliding_window(code.profile(), &s)?,
            (Method::Erasure, _) => encode_by_erasure(code.h(), code.profile(), m)?.0,
            (Method::Plan, Some(plan)) => plan.encode(&s)?,
            (Method::Plan, None) => unreachable!("plan built above"),
        };
        frames.push(m.iter().copied().chain(p).collect());
    }
    write(&args.out, &format_bit_frames(&frames))
}

fn decode(args: &DecodeArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let code = E2rcCode::load(&args.code)?;
    let mask = match args.rate {
        Some(r) => puncture_schedule(code.profile()).apply(r)?.mask(code.n()),
        None => vec![false; code.n()],
    };
    let decoder = BpDecoder::new(code.h());
    let mut frames = Vec::new();
    for (i, llr) in parse_llr_frames(&read(&args.llr_in)?)?
        .into_iter()
        .enumerate()
    {
        let result = decoder.decode(&LlrFrame::new(llr, mask.clone())?, args.max_iters)?;
        let _ = writeln!(
            stderr,
            "frame {i}: {} after {} iterations",
            if result.converged {
                "converged"
            } else {
                "not converged"
            },
            result.iterations_used
        );
        frames.push(result.hard_bits);
    }
    emit(args.out.as_deref(), &format_bit_frames(&frames), stdout)
}

fn puncture(args: &PunctureArgs, stdout: &mut dyn Write) -> Outcome {
    let code = E2rcCode::load(&args.code)?;
    let punctured = puncture_schedule(code.profile()).apply(args.rate)?;
    write(&args.out, &format_indices(&punctured.columns))?;
    let _ = writeln!(
        stdout,
        "{} punctured, realized rate {} ({:.6})",
        punctured.columns.len(),
        punctured.realized_rate,
        rate_f64(punctured.realized_rate)
    );
    Ok(())
}

fn verify(args: &CodeArg, stdout: &mut dyn Write) -> Outcome {
    let code = E2rcCode::load(&args.code)?;
    let report = code.verify();
    let cycles = audit_4cycles(code.h());
    let p = code.profile();
    let schedule = puncture_schedule(p);
    let levels = classify_sr(code.h(), &schedule.order);
    let (mut exact, mut early, mut late, mut lost) = (0, 0, 0, 0);
    for &c in &schedule.order {
        let (block, _) = p
            .block_of_h2_column(c - p.k())
            .expect("scheduled column is in T");
        match levels[c] {
            SrLevel::Step(s) if s == block => exact += 1,
            SrLevel::Step(s) if s < block => early += 1,
            SrLevel::Step(_) => late += 1,
            SrLevel::Unrecoverable => lost += 1,
        }
    }
    let mut text = format!("{report}");
    let _ = writeln!(
        text,
        "{}: 4-cycle audit ({} found)",
        if cycles.is_empty() { "PASS" } else { "FAIL" },
        cycles.len()
    );
    let _ = writeln!(
        text,
        "{}: step recovery under full puncturing ({exact} at block level, {early} earlier, {late} later, {lost} unrecoverable)",
        if lost == 0 { "PASS" } else { "FAIL" },
    );
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    if report.all_passed() && cycles.is_empty() && lost == 0 {
        Ok(())
    } else {
        Err(Failure::Audit)
    }
}

fn simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Outcome {
    let code = E2rcCode::load(&args.code)?;
    let cfg = SimConfig {
        rates: args.rates.clone(),
        ebn0_db: args.ebn0.clone(),
        min_frame_errors: args.min_frame_errors,
        max_frames: args.max_frames,
        seed: args.seed,
        max_iters: args.max_iters,
    };
    let records = match args.precision {
        Precision::F32 => run_ber_sweep::<f32>(&code, &cfg)?,
        Precision::F64 => run_ber_sweep::<f64>(&code, &cfg)?,
    };
    emit(args.out.as_deref(), &to_csv(&records), stdout)
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return status;
        }
    };
    let outcome = match &cli.command {
        Command::Construct(a) => construct(a, stdout),
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a, stdout, stderr),
        Command::Puncture(a) => puncture(a, stdout),
        Command::Verify(a) => verify(a, stdout),
        Command::Simulate(a) => simulate(a, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Audit) => EXIT_FAILURE,
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}
