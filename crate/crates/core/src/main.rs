//! Batch front-end: reads map or cover specs as JSON, runs the requested
//! analysis, and writes a deterministic JSON (or CSV) report.
//!
//! Exit codes: 0 analysis ran (verdict outcomes never change it); 1 usage;
//! 2 input spec did not parse; 3 the math failed hard enough that nothing
//! requested could be produced.

use clap::{Args, Parser, Subcommand};
use harmap::cover::{verify_cover_with, CoverFamily};
use harmap::criteria::{check, CheckParams, Criterion};
use harmap::error::Error;
use harmap::expr::AnalyticExpr;
use harmap::harmonic::HarmonicMap;
use harmap::operators::{channel_quantity, harmonic_operators, Channel};
use harmap::report::{
    profile_csv, to_json_string, ChannelSweep, CoverSpec, EffectiveConfig, MapSpec, NormSummary,
    OperatorSample, OperatorsSection, Report,
};
use harmap::sampling::{limsup_estimate, sup_norm, SweepConfig};
use harmap::valence::{valence_sweep, GridSpec};
use num_complex::Complex64;
use std::fmt::Display;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "harmap",
    version,
    about = "Analyze planar harmonic mappings on the unit disk: Schwarzian operators, \
             weighted sup-norms, univalence and valence checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: operator norms, radial profiles, and all applicable
    /// criterion verdicts for one map spec.
    Analyze(AnalyzeArgs),
    /// Count preimages over a target grid with winding and Newton oracles.
    Valence(ValenceArgs),
    /// Criterion verdicts only.
    Criteria(CriteriaArgs),
    /// Verify a candidate annulus cover family.
    CoverVerify(CoverVerifyArgs),
    /// Radial profiles of the weighted channels, JSON or CSV.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Path to the input spec (JSON).
    input: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LadderArgs {
    /// Dyadic radius ladder depth, between 6 and 20.
    #[arg(long, default_value_t = 13)]
    ladder_depth: usize,
    /// Base angular sample count per circle.
    #[arg(long = "angular-base", default_value_t = 256)]
    angular_base: usize,
}

impl LadderArgs {
    fn sweep(&self) -> Result<SweepConfig, CliError> {
        if !(6..=20).contains(&self.ladder_depth) {
            return Err(usage(format!(
                "--ladder-depth must lie in [6, 20], got {}",
                self.ladder_depth
            )));
        }
        if self.angular_base < 8 {
            return Err(usage(format!(
                "--angular-base must be at least 8, got {}",
                self.angular_base
            )));
        }
        Ok(SweepConfig {
            ladder_depth: self.ladder_depth,
            base_angular: self.angular_base,
            ..SweepConfig::default()
        })
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    ladder: LadderArgs,
    /// Threshold for the limsup Schwarzian criterion.
    #[arg(long)]
    delta0: Option<f64>,
    /// Inner radius for the annulus Schwarzian criterion.
    #[arg(long)]
    r0: Option<f64>,
}

#[derive(Args)]
struct ValenceArgs {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    ladder: LadderArgs,
    /// Circle radius the winding contour runs on.
    #[arg(long)]
    radius: f64,
    /// Target grid: re lo,hi,n im lo,hi,n.
    #[arg(long, num_args = 4, allow_hyphen_values = true,
          value_names = ["AXIS", "LO,HI,N", "AXIS", "LO,HI,N"])]
    grid: Option<Vec<String>>,
}

#[derive(Args)]
struct CriteriaArgs {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    ladder: LadderArgs,
    /// Threshold for the limsup Schwarzian criterion.
    #[arg(long)]
    delta0: Option<f64>,
    /// Inner radius for the annulus Schwarzian criterion.
    #[arg(long)]
    r0: Option<f64>,
}

#[derive(Args)]
struct CoverVerifyArgs {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    ladder: LadderArgs,
    /// Norm bound the pre-Schwarzian channel is held against.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Quasi-random annulus sample count for coverage and containment.
    #[arg(long = "annulus-samples", default_value_t = 256)]
    annulus_samples: usize,
    /// Quasi-random point pair count for the injectivity spot check.
    #[arg(long = "pair-samples", default_value_t = 256)]
    pair_samples: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    ladder: LadderArgs,
    /// Channel to export when --out ends in .csv:
    /// pre_schwarzian, schwarzian, becker, or hyperbolic.
    #[arg(long, default_value = "becker")]
    channel: String,
}

struct CliError {
    code: u8,
    message: String,
}

fn usage(message: impl Display) -> CliError {
    CliError { code: 1, message: message.to_string() }
}

fn spec_error(message: impl Display) -> CliError {
    CliError { code: 2, message: message.to_string() }
}

fn math_error(message: impl Display) -> CliError {
    CliError { code: 3, message: message.to_string() }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Keep clap's rendering (it includes usage and help text) but
            // remap every parse failure onto the usage exit code. Help and
            // version requests are successes.
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("harmap: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Valence(args) => cmd_valence(args),
        Command::Criteria(args) => cmd_criteria(args),
        Command::CoverVerify(args) => cmd_cover_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

fn load_map(path: &PathBuf) -> Result<HarmonicMap, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| spec_error(format!("cannot read {}: {e}", path.display())))?;
    let spec: MapSpec = serde_json::from_str(&text)
        .map_err(|e| spec_error(format!("{} is not a map spec: {e}", path.display())))?;
    let h = AnalyticExpr::parse(&spec.h)
        .map_err(|e| spec_error(format!("h does not parse: {e}")))?;
    let g = AnalyticExpr::parse(&spec.g)
        .map_err(|e| spec_error(format!("g does not parse: {e}")))?;
    HarmonicMap::new(&spec.label, h, g).map_err(|e| math_error(format!("invalid map: {e}")))
}

fn load_cover(path: &PathBuf) -> Result<CoverFamily, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| spec_error(format!("cannot read {}: {e}", path.display())))?;
    let spec: CoverSpec = serde_json::from_str(&text)
        .map_err(|e| spec_error(format!("{} is not a cover spec: {e}", path.display())))?;
    let psi = AnalyticExpr::parse(&spec.psi)
        .map_err(|e| spec_error(format!("psi does not parse: {e}")))?;
    CoverFamily::new(psi, spec.m, spec.rho)
        .map_err(|e| spec_error(format!("invalid cover spec: {e}")))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_json(out: &Option<PathBuf>, report: &Report) -> Result<(), CliError> {
    let mut s = to_json_string(report);
    s.push('\n');
    write_output(out, &s)
}

const CHANNELS: [Channel; 4] =
    [Channel::PreSchwarzian, Channel::Nehari, Channel::Becker, Channel::Hyperbolic];

fn channel_sweeps(map: &HarmonicMap, cfg: &SweepConfig) -> Vec<ChannelSweep> {
    CHANNELS
        .iter()
        .map(|&ch| {
            let q = channel_quantity(map, ch);
            let (estimate, profile) = sup_norm(&q, cfg);
            let limsup = limsup_estimate(&profile).ok();
            ChannelSweep { channel: ch.name(), estimate, profile, limsup }
        })
        .collect()
}

/// Fixed probe points for the operator sample table. Points where the
/// operators are undefined (critical points, unimodular dilatation) are
/// skipped rather than poisoning the report.
const SAMPLE_POINTS: [(f64, f64); 5] =
    [(0.0, 0.0), (0.25, 0.0), (0.0, 0.5), (-0.4, 0.3), (0.7, -0.2)];

fn operator_samples(map: &HarmonicMap) -> Vec<OperatorSample> {
    SAMPLE_POINTS
        .iter()
        .filter_map(|&(re, im)| {
            let z = Complex64::new(re, im);
            harmonic_operators(map, z).ok().map(|v| OperatorSample::new(z, v))
        })
        .collect()
}

/// Run every criterion that applies; inapplicable ones become notes, hard
/// failures become notes too so one bad criterion cannot sink the report.
fn collect_verdicts(
    map: &HarmonicMap,
    params: &CheckParams,
) -> (Vec<harmap::criteria::Verdict>, Vec<String>) {
    let mut verdicts = Vec::new();
    let mut notes = Vec::new();
    for criterion in Criterion::ALL {
        match check(map, criterion, params) {
            Ok(v) => verdicts.push(v),
            Err(Error::AnalyticOnly { .. }) => {
                notes.push(format!("{}: skipped, requires g = 0", criterion.wire_name()));
            }
            Err(Error::MissingParam { name }) => {
                notes.push(format!("{}: skipped, --{} not given", criterion.wire_name(), name));
            }
            Err(e) => {
                notes.push(format!("{}: failed: {e}", criterion.wire_name()));
            }
        }
    }
    (verdicts, notes)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let sweep = args.ladder.sweep()?;
    let map = load_map(&args.io.input)?;
    let params = CheckParams { delta0: args.delta0, r0: args.r0, sweep };

    let profiles = channel_sweeps(&map, &sweep);
    let sup_norms: Vec<NormSummary> = profiles
        .iter()
        .map(|p| NormSummary { channel: p.channel, estimate: p.estimate })
        .collect();
    let (verdicts, notes) = collect_verdicts(&map, &params);

    let mut config = EffectiveConfig::new("analyze", sweep);
    config.delta0 = args.delta0;
    config.r0 = args.r0;

    let report = Report {
        label: map.label().to_string(),
        config: Some(config),
        operators: Some(OperatorsSection { sup_norms, samples: operator_samples(&map) }),
        profiles: Some(profiles),
        verdicts: Some(verdicts),
        notes,
        ..Report::default()
    };
    emit_json(&args.io.out, &report)
}

fn parse_axis(text: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(usage(format!("grid axis must be lo,hi,n, got {text:?}")));
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| usage(format!("bad grid lo {text:?}")))?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| usage(format!("bad grid hi {text:?}")))?;
    let n: usize = parts[2].trim().parse().map_err(|_| usage(format!("bad grid n {text:?}")))?;
    Ok((lo, hi, n))
}

fn parse_grid(tokens: &Option<Vec<String>>) -> Result<GridSpec, CliError> {
    let tokens = match tokens {
        None => return GridSpec::new((-0.5, 0.5, 5), (-0.5, 0.5, 5)).map_err(|e| usage(e)),
        Some(t) => t,
    };
    let mut re = None;
    let mut im = None;
    for pair in tokens.chunks(2) {
        match pair[0].as_str() {
            "re" => re = Some(parse_axis(&pair[1])?),
            "im" => im = Some(parse_axis(&pair[1])?),
            other => return Err(usage(format!("grid axis must be re or im, got {other:?}"))),
        }
    }
    match (re, im) {
        (Some(re), Some(im)) => GridSpec::new(re, im).map_err(|e| usage(e)),
        _ => Err(usage("grid needs both axes: --grid re lo,hi,n im lo,hi,n")),
    }
}

fn cmd_valence(args: ValenceArgs) -> Result<(), CliError> {
    let sweep = args.ladder.sweep()?;
    let grid = parse_grid(&args.grid)?;
    let map = load_map(&args.io.input)?;
    let valence = valence_sweep(&map, args.radius, &grid).map_err(|e| match e {
        Error::BadGrid { .. } => usage(e),
        other => math_error(other),
    })?;

    let mut config = EffectiveConfig::new("valence", sweep);
    config.radius = Some(args.radius);
    config.grid = Some(grid);

    let report = Report {
        label: map.label().to_string(),
        config: Some(config),
        valence: Some(valence),
        ..Report::default()
    };
    emit_json(&args.io.out, &report)
}

fn cmd_criteria(args: CriteriaArgs) -> Result<(), CliError> {
    let sweep = args.ladder.sweep()?;
    let map = load_map(&args.io.input)?;
    let params = CheckParams { delta0: args.delta0, r0: args.r0, sweep };
    let (verdicts, notes) = collect_verdicts(&map, &params);
    if verdicts.is_empty() && notes.iter().any(|n| n.contains("failed")) {
        return Err(math_error(format!(
            "no criterion could be evaluated: {}",
            notes.join("; ")
        )));
    }

    let mut config = EffectiveConfig::new("criteria", sweep);
    config.delta0 = args.delta0;
    config.r0 = args.r0;

    let report = Report {
        label: map.label().to_string(),
        config: Some(config),
        verdicts: Some(verdicts),
        notes,
        ..Report::default()
    };
    emit_json(&args.io.out, &report)
}

fn cmd_cover_verify(args: CoverVerifyArgs) -> Result<(), CliError> {
    let sweep = args.ladder.sweep()?;
    if !(args.alpha > 0.0) {
        return Err(usage(format!("--alpha must be positive, got {}", args.alpha)));
    }
    if args.annulus_samples == 0 {
        return Err(usage("--annulus-samples must be positive"));
    }
    let family = load_cover(&args.io.input)?;
    let cover = verify_cover_with(
        &family,
        args.alpha,
        args.annulus_samples,
        args.pair_samples,
        &sweep,
    )
    .map_err(|e| math_error(e))?;

    let mut config = EffectiveConfig::new("cover-verify", sweep);
    config.alpha = Some(args.alpha);
    config.annulus_samples = Some(args.annulus_samples);
    config.pair_samples = Some(args.pair_samples);

    let report = Report {
        label: family.psi.to_string(),
        config: Some(config),
        cover: Some(cover),
        ..Report::default()
    };
    emit_json(&args.io.out, &report)
}

fn channel_by_name(name: &str) -> Result<Channel, CliError> {
    match name {
        "pre_schwarzian" | "pre" => Ok(Channel::PreSchwarzian),
        "schwarzian" | "nehari" => Ok(Channel::Nehari),
        "becker" => Ok(Channel::Becker),
        "hyperbolic" | "hyp" => Ok(Channel::Hyperbolic),
        other => Err(usage(format!(
            "unknown channel {other:?}; use pre_schwarzian, schwarzian, becker, or hyperbolic"
        ))),
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let sweep = args.ladder.sweep()?;
    let channel = channel_by_name(&args.channel)?;
    let map = load_map(&args.io.input)?;

    let csv_out = args
        .io
        .out
        .as_ref()
        .map(|p| p.extension().is_some_and(|e| e == "csv"))
        .unwrap_or(false);
    if csv_out {
        let q = channel_quantity(&map, channel);
        let (_, profile) = sup_norm(&q, &sweep);
        return write_output(&args.io.out, &profile_csv(&profile));
    }

    let report = Report {
        label: map.label().to_string(),
        config: Some(EffectiveConfig::new("sweep", sweep)),
        profiles: Some(channel_sweeps(&map, &sweep)),
        ..Report::default()
    };
    emit_json(&args.io.out, &report)
}
