//! Command-line interface for interference-channel rate regions.
//!
//! One command per invocation: game values, rate-region geometry,
//! inequality-system verification, Monte-Carlo link simulation, or channel
//! export. All commands read the same `--config` schema (see [`config`]) and
//! emit deterministic JSON, CSV, or SVG.

mod config;
mod emit;
mod error;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use icregions::channel::DmIcFile;
use icregions::fm::verify_equivalence;
use icregions::game::{
    max_classical_win_prob, quantum_average_win_prob, quantum_win_prob, QuantumStrategy,
    QuestionPair,
};
use icregions::regions::{
    classical_outer_region, et_hk_region, et_outer_region, hk_classical_region, mac_region,
    region_vertices, time_sharing_warning, InfoTermSet, RateRegion2D,
};
use icregions::sim::{
    estimate_error, question_codebooks, question_passing_config, CodebookSource, SimConfig,
    SimSetup,
};

use config::{load_config, resolve, Resolved};
use emit::{csv_doc, json_line, region_svg, write_output, Format};
use error::{CliError, Result};

/// Default typicality tolerance for simulations that specify their own rates.
const DEFAULT_DELTA: f64 = 0.1;
const DEFAULT_TRIALS: usize = 10_000;
const DEFAULT_SAMPLES: usize = 200;

#[derive(Parser)]
#[command(
    name = "icregions",
    version,
    about = "Rate regions and game values for two-user interference channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration: a JSON file path, or inline JSON starting with '{'
    #[arg(long, global = true, value_name = "PATH|JSON")]
    config: Option<String>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Output file (stdout when omitted)
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Random seed for sampling and simulation
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sample count for `fm verify`
    #[arg(long, global = true, value_name = "N")]
    samples: Option<usize>,

    /// Trial count for `simulate`
    #[arg(long, global = true, value_name = "N")]
    trials: Option<usize>,

    /// Typicality tolerance for `simulate`
    #[arg(long, global = true, value_name = "F")]
    delta: Option<f64>,

    /// Numeric tolerance for tie-breaking and reporting
    #[arg(long, global = true, default_value_t = 1e-9, value_name = "F")]
    tolerance: f64,

    /// Reference sum rate drawn as the line R1 + R2 = F
    #[arg(long = "ref-sum", global = true, value_name = "F")]
    ref_sum: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Magic square game values
    Game {
        #[command(subcommand)]
        cmd: GameCmd,
    },
    /// Rate region for the configured inputs, encoder, and channel
    Region {
        /// Which bound to compute
        #[arg(value_enum)]
        kind: RegionKind,
    },
    /// Inequality-system operations
    Fm {
        #[command(subcommand)]
        cmd: FmCmd,
    },
    /// Monte-Carlo encoding/decoding simulation
    Simulate,
    /// Channel inspection
    Channel {
        #[command(subcommand)]
        cmd: ChannelCmd,
    },
}

#[derive(Subcommand)]
enum GameCmd {
    /// Exact optimum over all deterministic classical strategy pairs
    ClassicalMax,
    /// Winning probability of the entangled strategy, per question pair
    QuantumWin,
}

#[derive(Subcommand)]
enum FmCmd {
    /// Compare the eliminated two-rate system against the direct region
    Verify,
}

#[derive(Subcommand)]
enum ChannelCmd {
    /// Emit the configured channel in its on-disk representation
    Export,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegionKind {
    /// Entanglement-assisted inner bound
    EtHk,
    /// Classical superposition-coding inner bound
    Hk,
    /// Entanglement-assisted outer bound
    EtOuter,
    /// Classical outer bound
    Outer,
    /// Fully cooperative multiple-access view
    Mac,
}

impl RegionKind {
    fn label(self) -> &'static str {
        match self {
            RegionKind::EtHk => "et-hk",
            RegionKind::Hk => "hk",
            RegionKind::EtOuter => "et-outer",
            RegionKind::Outer => "outer",
            RegionKind::Mac => "mac",
        }
    }

    fn is_outer(self) -> bool {
        matches!(
            self,
            RegionKind::EtOuter | RegionKind::Outer | RegionKind::Mac
        )
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    if cli.tolerance <= 0.0 || !cli.tolerance.is_finite() {
        return Err(CliError::validation(format!(
            "--tolerance must be a positive finite number, got {}",
            cli.tolerance
        )));
    }
    if let Some(d) = cli.delta {
        if d <= 0.0 || !d.is_finite() {
            return Err(CliError::validation(format!(
                "--delta must be a positive finite number, got {d}"
            )));
        }
    }
    if let Some(s) = cli.ref_sum {
        if s <= 0.0 || !s.is_finite() {
            return Err(CliError::validation(format!(
                "--ref-sum must be a positive finite number, got {s}"
            )));
        }
    }

    let content = match &cli.command {
        Command::Game { cmd } => match cmd {
            GameCmd::ClassicalMax => game_classical_max(cli)?,
            GameCmd::QuantumWin => game_quantum_win(cli)?,
        },
        Command::Region { kind } => region_command(cli, *kind)?,
        Command::Fm { cmd } => match cmd {
            FmCmd::Verify => fm_verify(cli)?,
        },
        Command::Simulate => simulate(cli)?,
        Command::Channel { cmd } => match cmd {
            ChannelCmd::Export => channel_export(cli)?,
        },
    };
    write_output(cli.output.as_deref(), &content)
}

fn unsupported_format(command: &str) -> CliError {
    CliError::validation(format!("svg output is not defined for `{command}`"))
}

// ---- game ----------------------------------------------------------------

#[derive(Serialize)]
struct ClassicalMaxOut {
    maximum: String,
}

fn game_classical_max(cli: &Cli) -> Result<String> {
    let (best, _) = max_classical_win_prob();
    match cli.format {
        Format::Json => json_line(&ClassicalMaxOut {
            maximum: best.to_string(),
        }),
        Format::Csv => Ok(csv_doc(&["maximum"], &[vec![best.to_string()]])),
        Format::Svg => Err(unsupported_format("game classical-max")),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PairWinOut {
    row: u8,
    col: u8,
    win_prob: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct QuantumWinOut {
    per_pair: Vec<PairWinOut>,
    average: f64,
}

fn game_quantum_win(cli: &Cli) -> Result<String> {
    let strategy = QuantumStrategy::standard()?;
    let mut per_pair = Vec::with_capacity(9);
    for q in QuestionPair::all() {
        per_pair.push(PairWinOut {
            row: q.row(),
            col: q.col(),
            win_prob: quantum_win_prob(&strategy, q)?,
        });
    }
    let average = quantum_average_win_prob(&strategy)?;
    match cli.format {
        Format::Json => json_line(&QuantumWinOut { per_pair, average }),
        Format::Csv => Ok(csv_doc(
            &["row", "col", "winProb"],
            &per_pair
                .iter()
                .map(|p| {
                    vec![
                        p.row.to_string(),
                        p.col.to_string(),
                        format!("{}", p.win_prob),
                    ]
                })
                .collect::<Vec<_>>(),
        )),
        Format::Svg => Err(unsupported_format("game quantum-win")),
    }
}

// ---- region ----------------------------------------------------------------

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ConstraintOut {
    r1_coeff: i64,
    r2_coeff: i64,
    bound: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RegionOut {
    kind: &'static str,
    constraints: Vec<ConstraintOut>,
    terms: BTreeMap<String, f64>,
    vertices: Vec<[f64; 2]>,
    max_sum_vertex: [f64; 2],
    max_sum: f64,
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference_sum: Option<f64>,
}

fn build_region(kind: RegionKind, resolved: &Resolved) -> Result<(RateRegion2D, InfoTermSet)> {
    let joint = resolved.joint()?;
    Ok(match kind {
        RegionKind::EtHk => et_hk_region(&joint)?,
        RegionKind::Hk => hk_classical_region(&joint)?,
        RegionKind::EtOuter => et_outer_region(&joint)?,
        RegionKind::Outer => classical_outer_region(&joint)?,
        RegionKind::Mac => mac_region(&joint)?,
    })
}

fn region_command(cli: &Cli, kind: RegionKind) -> Result<String> {
    let file = load_config(cli.config.as_deref())?;
    let resolved = resolve(&file)?;
    let (region, terms) = build_region(kind, &resolved)?;
    let vertices = region_vertices(&region)?;
    let warnings: Vec<String> = time_sharing_warning(resolved.encoder.v0().len(), kind.is_outer())
        .into_iter()
        .collect();

    // The vertex maximizing R1 + R2; ties within --tolerance keep the first
    // one in boundary order.
    let (mut best, mut best_sum) = ([0.0, 0.0], f64::NEG_INFINITY);
    for &(x, y) in &vertices {
        if x + y > best_sum + cli.tolerance {
            best = [x, y];
            best_sum = x + y;
        }
    }
    if !best_sum.is_finite() {
        best_sum = 0.0;
    }

    match cli.format {
        Format::Json => json_line(&RegionOut {
            kind: kind.label(),
            constraints: region
                .constraints()
                .iter()
                .map(|c| ConstraintOut {
                    r1_coeff: c.r1_coeff,
                    r2_coeff: c.r2_coeff,
                    bound: c.bound,
                })
                .collect(),
            terms: terms.map().clone(),
            vertices: vertices.iter().map(|&(x, y)| [x, y]).collect(),
            max_sum_vertex: best,
            max_sum: best_sum,
            warnings,
            reference_sum: cli.ref_sum,
        }),
        Format::Csv => Ok(csv_doc(
            &["r1", "r2"],
            &vertices
                .iter()
                .map(|&(x, y)| vec![format!("{x}"), format!("{y}")])
                .collect::<Vec<_>>(),
        )),
        Format::Svg => Ok(region_svg(kind.label(), &vertices, cli.ref_sum)),
    }
}

// ---- fm --------------------------------------------------------------------

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AgreementOut {
    samples: usize,
    boundary_excluded: usize,
    compared: usize,
    agreements: usize,
    fully_agrees: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DisagreementOut {
    r1: f64,
    r2: f64,
    in_eliminated: bool,
    in_direct: bool,
    eliminated_slacks: Vec<f64>,
    direct_slacks: Vec<f64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FmVerifyOut {
    agreement: AgreementOut,
    disagreements: Vec<DisagreementOut>,
    eliminated_system: Vec<String>,
}

fn fm_verify(cli: &Cli) -> Result<String> {
    let samples = cli.samples.unwrap_or(DEFAULT_SAMPLES);
    if samples == 0 {
        return Err(CliError::validation(
            "--samples must be at least 1".to_string(),
        ));
    }
    let file = load_config(cli.config.as_deref())?;
    let resolved = resolve(&file)?;
    let joint = resolved.joint()?;
    let report = verify_equivalence(&joint, samples, cli.seed)?;
    let out = FmVerifyOut {
        agreement: AgreementOut {
            samples: report.samples,
            boundary_excluded: report.boundary_excluded,
            compared: report.compared,
            agreements: report.agreements,
            fully_agrees: report.fully_agrees(),
        },
        disagreements: report
            .disagreements
            .iter()
            .map(|d| DisagreementOut {
                r1: d.r1,
                r2: d.r2,
                in_eliminated: d.in_eliminated,
                in_direct: d.in_direct,
                eliminated_slacks: d.eliminated_slacks.clone(),
                direct_slacks: d.direct_slacks.clone(),
            })
            .collect(),
        eliminated_system: report.eliminated_system.clone(),
    };
    match cli.format {
        Format::Json => json_line(&out),
        Format::Csv => Ok(csv_doc(
            &[
                "samples",
                "boundaryExcluded",
                "compared",
                "agreements",
                "fullyAgrees",
            ],
            &[vec![
                out.agreement.samples.to_string(),
                out.agreement.boundary_excluded.to_string(),
                out.agreement.compared.to_string(),
                out.agreement.agreements.to_string(),
                out.agreement.fully_agrees.to_string(),
            ]],
        )),
        Format::Svg => Err(unsupported_format("fm verify")),
    }
}

// ---- simulate ----------------------------------------------------------------

#[derive(Serialize)]
struct SimulateOut {
    pe1: f64,
    pe2: f64,
    ci1: f64,
    ci2: f64,
    trials: usize,
}

fn simulate(cli: &Cli) -> Result<String> {
    let file = load_config(cli.config.as_deref())?;
    let resolved = resolve(&file)?;
    let trials = cli.trials.unwrap_or(DEFAULT_TRIALS);

    let (sim_cfg, source) = match resolved.rates {
        // No explicit rates: single-shot question passing with the encoder's
        // question alphabet as the fixed codebook.
        None => {
            let base = question_passing_config(trials, cli.seed)?;
            let cfg = match cli.delta {
                Some(d) => SimConfig::new(1, base.rates(), d, trials, cli.seed)?,
                None => base,
            };
            (
                cfg,
                CodebookSource::Fixed(question_codebooks(&resolved.encoder)?),
            )
        }
        Some(rates) => {
            let cfg = SimConfig::new(
                resolved.blocklength,
                rates,
                cli.delta.unwrap_or(DEFAULT_DELTA),
                trials,
                cli.seed,
            )?;
            (cfg, CodebookSource::Random)
        }
    };
    let setup = SimSetup {
        channel: resolved.channel,
        encoder: resolved.encoder,
        dists: resolved.dists,
        source,
    };
    let report = estimate_error(&sim_cfg, &setup)?;
    let out = SimulateOut {
        pe1: report.pe1,
        pe2: report.pe2,
        ci1: report.ci1,
        ci2: report.ci2,
        trials: report.trials,
    };
    match cli.format {
        Format::Json => json_line(&out),
        Format::Csv => Ok(csv_doc(
            &["pe1", "pe2", "ci1", "ci2", "trials"],
            &[vec![
                format!("{}", out.pe1),
                format!("{}", out.pe2),
                format!("{}", out.ci1),
                format!("{}", out.ci2),
                out.trials.to_string(),
            ]],
        )),
        Format::Svg => Err(unsupported_format("simulate")),
    }
}

// ---- channel ----------------------------------------------------------------

fn channel_export(cli: &Cli) -> Result<String> {
    let file = load_config(cli.config.as_deref())?;
    let resolved = resolve(&file)?;
    let repr: DmIcFile = resolved.channel.file_repr();
    match cli.format {
        Format::Json => json_line(&repr),
        Format::Csv => {
            let ch = &resolved.channel;
            let mut rows = Vec::new();
            for ix1 in 0..ch.x1().len() {
                for ix2 in 0..ch.x2().len() {
                    for iy1 in 0..ch.y1().len() {
                        for iy2 in 0..ch.y2().len() {
                            rows.push(vec![
                                ch.x1().symbol(ix1).to_string(),
                                ch.x2().symbol(ix2).to_string(),
                                ch.y1().symbol(iy1).to_string(),
                                ch.y2().symbol(iy2).to_string(),
                                format!("{}", ch.prob(ix1, ix2, iy1, iy2)),
                            ]);
                        }
                    }
                }
            }
            Ok(csv_doc(&["x1", "x2", "y1", "y2", "p"], &rows))
        }
        Format::Svg => Err(unsupported_format("channel export")),
    }
}
