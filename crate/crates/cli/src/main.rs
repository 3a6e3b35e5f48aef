//! `ach`: command-line access to dual pairs, moves, diagrams and searches.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ach_core::completing::{check_completing, CompletingCurveSet};
use ach_core::correspond::correspond;
use ach_core::diagram::dot::to_dot;
use ach_core::diagram::{build_diagram, check_complement_connected, read_dual_pair, Basepoints, CombinatorialDiagram};
use ach_core::dual_pair::DualPair;
use ach_core::error::FormatError;
use ach_core::floer::floer_report;
use ach_core::moves::{random_walk, AcMove, MoveSequence};
use ach_core::presentation::abelian_invariants;
use ach_core::search::{search_trivialization, SearchConfig, SearchOutcome, Strategy};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ach", version, about = "Dual presentations, AC-moves and Heegaard diagrams")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the dual pair conditions.
    Validate {
        #[arg(long)]
        pair: PathBuf,
    },
    /// Apply moves given literally, from a file, or at random.
    Apply {
        #[arg(long)]
        pair: PathBuf,
        /// A move literal such as "m3 1 2 +"; repeatable.
        #[arg(long = "move")]
        moves: Vec<String>,
        /// JSON array of move literals, applied after --move.
        #[arg(long = "moves")]
        moves_file: Option<PathBuf>,
        /// Random walk of this many steps, after the explicit moves.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the applied moves here.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Build the Heegaard diagram of a pair.
    Build {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Abelian invariants and surface data.
    Invariants {
        #[arg(long)]
        pair: PathBuf,
    },
    /// Build the diagram, read it back and compare.
    Roundtrip {
        #[arg(long)]
        pair: PathBuf,
    },
    /// Read a dual pair off a diagram.
    Read {
        #[arg(long)]
        diagram: PathBuf,
        /// Start edge per beta curve, comma separated.
        #[arg(long, value_delimiter = ',')]
        beta_base: Vec<usize>,
        /// Start edge per alpha curve, comma separated.
        #[arg(long, value_delimiter = ',')]
        alpha_base: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a set of completing curves.
    CheckCompleting {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long)]
        curves: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Generator count and periodic-domain ranks.
    Floer {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        curves: Option<PathBuf>,
        /// Print the full report (the default output is the generator count).
        #[arg(long)]
        report: bool,
    },
    /// Classify the diagram change made by a move; all moves when omitted.
    Correspond {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long = "move")]
        mv: Option<String>,
    },
    /// Search for a trivializing sequence.
    Search {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 1)]
        extra_generators: usize,
        #[arg(long, default_value_t = 6)]
        length_slack: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a built-in pair, or a pair's diagram, in another format.
    Export {
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        pair: Option<PathBuf>,
        #[arg(long, value_enum)]
        builtin: Option<Builtin>,
        #[arg(long, value_enum, default_value_t = ExportFormat::Pair)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Bfs,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    Trivial,
    Z2,
    Z2Swapped,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Pair,
    Diagram,
    Dot,
}

/// Result of a command that ran to completion.
enum Status {
    Ok,
    Invalid,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_pair(path: &Path) -> Result<DualPair> {
    DualPair::from_json(&read_text(path)?).with_context(|| format!("loading pair {}", path.display()))
}

fn load_diagram(path: &Path) -> Result<CombinatorialDiagram> {
    CombinatorialDiagram::from_json(&read_text(path)?).with_context(|| format!("loading diagram {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// A malformed argument value, reported with the usage exit code.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn parse_move(s: &str) -> Result<AcMove> {
    s.parse().map_err(|e| UsageError(format!("bad --move value: {e}")).into())
}

fn run(cli: Cli) -> Result<Status> {
    let json = cli.json;
    match cli.command {
        Command::Validate { pair } => {
            let problems = match DualPair::from_json(&read_text(&pair)?) {
                Ok(_) => Vec::new(),
                Err(FormatError::InvalidPair(list)) => list,
                Err(e) => vec![e.to_string()],
            };
            if json {
                println!("{}", json!({ "valid": problems.is_empty(), "violations": problems }));
            } else if problems.is_empty() {
                println!("valid");
            } else {
                for problem in &problems {
                    println!("violation: {problem}");
                }
            }
            Ok(if problems.is_empty() { Status::Ok } else { Status::Invalid })
        }
        Command::Apply { pair, moves, moves_file, random, seed, out, log } => {
            let start = load_pair(&pair)?;
            let mut list: Vec<AcMove> = moves.iter().map(|s| parse_move(s)).collect::<Result<_>>()?;
            if let Some(path) = moves_file {
                let seq: MoveSequence = serde_json::from_str(&read_text(&path)?).context("parsing move list")?;
                list.extend(seq.moves);
            }
            let (mut seq, mut end) = match MoveSequence::replay(&list, &start) {
                Ok(done) => done,
                Err(e) => {
                    eprintln!("{e}");
                    return Ok(Status::Invalid);
                }
            };
            if let Some(steps) = random {
                let (walk, walked) = random_walk(&end, seed, steps);
                for (mv, hash) in walk.moves.iter().zip(walk.hashes.iter().skip(1)) {
                    seq.moves.push(*mv);
                    seq.hashes.push(hash.clone());
                }
                end = walked;
            }
            if let Some(path) = log {
                emit(Some(&path), &serde_json::to_string(&seq)?)?;
            }
            if out.is_some() || json {
                emit(out.as_deref(), &end.to_json())?;
            } else {
                println!("{end}");
            }
            Ok(Status::Ok)
        }
        Command::Build { pair, out, dot } => {
            let diagram = build_diagram(&load_pair(&pair)?)?;
            if let Some(path) = dot {
                emit(Some(&path), to_dot(&diagram).trim_end())?;
            }
            if out.is_some() || json {
                emit(out.as_deref(), &diagram.to_json())?;
            } else {
                println!(
                    "V = {}, E = {}, F = {}, components = {}",
                    diagram.vertices.len(),
                    diagram.edges.len(),
                    diagram.faces.len(),
                    diagram.components.len()
                );
            }
            Ok(Status::Ok)
        }
        Command::Invariants { pair } => {
            let pair = load_pair(&pair)?;
            let invariants = abelian_invariants(pair.p());
            let diagram = build_diagram(&pair)?;
            let complement = check_complement_connected(&diagram);
            if json {
                let value = json!({
                    "d": pair.d(),
                    "abelian_invariants": invariants,
                    "vertices": diagram.vertices.len(),
                    "edges": diagram.edges.len(),
                    "faces": diagram.faces.len(),
                    "components": diagram.components.len(),
                    "euler": diagram.components.iter().map(|c| c.euler).sum::<i64>(),
                    "per_component": diagram.components,
                    "complement": complement,
                });
                println!("{value}");
            } else {
                println!("d = {}", pair.d());
                println!("abelian invariants = {invariants:?}");
                println!(
                    "V = {}, E = {}, F = {}",
                    diagram.vertices.len(),
                    diagram.edges.len(),
                    diagram.faces.len()
                );
                println!("components = {}", diagram.components.len());
                for (c, s) in diagram.components.iter().enumerate() {
                    println!(
                        "  component {c}: euler {}, genus {}, alphas {:?}, betas {:?}, alpha complement connected {}",
                        s.euler, s.genus, s.alphas, s.betas, complement[c].alpha_ok
                    );
                }
            }
            Ok(Status::Ok)
        }
        Command::Roundtrip { pair } => {
            let pair = load_pair(&pair)?;
            let result = ach_core::diagram::roundtrip_check(&pair);
            if json {
                println!("{}", json!({ "exact": result.is_ok(), "difference": result.as_ref().err() }));
            } else {
                match &result {
                    Ok(()) => println!("round trip exact"),
                    Err(diff) => println!("round trip differs: {diff}"),
                }
            }
            Ok(if result.is_ok() { Status::Ok } else { Status::Invalid })
        }
        Command::Read { diagram, beta_base, alpha_base, out } => {
            let diagram = load_diagram(&diagram)?;
            let mut basepoints = Basepoints::canonical(&diagram);
            if !beta_base.is_empty() {
                basepoints.beta = beta_base;
            }
            if !alpha_base.is_empty() {
                basepoints.alpha = alpha_base;
            }
            let pair = read_dual_pair(&diagram, &basepoints)?;
            if out.is_some() || json {
                emit(out.as_deref(), &pair.to_json())?;
            } else {
                println!("{pair}");
            }
            Ok(Status::Ok)
        }
        Command::CheckCompleting { diagram, curves, depth } => {
            let diagram = load_diagram(&diagram)?;
            let set: CompletingCurveSet = serde_json::from_str(&read_text(&curves)?).context("parsing curves")?;
            let report = match check_completing(&diagram, &set, depth) {
                Ok(r) => r,
                Err(e) => {
                    if json {
                        println!("{}", json!({ "ok": false, "error": e.to_string() }));
                    } else {
                        println!("rejected: {e}");
                    }
                    return Ok(Status::Invalid);
                }
            };
            if json {
                let mut value = serde_json::to_value(&report)?;
                value["ok"] = json!(report.ok());
                println!("{value}");
            } else {
                println!("alpha disjoint: {}", report.alpha_disjoint);
                println!("simple and disjoint: {}", report.simple);
                println!(
                    "sphere condition: {} (pieces {:?}, planar needs {:?})",
                    report.sphere_condition, report.pieces, report.planar_pieces
                );
                for (c, (w, t)) in report.relators.iter().zip(&report.triviality).enumerate() {
                    println!("curve {c}: {w} {t:?}, arc ok {}", report.arcs_ok[c]);
                }
            }
            Ok(if report.ok() { Status::Ok } else { Status::Invalid })
        }
        Command::Floer { pair, curves, report } => {
            let diagram = build_diagram(&load_pair(&pair)?)?;
            let set: Option<CompletingCurveSet> = match curves {
                Some(path) => Some(serde_json::from_str(&read_text(&path)?).context("parsing curves")?),
                None => None,
            };
            let r = floer_report(&diagram, set.as_ref());
            if json {
                println!("{}", serde_json::to_string(&r)?);
            } else if report {
                println!("generators: {}", r.generators);
                println!("periodic domain rank: {}", r.periodic_rank);
                println!("periodic domain rank with n_z = 0: {}", r.periodic_rank_with_marked);
                println!("marked faces: {:?}", r.marked.faces);
            } else {
                println!("generators: {}", r.generators);
            }
            Ok(Status::Ok)
        }
        Command::Correspond { pair, mv } => {
            let pair = load_pair(&pair)?;
            let moves: Vec<AcMove> = match mv {
                Some(s) => vec![parse_move(&s)?],
                None => AcMove::all(pair.d())
                    .into_iter()
                    .filter(|&m| ach_core::moves::check_preconditions(&pair, m).is_ok())
                    .collect(),
            };
            let mut reports = Vec::new();
            for m in moves {
                match correspond(&pair, m) {
                    Ok(r) => reports.push(r),
                    Err(e) => {
                        eprintln!("{e}");
                        return Ok(Status::Invalid);
                    }
                }
            }
            let all_classified = reports.iter().all(|r| r.is_classified());
            if json {
                println!("{}", serde_json::to_string(&reports)?);
            } else {
                for r in &reports {
                    println!(
                        "{}: {} (delta chi {}, delta components {})",
                        r.mv,
                        r.class,
                        r.delta_euler(),
                        r.delta_components()
                    );
                }
            }
            Ok(if all_classified { Status::Ok } else { Status::Invalid })
        }
        Command::Search { pair, budget, strategy, extra_generators, length_slack, out } => {
            let pair = load_pair(&pair)?;
            let strategy = match strategy {
                StrategyArg::Bfs => Strategy::Bfs,
                StrategyArg::Greedy => Strategy::Greedy,
            };
            let config = SearchConfig { budget, strategy, extra_generators, length_slack, threads: None };
            let outcome = search_trivialization(&pair, &config);
            if let (Some(path), Some(steps)) = (&out, outcome.moves()) {
                emit(Some(path), &serde_json::to_string(steps)?)?;
            }
            if json {
                println!("{}", serde_json::to_string(&outcome)?);
            } else {
                match &outcome {
                    SearchOutcome::Found { moves, nodes } => {
                        let text: Vec<String> = moves.iter().map(ToString::to_string).collect();
                        println!("found {} steps after {nodes} states: [{}]", moves.len(), text.join(", "));
                    }
                    SearchOutcome::Exhausted { nodes, budget, pruned: true } => {
                        println!("exhausted: abelian invariants are not all units ({nodes}/{budget} states)")
                    }
                    SearchOutcome::Exhausted { nodes, budget, pruned: false } => {
                        println!("exhausted after {nodes}/{budget} states")
                    }
                }
            }
            Ok(Status::Ok)
        }
        Command::Export { pair, builtin, format, out } => {
            let pair = match (pair, builtin) {
                (Some(path), _) => load_pair(&path)?,
                (None, Some(Builtin::Trivial)) => DualPair::trivial(),
                (None, Some(Builtin::Z2)) => DualPair::z2(false),
                (None, Some(Builtin::Z2Swapped)) => DualPair::z2(true),
                (None, None) => bail!("--pair or --builtin is required"),
            };
            let text = match format {
                ExportFormat::Pair => pair.to_json_pretty(),
                ExportFormat::Diagram => build_diagram(&pair)?.to_json(),
                ExportFormat::Dot => to_dot(&build_diagram(&pair)?).trim_end().to_string(),
            };
            emit(out.as_deref(), &text)?;
            Ok(Status::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Invalid) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<UsageError>() { 2 } else { 1 })
        }
    }
}
