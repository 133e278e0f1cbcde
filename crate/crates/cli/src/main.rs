use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use trainfold::io::{self as tio, OutputFormat, RunConfig};
use trainfold::{
    build, certify, certify_loop, closed_walks, loop_from_indices, primary_component, rank, sccs,
    seed_states, stallings_decompose, Automaton, BuildConfig, Certificate, Schedule,
};

#[derive(Parser)]
#[command(
    name = "trainfold",
    version,
    about = "Lonely-direction fold automata and train track certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Rank of the automaton; for check-map, defaults to the rank of the map's graph.
    #[arg(long, global = true)]
    rank: Option<usize>,

    /// Largest number of states a build may reach.
    #[arg(long, global = true, env = "TRAINFOLD_STATE_CAP", default_value_t = trainfold::DEFAULT_STATE_CAP)]
    state_cap: usize,

    /// Largest power tried when looking for a transparent power.
    #[arg(long, global = true, default_value_t = 60)]
    transparency_cap: usize,

    /// Longest loop certified when analyze-loop is given no loop.
    #[arg(long, global = true, default_value_t = 4)]
    sample_length: usize,

    /// Treat the map as free of periodic Nielsen paths.
    #[arg(long, global = true)]
    pnp_free: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Bfs,
    Dfs,
    Parallel,
}

#[derive(Subcommand)]
enum Command {
    /// List the seed states with a witness loop each.
    EnumerateSeeds,
    /// Close the seeds under permissible folds.
    BuildAutomaton {
        /// Start from this seed file instead of enumerating seeds.
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Order::Bfs)]
        schedule: Order,
    },
    /// Report the strongly connected components of an automaton.
    Scc {
        /// Automaton file; standard input when omitted.
        automaton: Option<PathBuf>,
    },
    /// Certify the map of a loop given by edge indices, or every short loop
    /// of the primary component.
    AnalyzeLoop {
        automaton: PathBuf,
        /// Comma-separated edge indices, e.g. `--loop 3,17,4`.
        #[arg(long = "loop", value_delimiter = ',')]
        edges: Option<Vec<usize>>,
    },
    /// Certify a self-map.
    CheckMap { map: PathBuf },
    /// Factor a map into folds.
    Stallings { map: PathBuf },
    /// Collect the partial fold graphs of the primary component.
    PartialFoldGraphs { automaton: PathBuf },
    /// Render an automaton or a certificate file as DOT.
    ExportDot {
        input: PathBuf,
        /// Only the primary component of an automaton.
        #[arg(long)]
        primary: bool,
    },
}

fn read_input(path: Option<&Path>) -> Result<String, String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("standard input: {e}"))?;
            Ok(s)
        }
    }
}

fn load<T>(path: &Path, decode: impl Fn(&str) -> trainfold::Result<T>) -> Result<T, String> {
    decode(&read_input(Some(path))?).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(config: &RunConfig, text: &str) -> Result<(), String> {
    match &config.output_path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{p}: {e}")),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("standard output: {e}")),
    }
}

fn emit_certificate(config: &RunConfig, c: &Certificate) -> Result<(), String> {
    let text = match config.format {
        OutputFormat::Json => tio::encode_certificate(c),
        OutputFormat::Dot => trainfold::dot::certificate_dot(c),
    };
    emit(config, &text)
}

fn config_from(cli: &Cli) -> RunConfig {
    RunConfig {
        rank: cli.rank.unwrap_or(3),
        state_cap: cli.state_cap,
        transparency_cap: cli.transparency_cap,
        loop_sample_length: cli.sample_length,
        output_path: cli.output.as_ref().map(|p| p.display().to_string()),
        format: match cli.format {
            Format::Json => OutputFormat::Json,
            Format::Dot => OutputFormat::Dot,
        },
    }
}

fn run(cli: &Cli) -> Result<(), String> {
    let mut config = config_from(cli);
    config.validate().map_err(|e| e.to_string())?;
    match &cli.command {
        Command::EnumerateSeeds => {
            let seeds = seed_states(config.rank).map_err(|e| e.to_string())?;
            emit(&config, &tio::encode_seeds(config.rank, &seeds))
        }
        Command::BuildAutomaton { seeds, schedule } => {
            let seeds = match seeds {
                Some(p) => load(p, tio::decode_seeds)?,
                None => seed_states(config.rank).map_err(|e| e.to_string())?,
            };
            let build_config = BuildConfig {
                state_cap: config.state_cap,
                schedule: match schedule {
                    Order::Bfs => Schedule::BreadthFirst,
                    Order::Dfs => Schedule::DepthFirst,
                    Order::Parallel => Schedule::ParallelBreadthFirst,
                },
            };
            match build(&seeds, &build_config) {
                Ok(a) => emit(&config, &render_automaton(&config, &a, false)),
                Err(trainfold::Error::StateCapExceeded { cap, partial }) => {
                    // the partial automaton is still written for inspection
                    emit(&config, &render_automaton(&config, &partial, false))?;
                    Err(format!(
                        "state cap {cap} exceeded; partial automaton written"
                    ))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Scc { automaton } => {
            let text = read_input(automaton.as_deref())?;
            let a = tio::decode_automaton(&text).map_err(|e| e.to_string())?;
            emit(
                &config,
                &tio::to_json(&tio::component_report(&a, &sccs(&a))),
            )
        }
        Command::AnalyzeLoop { automaton, edges } => {
            let a = load(automaton, tio::decode_automaton)?;
            match edges {
                Some(indices) => {
                    let walk = loop_from_indices(&a, indices).map_err(|e| e.to_string())?;
                    let c = certify_loop(&a, &walk, cli.pnp_free, config.transparency_cap)
                        .map_err(|e| e.to_string())?;
                    emit_certificate(&config, &c)
                }
                None => {
                    let comp =
                        primary_component(&a).ok_or("the automaton has no nontrivial component")?;
                    let list = a.edge_list();
                    let mut loops = Vec::new();
                    for walk in closed_walks(&comp, config.loop_sample_length) {
                        let c = certify_loop(&a, &walk, cli.pnp_free, config.transparency_cap)
                            .map_err(|e| e.to_string())?;
                        let indices: Vec<usize> = walk
                            .iter()
                            .map(|e| {
                                list.iter()
                                    .position(|x| *x == e)
                                    .expect("edge of the automaton")
                            })
                            .collect();
                        loops.push(json!({ "loop": indices, "certificate": c }));
                    }
                    config.format = OutputFormat::Json;
                    emit(
                        &config,
                        &tio::to_json(
                            &json!({ "format_version": tio::FORMAT_VERSION, "loops": loops }),
                        ),
                    )
                }
            }
        }
        Command::CheckMap { map } => {
            let m = load(map, tio::decode_edge_map)?;
            let r = match cli.rank {
                Some(r) => r,
                None => rank(m.source()).map_err(|e| e.to_string())?,
            };
            let c =
                certify(&m, r, cli.pnp_free, config.transparency_cap).map_err(|e| e.to_string())?;
            emit_certificate(&config, &c)
        }
        Command::Stallings { map } => {
            let m = load(map, tio::decode_edge_map)?;
            let s = stallings_decompose(&m).map_err(|e| e.to_string())?;
            emit(&config, &tio::to_json(&tio::stallings_report(&s)))
        }
        Command::PartialFoldGraphs { automaton } => {
            let a = load(automaton, tio::decode_automaton)?;
            let report = tio::partial_fold_report(&a).map_err(|e| e.to_string())?;
            emit(&config, &tio::to_json(&report))
        }
        Command::ExportDot { input, primary } => {
            let text = read_input(Some(input))?;
            config.format = OutputFormat::Dot;
            match tio::decode_automaton(&text) {
                Ok(a) => emit(&config, &render_automaton(&config, &a, *primary)),
                Err(automaton_error) => match tio::decode_certificate(&text) {
                    Ok(c) => emit_certificate(&config, &c),
                    Err(_) => Err(format!("{}: {automaton_error}", input.display())),
                },
            }
        }
    }
}

fn render_automaton(config: &RunConfig, a: &Automaton, primary_only: bool) -> String {
    match config.format {
        OutputFormat::Json => tio::encode_automaton(a),
        OutputFormat::Dot if primary_only => match primary_component(a) {
            Some(c) => trainfold::dot::automaton_dot(a, Some(&c)),
            None => trainfold::dot::automaton_dot(&Automaton::default(), None),
        },
        OutputFormat::Dot => trainfold::dot::automaton_dot(a, None),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
