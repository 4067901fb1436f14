use std::path::PathBuf;
use std::process::ExitCode;

use arcplex::export::{read_file, write_file};
use arcplex::report::SuiteOptions;
use arcplex::{
    build_complex, build_surface, find_configuration, flip_graph_ball, run_invariant_suite,
    run_small_case_report, BallExport, ComplexExport, ConfigurationPattern, Error, Report,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

/// Reproduce arc-complex computations for small nonorientable surfaces.
#[derive(Parser, Debug)]
#[command(name = "arcplex", version)]
struct Cli {
    /// JSON file whose keys supply any flag not given on the command line.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification reports.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Search a flip-graph ball for a labelled arc configuration.
    FindConfig {
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[command(flatten)]
        surface: SurfaceArgs,
    },
    /// Write a ball or complex window as DOT or JSON.
    Export {
        #[arg(long, value_enum)]
        what: Option<What>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        surface: SurfaceArgs,
    },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Reproduce one of the cases (1,1), (1,2), (2,1).
    SmallCase {
        /// Genus and boundary count, e.g. `1,2`.
        #[arg(long)]
        case: Option<String>,
        /// Flip radius for the engine window of case (2,1).
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Sweep structural and flip invariants over a ball.
    Suite {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Random node pairs for the connectivity check.
        #[arg(long)]
        pairs: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct SurfaceArgs {
    #[arg(long)]
    genus: Option<u32>,
    #[arg(long)]
    boundary: Option<u32>,
    #[arg(long)]
    orientable: bool,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    max_nodes: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum What {
    Ball,
    Complex,
}

#[derive(Clone, Copy, Debug, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Dot,
    Json,
}

/// Flag values read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    case: Option<String>,
    genus: Option<u32>,
    boundary: Option<u32>,
    #[serde(default)]
    orientable: bool,
    radius: Option<usize>,
    max_nodes: Option<usize>,
    samples: Option<usize>,
    seed: Option<u64>,
    pairs: Option<usize>,
    pattern: Option<PathBuf>,
    what: Option<What>,
    format: Option<Format>,
    out: Option<PathBuf>,
    #[serde(default)]
    json: bool,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => Failure::Runtime(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing --{flag}")))
}

struct Surface {
    genus: u32,
    boundary: u32,
    orientable: bool,
    radius: Option<usize>,
    max_nodes: Option<usize>,
}

fn surface(a: SurfaceArgs, c: &Config) -> Result<Surface, Failure> {
    Ok(Surface {
        genus: required(a.genus.or(c.genus), "genus")?,
        boundary: required(a.boundary.or(c.boundary), "boundary")?,
        orientable: a.orientable || c.orientable,
        radius: a.radius.or(c.radius),
        max_nodes: a.max_nodes.or(c.max_nodes),
    })
}

fn emit(r: &Report, json: bool) -> Result<(), Failure> {
    if json {
        let s = serde_json::to_string_pretty(r).map_err(|e| Failure::Runtime(e.to_string()))?;
        println!("{s}");
    } else {
        println!("{r}");
    }
    if r.pass() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn parse_case(s: &str) -> Result<(u32, u32), Failure> {
    let bad = || Failure::Usage(format!("--case expects `genus,boundary`, got `{s}`"));
    let (g, r) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        g.trim().parse().map_err(|_| bad())?,
        r.trim().parse().map_err(|_| bad())?,
    ))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(p) => serde_json::from_str(&read_file(p)?)
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => Config::default(),
    };
    let json = cli.json || config.json;
    match cli.command {
        Command::Verify {
            what: Verify::SmallCase { case, radius },
        } => {
            let (g, r) = parse_case(&required(case.or(config.case.clone()), "case")?)?;
            let report = run_small_case_report(g, r, radius.or(config.radius))?;
            emit(&report, json)
        }
        Command::Verify {
            what:
                Verify::Suite {
                    surface: s,
                    samples,
                    seed,
                    pairs,
                },
        } => {
            let s = surface(s, &config)?;
            let mut o = SuiteOptions::new(s.genus, s.boundary, s.orientable, s.radius.unwrap_or(3));
            o.samples = samples.or(config.samples).unwrap_or(o.samples);
            o.seed = seed.or(config.seed).unwrap_or(o.seed);
            o.pairs = pairs.or(config.pairs).unwrap_or(o.pairs);
            o.max_nodes = s.max_nodes;
            emit(&run_invariant_suite(&o)?, json)
        }
        Command::FindConfig {
            pattern,
            surface: s,
        } => {
            let path = required(pattern.or(config.pattern.clone()), "pattern")?;
            let pattern = ConfigurationPattern::from_json(&read_file(&path)?)?;
            let s = surface(s, &config)?;
            let radius = s.radius.unwrap_or(2);
            match find_configuration(&pattern, s.genus, s.boundary, radius, s.max_nodes)? {
                Some(w) => {
                    let out = serde_json::to_string_pretty(&w)
                        .map_err(|e| Failure::Runtime(e.to_string()))?;
                    println!("{out}");
                    Ok(())
                }
                None => {
                    println!("not found within radius {radius}");
                    Err(Failure::Checks)
                }
            }
        }
        Command::Export {
            what,
            format,
            out,
            surface: s,
        } => {
            let what = required(what.or(config.what), "what")?;
            let format = required(format.or(config.format), "format")?;
            let out = required(out.or(config.out.clone()), "out")?;
            let s = surface(s, &config)?;
            let radius = s.radius.unwrap_or(2);
            let text = match what {
                What::Ball => {
                    let t = build_surface(s.genus, s.boundary, s.orientable)?;
                    let e = BallExport::new(&flip_graph_ball(&t, radius, s.max_nodes)?);
                    match format {
                        Format::Json => e.to_json()?,
                        Format::Dot => e.to_dot(),
                    }
                }
                What::Complex => {
                    let w = build_complex(s.genus, s.boundary, s.orientable, radius, s.max_nodes)?;
                    let e = ComplexExport::new(&w);
                    match format {
                        Format::Json => e.to_json()?,
                        Format::Dot => e.to_dot(),
                    }
                }
            };
            write_file(&out, &text)?;
            println!("wrote {}", out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
