//! Command-line front end. Exit codes: 0 success (non-convergence is only
//! reported), 1 usage error, 2 data or certification error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::embedder::EmbedderConfig;
use crate::generator::Source;
use crate::pipeline::{self, PipelineError, RunContext};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "reuleaux", version, about = "Strongly involutive self-dual maps and Reuleaux polyhedra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate candidates and write the strongly involutive self-dual ones.
    Census {
        #[command(flatten)]
        census: CensusArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write a verified 4-colouring of D(M) for every graph of a census file.
    Color {
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Search metric embeddings for every graph of a census file.
    Embed {
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        de: EmbedArgs,
    },
    /// Turn embedding files (or directories of them) into OpenSCAD scripts.
    Export {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
        /// Minimum point separation accepted as injective.
        #[arg(long, default_value_t = EmbedderConfig::default().epsilon)]
        epsilon: f64,
    },
    /// census, color, embed and export in one run.
    Pipeline {
        #[command(flatten)]
        census: CensusArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        de: EmbedArgs,
    },
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long)]
    pub n: usize,
    /// `internal` or `file:<path>` (a planar_code pool).
    #[arg(long, default_value = "internal", value_parser = parse_source)]
    pub source: Source,
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    /// Master seed; each graph and restart derives its own.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Minimum pair distance for injectivity [default: 0.2]
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Largest allowed distance between non-adjacent points [default: 0.95]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Penalty per non-adjacent pair out of range [default: 10]
    #[arg(long = "penalty-k")]
    pub penalty_k: Option<f64>,
    /// Objective value at which a run stops [default: 1e-14]
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Population size [default: 40]
    #[arg(long)]
    pub pop: Option<usize>,
    /// Differential weight F [default: 0.5]
    #[arg(long)]
    pub weight: Option<f64>,
    /// Crossover rate CR [default: 0.9]
    #[arg(long)]
    pub crossover: Option<f64>,
    /// Generations per restart [default: 20000]
    #[arg(long = "max-gens")]
    pub max_gens: Option<usize>,
    /// Restarts before giving up [default: 8]
    #[arg(long)]
    pub restarts: Option<usize>,
}

impl EmbedArgs {
    pub fn config(&self) -> EmbedderConfig {
        let d = EmbedderConfig::default();
        EmbedderConfig {
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            alpha: self.alpha.unwrap_or(d.alpha),
            penalty_k: self.penalty_k.unwrap_or(d.penalty_k),
            stop_threshold: self.threshold.unwrap_or(d.stop_threshold),
            population_size: self.pop.or(d.population_size),
            diff_weight: self.weight.unwrap_or(d.diff_weight),
            crossover_rate: self.crossover.unwrap_or(d.crossover_rate),
            max_generations: self.max_gens.unwrap_or(d.max_generations),
            restarts: self.restarts.unwrap_or(d.restarts),
            seed: self.seed,
            box_halfwidth: d.box_halfwidth,
        }
    }
}

pub fn parse_source(s: &str) -> Result<Source, String> {
    if s == "internal" {
        Ok(Source::Internal)
    } else if let Some(p) = s.strip_prefix("file:") {
        if p.is_empty() {
            Err("file: needs a path".into())
        } else {
            Ok(Source::File(PathBuf::from(p)))
        }
    } else {
        Err(format!("expected `internal` or `file:<path>`, got `{s}`"))
    }
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Config(m) => Failure::Usage(m),
            PipelineError::Generator(
                g @ (crate::generator::GeneratorError::SizeCap(_) | crate::generator::GeneratorError::TooSmall(_)),
            ) => Failure::Usage(g.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

fn context(command_line: &str, common: &CommonArgs, cfg: EmbedderConfig) -> Result<RunContext, Failure> {
    if common.jobs == Some(0) {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(RunContext {
        command_line: command_line.to_string(),
        embed: cfg,
        jobs: common.jobs,
    })
}

fn check_n(n: usize) -> Result<(), Failure> {
    if n < 4 {
        return Err(Failure::Usage(format!("--n must be at least 4 (got {n})")));
    }
    Ok(())
}

fn print_embed(outcome: &pipeline::EmbedOutcome) {
    for row in &outcome.rows {
        let status = match (&row.error, row.converged) {
            (Some(e), _) => format!("error: {e}"),
            (None, true) => "ok".into(),
            (None, false) => "non-convergence".into(),
        };
        println!("{} {status} {:.3}s", pipeline::graph_name(row.graph), row.seconds);
    }
    println!(
        "embedded {}/{} worst_avg_edge_error={:e}",
        outcome.successes(),
        outcome.rows.len(),
        outcome.worst_avg_edge_error()
    );
}

fn execute(cli: Cli, command_line: &str) -> Result<bool, Failure> {
    let start = Instant::now();
    let mut clean = true;
    match cli.command {
        Command::Census { census, common } => {
            check_n(census.n)?;
            let ctx = context(command_line, &common, EmbedderConfig::default())?;
            let out = pipeline::run_census(census.n, &census.source, &common.out, &ctx)?;
            println!("{}", out.summary_line());
        }
        Command::Color { input, common } => {
            let ctx = context(command_line, &common, EmbedderConfig::default())?;
            let out = pipeline::run_color(&input, &common.out, &ctx)?;
            for (i, msg) in &out.failures {
                eprintln!("{}: {msg}", pipeline::graph_name(*i));
            }
            println!("colored {} failed {}", out.written.len(), out.failures.len());
            clean = out.failures.is_empty();
        }
        Command::Embed { input, common, de } => {
            let ctx = context(command_line, &common, de.config())?;
            let out = pipeline::run_embed(&input, &common.out, &ctx)?;
            print_embed(&out);
            clean = out.rows.iter().all(|r| r.error.is_none());
        }
        Command::Export { inputs, common, epsilon } => {
            let cfg = EmbedderConfig {
                epsilon,
                ..Default::default()
            };
            let ctx = context(command_line, &common, cfg)?;
            let out = pipeline::run_export(&inputs, &common.out, &ctx)?;
            for (p, why) in &out.skipped {
                eprintln!("warning: skipping {}: {why}", p.display());
            }
            println!("exported {} skipped {}", out.written.len(), out.skipped.len());
        }
        Command::Pipeline { census, common, de } => {
            check_n(census.n)?;
            let ctx = context(command_line, &common, de.config())?;
            let out = pipeline::run_pipeline(census.n, &census.source, &common.out, &ctx)?;
            println!("{}", out.census.summary_line());
            for (i, msg) in &out.color.failures {
                eprintln!("{}: {msg}", pipeline::graph_name(*i));
            }
            println!("colored {} failed {}", out.color.written.len(), out.color.failures.len());
            print_embed(&out.embed);
            println!("exported {} skipped {}", out.export.written.len(), out.export.skipped.len());
            clean = out.color.failures.is_empty() && out.embed.rows.iter().all(|r| r.error.is_none());
        }
    }
    println!("wall time {:.2}s", start.elapsed().as_secs_f64());
    Ok(clean)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    // The program is recorded by file name so headers do not depend on
    // where the binary lives.
    let command_line = args
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let s = a.to_string_lossy().into_owned();
            match i {
                0 => std::path::Path::new(&s)
                    .file_name()
                    .map_or(s.clone(), |f| f.to_string_lossy().into_owned()),
                _ => s,
            }
        })
        .collect::<Vec<_>>()
        .join(" ");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli, &command_line) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_DATA),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
