//! File-based stages: census, colour, embed, export.
//!
//! Every stage reads the previous stage's files and writes one file per
//! graph, each opening with comment lines that record the command line and
//! seed. Graph `i` of a census is always written as `g<i>` with three
//! digits, so stage outputs line up by name.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::codec::{self, CodecError};
use crate::coloring::{self, ColoringError};
use crate::embedder::{self, EmbedError, EmbedderConfig, QualityReport};
use crate::generator::{self, GeneratorError, Source};
use crate::planar_map::PlanarMap;
use crate::scad::{self, ScadError};
use crate::selfdual::{self, SelfDualIso};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Config(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), PipelineError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, contents).map_err(io_err(path))
}

fn read_file(path: &Path) -> Result<Vec<u8>, PipelineError> {
    fs::read(path).map_err(io_err(path))
}

/// Settings shared by all stages.
#[derive(Debug, Clone)]
pub struct RunContext {
    /// Recorded verbatim in every output file.
    pub command_line: String,
    pub embed: EmbedderConfig,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl RunContext {
    pub fn new(command_line: impl Into<String>) -> Self {
        RunContext {
            command_line: command_line.into(),
            embed: EmbedderConfig::default(),
            jobs: None,
        }
    }

    fn meta(&self) -> Vec<(String, String)> {
        vec![
            ("command".into(), self.command_line.clone()),
            ("seed".into(), self.embed.seed.to_string()),
        ]
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, PipelineError> {
        match self.jobs {
            None => Ok(f()),
            Some(k) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .map_err(|e| PipelineError::Config(e.to_string()))?;
                Ok(pool.install(f))
            }
        }
    }
}

pub fn graph_name(i: usize) -> String {
    format!("g{i:03}")
}

pub fn census_file(out: &Path, n: usize) -> PathBuf {
    out.join(format!("census_n{n}.pc"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusOutcome {
    pub n: usize,
    pub candidates: usize,
    pub selfdual: usize,
    pub path: PathBuf,
}

impl CensusOutcome {
    pub fn summary_line(&self) -> String {
        format!("n={} candidates={} selfdual={}", self.n, self.candidates, self.selfdual)
    }
}

/// Candidate pool size and the maps that admit a strongly involutive
/// self-duality, with the first one found for each.
pub fn strongly_involutive(
    n: usize,
    source: &Source,
) -> Result<(usize, Vec<(PlanarMap, SelfDualIso)>), PipelineError> {
    let pool = generator::census(n, source)?;
    let found: Vec<_> = pool
        .par_iter()
        .filter_map(|m| selfdual::find_strong_involution(m).map(|t| (m.clone(), t)))
        .collect();
    Ok((pool.len(), found))
}

/// Writes `census_n<n>.pc` and its `.meta` sidecar.
pub fn run_census(
    n: usize,
    source: &Source,
    out: &Path,
    ctx: &RunContext,
) -> Result<CensusOutcome, PipelineError> {
    let (candidates, found) = ctx.run(|| strongly_involutive(n, source))??;
    let maps: Vec<PlanarMap> = found.into_iter().map(|(m, _)| m).collect();
    let path = census_file(out, n);
    write_file(&path, codec::write_planar_code(&maps)?)?;
    let outcome = CensusOutcome {
        n,
        candidates,
        selfdual: maps.len(),
        path: path.clone(),
    };
    let mut meta = String::new();
    for (k, v) in ctx.meta() {
        meta.push_str(&format!("{k}: {v}\n"));
    }
    meta.push_str(&format!("source: {}\n", source_label(source)));
    meta.push_str(&outcome.summary_line());
    meta.push('\n');
    write_file(&path.with_extension("pc.meta"), meta)?;
    Ok(outcome)
}

fn source_label(source: &Source) -> String {
    match source {
        Source::Internal => "internal".into(),
        Source::File(p) => format!("file:{}", p.display()),
    }
}

fn load_certified(input: &Path) -> Result<Vec<PlanarMap>, PipelineError> {
    Ok(codec::read_planar_code(&read_file(input)?)?)
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ColorOutcome {
    pub written: Vec<PathBuf>,
    /// Graph index and diagnostic for every graph that could not be coloured.
    pub failures: Vec<(usize, String)>,
}

fn color_one(map: &PlanarMap) -> Result<(Vec<u8>, usize), String> {
    let iso = selfdual::find_strong_involution(map)
        .ok_or_else(|| "no strongly involutive self-duality".to_string())?;
    let (colors, forest) = coloring::four_coloring(map, &iso).map_err(|e: ColoringError| e.to_string())?;
    let d = selfdual::diameter_graph(map, &iso);
    if d.edges.iter().any(|&(a, b)| colors[a] == colors[b]) {
        return Err("colouring is not proper".into());
    }
    Ok((colors, forest.steps.len()))
}

/// One `color/g<i>.col` per graph of the census file `input`.
pub fn run_color(input: &Path, out: &Path, ctx: &RunContext) -> Result<ColorOutcome, PipelineError> {
    let maps = load_certified(input)?;
    let results: Vec<_> = ctx.run(|| maps.par_iter().map(color_one).collect())?;
    let mut outcome = ColorOutcome::default();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((colors, steps)) => {
                let mut meta = ctx.meta();
                meta.push(("graph".into(), i.to_string()));
                meta.push(("reductions".into(), steps.to_string()));
                let path = out.join("color").join(format!("{}.col", graph_name(i)));
                write_file(&path, codec::write_coloring(&colors, &meta))?;
                outcome.written.push(path);
            }
            Err(msg) => outcome.failures.push((i, msg)),
        }
    }
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedRow {
    pub graph: usize,
    pub converged: bool,
    pub report: Option<QualityReport>,
    pub error: Option<String>,
    pub seconds: f64,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedOutcome {
    pub rows: Vec<EmbedRow>,
    pub summary_path: PathBuf,
}

impl EmbedOutcome {
    pub fn successes(&self) -> usize {
        self.rows.iter().filter(|r| r.converged).count()
    }

    pub fn worst_avg_edge_error(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.converged)
            .filter_map(|r| r.report.as_ref().map(|q| q.avg_edge_error))
            .fold(0.0, f64::max)
    }
}

fn config_line(c: &EmbedderConfig) -> String {
    format!(
        "epsilon={} alpha={} penalty_k={} threshold={:e} pop={} weight={} crossover={} max_gens={} restarts={} box={}",
        c.epsilon,
        c.alpha,
        c.penalty_k,
        c.stop_threshold,
        c.population(),
        c.diff_weight,
        c.crossover_rate,
        c.max_generations,
        c.restarts,
        c.box_halfwidth
    )
}

/// One `embed/g<i>.emb` per graph plus `embed/summary.txt`. Graphs that do
/// not converge still get their best embedding written; non-convergence
/// is reported, not fatal. Wall times are returned but kept out of files.
pub fn run_embed(input: &Path, out: &Path, ctx: &RunContext) -> Result<EmbedOutcome, PipelineError> {
    ctx.embed
        .validate()
        .map_err(|e| PipelineError::Config(e.to_string()))?;
    let maps = load_certified(input)?;
    let cfg = ctx.embed.clone();
    let results: Vec<_> = ctx.run(|| {
        maps.par_iter()
            .enumerate()
            .map(|(i, m)| {
                let start = Instant::now();
                let r = match selfdual::find_strong_involution(m) {
                    None => Err("no strongly involutive self-duality".to_string()),
                    Some(iso) => {
                        let d = selfdual::diameter_graph(m, &iso);
                        match embedder::embed_graph(&d, &cfg, i as u64) {
                            Ok(res) => Ok((true, res)),
                            Err(EmbedError::NonConvergence(best)) => Ok((false, *best)),
                            Err(e) => Err(e.to_string()),
                        }
                    }
                };
                (r, start.elapsed().as_secs_f64())
            })
            .collect()
    })?;
    let mut rows = Vec::new();
    let mut summary = String::from("# reuleaux embedding summary\n");
    for (k, v) in ctx.meta() {
        summary.push_str(&format!("# {k}: {v}\n"));
    }
    summary.push_str(&format!("# config: {}\n", config_line(&cfg)));
    for (i, (r, seconds)) in results.into_iter().enumerate() {
        match r {
            Ok((converged, res)) => {
                let mut meta = ctx.meta();
                meta.push(("graph".into(), i.to_string()));
                meta.push(("config".into(), config_line(&cfg)));
                meta.push(("status".into(), if converged { "converged" } else { "non-convergence" }.into()));
                let path = out.join("embed").join(format!("{}.emb", graph_name(i)));
                write_file(&path, codec::write_embedding(&res.embedding.points, Some(&res.report), &meta))?;
                summary.push_str(&format!(
                    "{} {} J={:e} avg_edge_error={:e} max_edge_error={:e} min_pair_distance={:.6} generations={} restarts={}\n",
                    graph_name(i),
                    if converged { "ok" } else { "non-convergence" },
                    res.report.objective,
                    res.report.avg_edge_error,
                    res.report.max_edge_error,
                    res.report.min_pair_distance,
                    res.report.generations_used,
                    res.report.restarts_used,
                ));
                rows.push(EmbedRow {
                    graph: i,
                    converged,
                    report: Some(res.report),
                    error: None,
                    seconds,
                    path: Some(path),
                });
            }
            Err(msg) => {
                summary.push_str(&format!("{} error {msg}\n", graph_name(i)));
                rows.push(EmbedRow {
                    graph: i,
                    converged: false,
                    report: None,
                    error: Some(msg),
                    seconds,
                    path: None,
                });
            }
        }
    }
    let mut outcome = EmbedOutcome {
        rows,
        summary_path: out.join("embed").join("summary.txt"),
    };
    summary.push_str(&format!(
        "success {}/{} worst_avg_edge_error={:e}\n",
        outcome.successes(),
        outcome.rows.len(),
        outcome.worst_avg_edge_error()
    ));
    write_file(&outcome.summary_path, summary)?;
    outcome.rows.sort_by_key(|r| r.graph);
    Ok(outcome)
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ExportOutcome {
    pub written: Vec<PathBuf>,
    /// Inputs skipped because their points are not injective.
    pub skipped: Vec<(PathBuf, String)>,
}

/// Embedding files named on the command line; directories contribute their
/// `.emb` files in name order.
pub fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, PipelineError> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)
                .map_err(io_err(p))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "emb"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

/// One `scad/<stem>.scad` per injective embedding file.
pub fn run_export(inputs: &[PathBuf], out: &Path, ctx: &RunContext) -> Result<ExportOutcome, PipelineError> {
    let mut outcome = ExportOutcome::default();
    for file in expand_inputs(inputs)? {
        let text = String::from_utf8_lossy(&read_file(&file)?).into_owned();
        let emb = codec::read_embedding(&text)?;
        let mut meta = ctx.meta();
        let stem = file.file_stem().map_or_else(|| "embedding".into(), |s| s.to_string_lossy().into_owned());
        meta.push(("embedding".into(), stem.clone()));
        match scad::export_reuleaux(&emb.points, ctx.embed.epsilon, scad::DEFAULT_RESOLUTION, &meta) {
            Ok(script) => {
                let path = out.join("scad").join(format!("{stem}.scad"));
                write_file(&path, script.text)?;
                outcome.written.push(path);
            }
            Err(e @ ScadError::RejectNonInjective(..)) => outcome.skipped.push((file, e.to_string())),
        }
    }
    Ok(outcome)
}

#[derive(Debug)]
pub struct PipelineOutcome {
    pub census: CensusOutcome,
    pub color: ColorOutcome,
    pub embed: EmbedOutcome,
    pub export: ExportOutcome,
}

/// Census, colour, embed and export in sequence, each stage reading the
/// files the previous one wrote.
pub fn run_pipeline(
    n: usize,
    source: &Source,
    out: &Path,
    ctx: &RunContext,
) -> Result<PipelineOutcome, PipelineError> {
    let census = run_census(n, source, out, ctx)?;
    let color = run_color(&census.path, out, ctx)?;
    let embed = run_embed(&census.path, out, ctx)?;
    let emb_files: Vec<PathBuf> = embed
        .rows
        .iter()
        .filter(|r| r.converged)
        .filter_map(|r| r.path.clone())
        .collect();
    let export = run_export(&emb_files, out, ctx)?;
    Ok(PipelineOutcome {
        census,
        color,
        embed,
        export,
    })
}
