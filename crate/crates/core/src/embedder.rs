//! Metric embeddings of diameter graphs by differential evolution.
//!
//! The objective rewards unit length on every diameter edge and charges a
//! fixed penalty for every non-adjacent pair that is too close (`< epsilon`)
//! or too far (`> alpha`). A zero objective therefore certifies an injective
//! point set of diameter exactly 1 with all diameter edges at length 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::selfdual::DiameterGraph;

/// Population used when none is configured. Small populations converge
/// much faster on these objectives than the usual `15 * dim`.
pub const DEFAULT_POPULATION: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedderConfig {
    pub epsilon: f64,
    pub alpha: f64,
    pub penalty_k: f64,
    pub stop_threshold: f64,
    /// `None` means [`DEFAULT_POPULATION`].
    pub population_size: Option<usize>,
    pub diff_weight: f64,
    pub crossover_rate: f64,
    pub max_generations: usize,
    pub restarts: usize,
    pub seed: u64,
    pub box_halfwidth: f64,
}

impl Default for EmbedderConfig {
    fn default() -> Self {
        EmbedderConfig {
            epsilon: 0.2,
            alpha: 0.95,
            penalty_k: 10.0,
            stop_threshold: 1e-14,
            population_size: None,
            diff_weight: 0.5,
            crossover_rate: 0.9,
            max_generations: 20_000,
            restarts: 8,
            seed: 0,
            box_halfwidth: 0.6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbedError {
    #[error("invalid embedder configuration: {0}")]
    InvalidConfig(String),
    #[error("no embedding below the stop threshold (best J = {})", .0.report.objective)]
    NonConvergence(Box<EmbedResult>),
}

impl EmbedderConfig {
    pub fn validate(&self) -> Result<(), EmbedError> {
        let bad = |m: &str| Err(EmbedError::InvalidConfig(m.to_string()));
        if !(0.0 < self.epsilon && self.epsilon < self.alpha && self.alpha < 1.0) {
            return bad("need 0 < epsilon < alpha < 1");
        }
        if !(self.penalty_k > 0.0) {
            return bad("penalty K must be positive");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad("crossover rate must lie in [0, 1]");
        }
        if !(self.diff_weight > 0.0 && self.diff_weight < 2.0) {
            return bad("differential weight must lie in (0, 2)");
        }
        if !(self.box_halfwidth > 0.0) {
            return bad("box half-width must be positive");
        }
        if self.population_size.is_some_and(|p| p < 4) {
            return bad("population needs at least 4 members");
        }
        Ok(())
    }

    pub fn population(&self) -> usize {
        self.population_size.unwrap_or(DEFAULT_POPULATION).max(4)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub points: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub objective: f64,
    pub max_edge_error: f64,
    pub avg_edge_error: f64,
    pub min_pair_distance: f64,
    pub diameter: f64,
    pub injective: bool,
    pub generations_used: usize,
    pub restarts_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedResult {
    pub embedding: Embedding,
    pub report: QualityReport,
}

#[inline]
fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Pair lists split into diameter edges and non-edges.
struct PairSplit {
    edges: Vec<(usize, usize)>,
    non_edges: Vec<(usize, usize)>,
}

impl PairSplit {
    fn new(d: &DiameterGraph) -> Self {
        let n = d.n;
        let mut adj = vec![false; n * n];
        for &(a, b) in &d.edges {
            adj[a * n + b] = true;
            adj[b * n + a] = true;
        }
        let mut edges = Vec::new();
        let mut non_edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if adj[a * n + b] {
                    edges.push((a, b));
                } else {
                    non_edges.push((a, b));
                }
            }
        }
        PairSplit { edges, non_edges }
    }

    fn objective_flat(&self, x: &[f64], cfg: &EmbedderConfig) -> f64 {
        let p = |i: usize| [x[3 * i], x[3 * i + 1], x[3 * i + 2]];
        let mut total = 0.0;
        for &(a, b) in &self.edges {
            let (pa, pb) = (p(a), p(b));
            let dx = pa[0] - pb[0];
            let dy = pa[1] - pb[1];
            let dz = pa[2] - pb[2];
            let e = dx * dx + dy * dy + dz * dz - 1.0;
            total += e * e;
        }
        let mut hits = 0u32;
        for &(a, b) in &self.non_edges {
            let r = dist(&p(a), &p(b));
            if r < cfg.epsilon {
                hits += 1;
            }
            if r > cfg.alpha {
                hits += 1;
            }
        }
        total + cfg.penalty_k * hits as f64
    }
}

/// The embedding objective for points indexed like the vertices of `d`.
pub fn objective(points: &[[f64; 3]], d: &DiameterGraph, cfg: &EmbedderConfig) -> f64 {
    let flat: Vec<f64> = points.iter().flatten().copied().collect();
    PairSplit::new(d).objective_flat(&flat, cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeOutcome {
    pub best: Vec<f64>,
    pub value: f64,
    pub generations: usize,
}

/// Classic DE/rand/1/bin minimisation of `f` over the box
/// `[-box_halfwidth, box_halfwidth]^dim`, starting from a uniform population.
pub fn differential_evolution(
    f: impl Fn(&[f64]) -> f64,
    dim: usize,
    cfg: &EmbedderConfig,
) -> DeOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let np = cfg.population();
    let h = cfg.box_halfwidth;
    let mut pop: Vec<Vec<f64>> = (0..np)
        .map(|_| (0..dim).map(|_| rng.random_range(-h..=h)).collect())
        .collect();
    let mut values: Vec<f64> = pop.iter().map(|x| f(x)).collect();
    let mut best = argmin(&values);
    let mut generations = 0;
    let mut next = pop.clone();
    let mut trial = vec![0.0; dim];
    while values[best] >= cfg.stop_threshold && generations < cfg.max_generations {
        for i in 0..np {
            let (r1, r2, r3) = distinct_three(&mut rng, np, i);
            let forced = rng.random_range(0..dim);
            for j in 0..dim {
                trial[j] = if j == forced || rng.random::<f64>() < cfg.crossover_rate {
                    let v = pop[r1][j] + cfg.diff_weight * (pop[r2][j] - pop[r3][j]);
                    // Out-of-box coordinates bounce back halfway to the bound.
                    if v > h {
                        0.5 * (pop[i][j] + h)
                    } else if v < -h {
                        0.5 * (pop[i][j] - h)
                    } else {
                        v
                    }
                } else {
                    pop[i][j]
                };
            }
            let ft = f(&trial);
            if ft <= values[i] {
                next[i].copy_from_slice(&trial);
                values[i] = ft;
            } else {
                next[i].copy_from_slice(&pop[i]);
            }
        }
        std::mem::swap(&mut pop, &mut next);
        generations += 1;
        best = argmin(&values);
    }
    DeOutcome {
        best: pop[best].clone(),
        value: values[best],
        generations,
    }
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = i;
        }
    }
    best
}

fn distinct_three(rng: &mut ChaCha8Rng, np: usize, exclude: usize) -> (usize, usize, usize) {
    let pick = |rng: &mut ChaCha8Rng, taken: &[usize]| loop {
        let r = rng.random_range(0..np);
        if !taken.contains(&r) {
            return r;
        }
    };
    let r1 = pick(rng, &[exclude]);
    let r2 = pick(rng, &[exclude, r1]);
    let r3 = pick(rng, &[exclude, r1, r2]);
    (r1, r2, r3)
}

/// SplitMix64 finaliser; derives independent seeds from a master seed.
pub fn mix_seed(master: u64, a: u64, b: u64) -> u64 {
    let mut z = master
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Measures an embedding against `d` without optimising anything.
/// `generations_used` and `restarts_used` are zero.
pub fn verify_metric_embedding(
    points: &[[f64; 3]],
    d: &DiameterGraph,
    cfg: &EmbedderConfig,
) -> QualityReport {
    assert_eq!(points.len(), d.n, "one point per vertex");
    let split = PairSplit::new(d);
    let flat: Vec<f64> = points.iter().flatten().copied().collect();
    let mut max_edge_error: f64 = 0.0;
    let mut sum_edge_error = 0.0;
    for &(a, b) in &split.edges {
        let err = (dist(&points[a], &points[b]) - 1.0).abs();
        max_edge_error = max_edge_error.max(err);
        sum_edge_error += err;
    }
    let avg_edge_error = if split.edges.is_empty() {
        0.0
    } else {
        sum_edge_error / split.edges.len() as f64
    };
    let mut min_pair_distance = f64::INFINITY;
    let mut diameter: f64 = 0.0;
    for a in 0..d.n {
        for b in a + 1..d.n {
            let r = dist(&points[a], &points[b]);
            min_pair_distance = min_pair_distance.min(r);
            diameter = diameter.max(r);
        }
    }
    QualityReport {
        objective: split.objective_flat(&flat, cfg),
        max_edge_error,
        avg_edge_error,
        min_pair_distance,
        diameter,
        injective: min_pair_distance >= cfg.epsilon,
        generations_used: 0,
        restarts_used: 0,
    }
}

fn centered(flat: &[f64]) -> Vec<[f64; 3]> {
    let n = flat.len() / 3;
    let mut c = [0.0; 3];
    for i in 0..n {
        for k in 0..3 {
            c[k] += flat[3 * i + k];
        }
    }
    for ck in &mut c {
        *ck /= n as f64;
    }
    (0..n)
        .map(|i| [flat[3 * i] - c[0], flat[3 * i + 1] - c[1], flat[3 * i + 2] - c[2]])
        .collect()
}

/// Searches for a metric embedding of `d`, restarting with derived seeds.
///
/// The returned points are translated so that their centroid is the origin
/// and the report is measured on those translated points.
pub fn embed(d: &DiameterGraph, cfg: &EmbedderConfig) -> Result<EmbedResult, EmbedError> {
    embed_graph(d, cfg, 0)
}

/// [`embed`] for graph number `graph_id` of a batch: restart `r` is seeded
/// with `mix_seed(cfg.seed, graph_id, r)`, so results do not depend on how
/// a batch is scheduled.
pub fn embed_graph(
    d: &DiameterGraph,
    cfg: &EmbedderConfig,
    graph_id: u64,
) -> Result<EmbedResult, EmbedError> {
    cfg.validate()?;
    let split = PairSplit::new(d);
    let dim = 3 * d.n;
    let mut best: Option<EmbedResult> = None;
    for attempt in 0..cfg.restarts.max(1) {
        let run_cfg = EmbedderConfig {
            seed: mix_seed(cfg.seed, graph_id, attempt as u64),
            ..cfg.clone()
        };
        let out = differential_evolution(|x| split.objective_flat(x, cfg), dim, &run_cfg);
        let points = centered(&out.best);
        let mut report = verify_metric_embedding(&points, d, cfg);
        report.generations_used = out.generations;
        report.restarts_used = attempt;
        let result = EmbedResult {
            embedding: Embedding { points },
            report,
        };
        if result.report.objective < cfg.stop_threshold {
            return Ok(result);
        }
        if best
            .as_ref()
            .is_none_or(|b| result.report.objective < b.report.objective)
        {
            best = Some(result);
        }
    }
    Err(EmbedError::NonConvergence(Box::new(best.expect("at least one attempt"))))
}
