//! Multistart randomized construction plus local search.
//!
//! Each iteration builds a set with a restricted candidate list and then
//! improves it with swap moves. Iterations draw from independent random
//! streams derived from the master seed, run in parallel, and are merged by
//! score with a lexicographic tie-break, so results do not depend on the
//! number of worker threads.

mod construction;
mod local_search;
mod working;

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{approx_local_triangles, component_count_within, Graph, NodeSet};
use crate::result::{Algorithm, RankedResult, SubgraphResult, TopK};
use crate::rng::stream_rng;
use crate::spectral::{largest_magnitude_eigenpairs, subgraph_objective, SolverOptions, DEFAULT_EIGS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TriangleMode {
    /// Local triangle counts estimated from the top eigen-pairs.
    Approximate,
    /// Exact local triangle counts.
    Exact,
}

#[derive(Clone, Debug)]
pub struct GraspConfig {
    pub s: usize,
    pub t_max: usize,
    /// Range from which the list threshold parameter is drawn at every step.
    pub beta: (f64, f64),
    pub seed: u64,
    /// Eigen-pairs used for the reported objective and for approximate
    /// triangle counts.
    pub t: usize,
    /// Vertices every result must contain.
    pub seeds: NodeSet,
    pub allow_disconnect_on_delete: bool,
    pub triangles: TriangleMode,
    /// Largest Jaccard similarity allowed between two top-k results.
    pub max_overlap: Option<f64>,
}

impl GraspConfig {
    pub fn new(s: usize) -> GraspConfig {
        GraspConfig {
            s,
            t_max: 50,
            beta: (0.8, 1.0),
            seed: 0,
            t: DEFAULT_EIGS,
            seeds: NodeSet::empty(),
            allow_disconnect_on_delete: false,
            triangles: TriangleMode::Approximate,
            max_overlap: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationDiagnostics {
    pub iteration: usize,
    pub construction_lambda: f64,
    pub final_lambda: f64,
    pub size: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraspOutcome {
    pub result: SubgraphResult,
    pub diagnostics: Vec<IterationDiagnostics>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraspTopK {
    pub top: TopK,
    pub diagnostics: Vec<IterationDiagnostics>,
}

/// First-step scores shared by every iteration of a run.
pub(crate) struct GraspContext {
    first_scores: Vec<f64>,
    /// Vertices by decreasing first-step score, ties to the smallest id.
    order: Vec<usize>,
}

impl GraspContext {
    fn new(g: &Graph, cfg: &GraspConfig) -> Result<GraspContext> {
        let triangles: Vec<f64> = match cfg.triangles {
            TriangleMode::Exact => g.all_local_triangles().into_iter().map(|t| t as f64).collect(),
            TriangleMode::Approximate if g.m() == 0 => vec![0.0; g.n()],
            TriangleMode::Approximate => {
                let basis = largest_magnitude_eigenpairs(g, None, cfg.t.min(g.n()), &SolverOptions::default())?;
                approx_local_triangles(g, &basis)?
            }
        };
        let first_scores: Vec<f64> = triangles
            .iter()
            .enumerate()
            .map(|(v, &t)| match g.degree(v) {
                0 => 0.0,
                d => t.max(0.0) / d as f64,
            })
            .collect();
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.sort_by(|&a, &b| first_scores[b].total_cmp(&first_scores[a]).then(a.cmp(&b)));
        Ok(GraspContext { first_scores, order })
    }
}

fn validate(g: &Graph, cfg: &GraspConfig) -> Result<()> {
    if cfg.s == 0 {
        return Err(invalid("subgraph size must be at least 1"));
    }
    if cfg.s > g.n() {
        return Err(invalid(format!("subgraph size {} exceeds vertex count {}", cfg.s, g.n())));
    }
    if cfg.t_max == 0 {
        return Err(invalid("iteration count must be at least 1"));
    }
    if cfg.t == 0 {
        return Err(invalid("t must be at least 1"));
    }
    let (lo, hi) = cfg.beta;
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
        return Err(invalid(format!("beta range [{lo}, {hi}] must satisfy 0 <= lo <= hi <= 1")));
    }
    if let Some(j) = cfg.max_overlap {
        if !(0.0..=1.0).contains(&j) {
            return Err(invalid(format!("max overlap {j} must lie in [0, 1]")));
        }
    }
    g.check_set(&cfg.seeds)?;
    if cfg.seeds.len() > cfg.s {
        return Err(invalid(format!(
            "{} seed vertices exceed subgraph size {}",
            cfg.seeds.len(),
            cfg.s
        )));
    }
    Ok(())
}

struct Iteration {
    nodes: NodeSet,
    value: f64,
    diagnostics: IterationDiagnostics,
}

fn iterate(g: &Graph, cfg: &GraspConfig, any_size: bool) -> Result<Vec<Iteration>> {
    validate(g, cfg)?;
    let ctx = GraspContext::new(g, cfg)?;
    let runs: Vec<Iteration> = (0..cfg.t_max)
        .into_par_iter()
        .map(|iteration| {
            let start = Instant::now();
            let mut rng = stream_rng(cfg.seed, iteration as u64);
            let (s0, construction_lambda) = construction::construct(g, &ctx, cfg, &mut rng);
            let local_search::Searched { nodes, value, .. } = local_search::search(g, &s0, cfg, any_size);
            Iteration {
                diagnostics: IterationDiagnostics {
                    iteration,
                    construction_lambda,
                    final_lambda: value,
                    size: nodes.len(),
                    seconds: start.elapsed().as_secs_f64(),
                },
                nodes,
                value,
            }
        })
        .collect();
    Ok(runs)
}

/// Iteration indices by decreasing value, ties to the lexicographically
/// smaller set.
fn ranking(runs: &[Iteration]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..runs.len()).collect();
    idx.sort_by(|&a, &b| {
        runs[b]
            .value
            .total_cmp(&runs[a].value)
            .then_with(|| runs[a].nodes.cmp(&runs[b].nodes))
            .then(a.cmp(&b))
    });
    idx
}

fn finish(g: &Graph, nodes: NodeSet, algorithm: Algorithm, t: usize) -> Result<SubgraphResult> {
    let score = subgraph_objective(g, &nodes, t)?;
    let multi_component = component_count_within(g, &nodes) > 1;
    Ok(SubgraphResult {
        nodes,
        objective: score.value,
        score,
        algorithm,
        trace: Vec::new(),
        multi_component,
    })
}

fn best_of(g: &Graph, cfg: &GraspConfig, any_size: bool, algorithm: Algorithm) -> Result<GraspOutcome> {
    let runs = iterate(g, cfg, any_size)?;
    let best = ranking(&runs)
        .into_iter()
        .find(|&i| any_size || runs[i].nodes.len() == cfg.s)
        .ok_or_else(|| Error::Infeasible("no feasible s-subgraph found".into()))?;
    let result = finish(g, runs[best].nodes.clone(), algorithm, cfg.t)?;
    Ok(GraspOutcome {
        result,
        diagnostics: runs.into_iter().map(|r| r.diagnostics).collect(),
    })
}

/// Best `s`-vertex subgraph over `cfg.t_max` iterations.
pub fn grasp_rls(g: &Graph, cfg: &GraspConfig) -> Result<GraspOutcome> {
    let algorithm = if cfg.seeds.is_empty() {
        Algorithm::GraspRls
    } else {
        Algorithm::GraspSeeded
    };
    best_of(g, cfg, false, algorithm)
}

/// Best `s`-vertex subgraph containing every vertex of `cfg.seeds`.
pub fn grasp_seeded(g: &Graph, cfg: &GraspConfig) -> Result<GraspOutcome> {
    best_of(g, cfg, false, Algorithm::GraspSeeded)
}

/// Best subgraph of any size; construction grows sets of `cfg.s` vertices
/// and local search may then grow or shrink them freely.
pub fn grasp_rgs(g: &Graph, cfg: &GraspConfig) -> Result<GraspOutcome> {
    best_of(g, cfg, true, Algorithm::GraspRgs)
}

/// The `k` best distinct `s`-vertex subgraphs found across iterations,
/// skipping any whose Jaccard similarity to a better one exceeds
/// `cfg.max_overlap`.
pub fn grasp_krls(g: &Graph, cfg: &GraspConfig, k: usize) -> Result<GraspTopK> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    if cfg.t_max < k {
        return Err(invalid(format!("iteration count {} is below k = {k}", cfg.t_max)));
    }
    let runs = iterate(g, cfg, false)?;
    let mut chosen: Vec<usize> = Vec::new();
    for i in ranking(&runs) {
        if chosen.len() == k {
            break;
        }
        let nodes = &runs[i].nodes;
        if nodes.len() != cfg.s {
            continue;
        }
        let clash = chosen.iter().any(|&j| {
            let other = &runs[j].nodes;
            other == nodes || cfg.max_overlap.is_some_and(|cap| other.jaccard(nodes) > cap)
        });
        if !clash {
            chosen.push(i);
        }
    }
    let items = chosen
        .into_iter()
        .map(|i| {
            Ok(RankedResult {
                round: i,
                result: finish(g, runs[i].nodes.clone(), Algorithm::GraspKrls, cfg.t)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GraspTopK {
        top: TopK { items, requested: k },
        diagnostics: runs.into_iter().map(|r| r.diagnostics).collect(),
    })
}

/// One construction phase.
pub fn grasp_construction<R: Rng>(g: &Graph, cfg: &GraspConfig, rng: &mut R) -> Result<NodeSet> {
    validate(g, cfg)?;
    let ctx = GraspContext::new(g, cfg)?;
    Ok(construction::construct(g, &ctx, cfg, rng).0)
}

/// One local-search phase from an `s`-vertex start set.
pub fn grasp_local_search(g: &Graph, s0: &NodeSet, cfg: &GraspConfig) -> Result<NodeSet> {
    validate(g, cfg)?;
    g.check_set(s0)?;
    if s0.len() != cfg.s {
        return Err(invalid(format!("start set has {} vertices, expected {}", s0.len(), cfg.s)));
    }
    if !cfg.seeds.is_subset_of(s0) {
        return Err(invalid("start set must contain every seed vertex"));
    }
    Ok(local_search::search(g, s0, cfg, false).nodes)
}

#[cfg(test)]
mod tests;
