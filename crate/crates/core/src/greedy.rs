//! Top-down peeling guided by the spectral removal score.
//!
//! At each step the non-protected active vertex whose deletion keeps the
//! estimated exponential spectral sum largest is removed. Eigen-pairs are
//! carried along with first-order updates and re-solved at the active counts
//! `ceil(n / 2^i)` and whenever accumulated staleness passes its limit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{ActiveSet, Graph, NodeSet};
use crate::result::{Algorithm, RankedResult, SubgraphResult, TopK, TracePoint};
use crate::spectral::{
    apply_removal, estimate_v_min, log_sum_exp, robustness_from_basis, subgraph_objective,
    top_eigenpairs, top_eigenpairs_warm, EigenBasis, SolverOptions, UpdateOptions, DEFAULT_EIGS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// First-order updates after every removal plus scheduled re-solves.
    Perturb,
    /// No updates between the scheduled re-solves.
    RecomputeOnly,
}

#[derive(Clone, Debug)]
pub struct GreedyConfig {
    pub s: usize,
    pub t: usize,
    pub schedule: Schedule,
    /// Vertices that are never removed.
    pub seeds: NodeSet,
    pub solver: SolverOptions,
    pub update: UpdateOptions,
}

impl GreedyConfig {
    pub fn new(s: usize) -> GreedyConfig {
        GreedyConfig {
            s,
            t: DEFAULT_EIGS,
            schedule: Schedule::Perturb,
            seeds: NodeSet::empty(),
            solver: SolverOptions::default(),
            update: UpdateOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisjointMode {
    /// Later rounds exclude every vertex already found.
    Node,
    /// Later rounds drop only the edges inside found subgraphs.
    Edge,
}

struct Peel {
    removed: Vec<usize>,
    trace: Vec<TracePoint>,
    active: ActiveSet,
}

fn solve(g: &Graph, active: &ActiveSet, cfg: &GreedyConfig, warm: Option<&EigenBasis>) -> Result<EigenBasis> {
    let t = cfg.t.min(active.count());
    match warm {
        Some(b) => top_eigenpairs_warm(g, Some(active), t, &cfg.solver, b),
        None => top_eigenpairs(g, Some(active), t, &cfg.solver),
    }
}

/// Log of the estimated spectral sum after deleting each candidate. All
/// products `(A u_j)_v` over the active graph are formed once per step.
fn score_candidates(g: &Graph, active: &ActiveSet, basis: &EigenBasis, candidates: &[usize]) -> Vec<f64> {
    let products: Vec<Vec<f64>> = basis
        .vectors()
        .par_iter()
        .map(|u| {
            candidates
                .iter()
                .map(|&v| {
                    g.neighbors(v)
                        .iter()
                        .filter(|&&w| active.contains(w))
                        .map(|&w| u[w])
                        .sum()
                })
                .collect()
        })
        .collect();
    candidates
        .par_iter()
        .enumerate()
        .with_min_len(64)
        .map(|(i, &v)| {
            let shifted: Vec<f64> = basis
                .values()
                .iter()
                .zip(basis.vectors())
                .zip(&products)
                .map(|((lambda, u), au)| lambda - 2.0 * u[v] * au[i])
                .collect();
            log_sum_exp(&shifted)
        })
        .collect()
}

/// Highest score, ties to the smallest vertex id.
fn argmax(candidates: &[usize], scores: &[f64]) -> (usize, f64) {
    let mut best = (candidates[0], scores[0]);
    for (&v, &s) in candidates.iter().zip(scores).skip(1) {
        if s > best.1 || (s == best.1 && v < best.0) {
            best = (v, s);
        }
    }
    best
}

fn marks(start: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut div = 2usize;
    loop {
        let m = start.div_ceil(div);
        if out.last() != Some(&m) {
            out.push(m);
        }
        if m <= 1 {
            break;
        }
        div = div.saturating_mul(2);
    }
    out
}

/// Removes vertices from `active` until `stop_at` remain.
fn peel(g: &Graph, mut active: ActiveSet, stop_at: usize, cfg: &GreedyConfig) -> Result<Peel> {
    let mut basis = solve(g, &active, cfg, None).map_err(|e| at_step(0, e))?;
    let mut trace = vec![TracePoint {
        size: active.count(),
        lambda: robustness_from_basis(&basis, active.count())?.value,
        fresh: true,
    }];
    let marks = marks(active.count());
    let mut removed = Vec::new();
    while active.count() > stop_at {
        let step = removed.len() + 1;
        let candidates: Vec<usize> = active.iter().filter(|&v| !cfg.seeds.contains(v)).collect();
        if candidates.is_empty() {
            return Err(invalid("every remaining vertex is protected"));
        }
        let scores = score_candidates(g, &active, &basis, &candidates);
        let (v, score) = argmax(&candidates, &scores);
        match cfg.schedule {
            Schedule::Perturb => apply_removal(&mut basis, g, v, &mut active, &cfg.update)?,
            Schedule::RecomputeOnly => active.remove(v)?,
        }
        removed.push(v);
        let z = active.count();
        let stale = cfg.schedule == Schedule::Perturb && basis.staleness() > cfg.update.staleness_limit;
        let point = if z > 0 && (marks.contains(&z) || stale) {
            basis = solve(g, &active, cfg, Some(&basis)).map_err(|e| at_step(step, e))?;
            TracePoint {
                size: z,
                lambda: robustness_from_basis(&basis, z)?.value,
                fresh: true,
            }
        } else {
            TracePoint {
                size: z,
                lambda: score - (z as f64).ln(),
                fresh: false,
            }
        };
        trace.push(point);
    }
    Ok(Peel {
        removed,
        trace,
        active,
    })
}

fn at_step(step: usize, e: Error) -> Error {
    match e {
        Error::NonConvergence { .. } => Error::AtStep {
            step,
            source: Box::new(e),
        },
        other => other,
    }
}

fn validate(g: &Graph, cfg: &GreedyConfig) -> Result<()> {
    if cfg.s == 0 {
        return Err(invalid("s must be at least 1"));
    }
    if cfg.s > g.n() {
        return Err(invalid(format!("s = {} exceeds the vertex count {}", cfg.s, g.n())));
    }
    if cfg.t == 0 {
        return Err(invalid("t must be at least 1"));
    }
    g.check_set(&cfg.seeds)?;
    if cfg.seeds.len() > cfg.s {
        return Err(invalid(format!(
            "{} seed vertices do not fit in a subgraph of size {}",
            cfg.seeds.len(),
            cfg.s
        )));
    }
    Ok(())
}

fn finish(g: &Graph, nodes: NodeSet, algorithm: Algorithm, t: usize, trace: Vec<TracePoint>) -> Result<SubgraphResult> {
    let score = subgraph_objective(g, &nodes, t)?;
    Ok(SubgraphResult {
        objective: score.value,
        nodes,
        score,
        algorithm,
        trace,
        multi_component: false,
    })
}

fn run(g: &Graph, active: ActiveSet, cfg: &GreedyConfig, algorithm: Algorithm) -> Result<SubgraphResult> {
    if cfg.seeds.len() == cfg.s {
        return finish(g, cfg.seeds.clone(), algorithm, cfg.t, Vec::new());
    }
    let p = peel(g, active, cfg.s, cfg)?;
    finish(g, p.active.to_node_set(), algorithm, cfg.t, p.trace)
}

/// The size-`s` subgraph left after peeling the whole graph.
pub fn greedy_rls(g: &Graph, cfg: &GreedyConfig) -> Result<SubgraphResult> {
    validate(g, cfg)?;
    let algorithm = if cfg.seeds.is_empty() {
        Algorithm::GreedyRls
    } else {
        Algorithm::GreedySeeded
    };
    run(g, ActiveSet::all(g.n()), cfg, algorithm)
}

/// Peeling that never removes `cfg.seeds`.
pub fn greedy_seeded(g: &Graph, cfg: &GreedyConfig) -> Result<SubgraphResult> {
    validate(g, cfg)?;
    run(g, ActiveSet::all(g.n()), cfg, Algorithm::GreedySeeded)
}

/// Peels down to the smallest clique size whose robustness reaches that of
/// the whole graph and returns the most robust set seen along the way.
/// `cfg.s` is ignored.
pub fn greedy_rgs(g: &Graph, cfg: &GreedyConfig) -> Result<SubgraphResult> {
    if g.n() == 0 {
        return Err(invalid("graph has no vertices"));
    }
    let sweep = GreedyConfig {
        s: g.n(),
        ..cfg.clone()
    };
    validate(g, &sweep)?;
    let full = ActiveSet::all(g.n());
    let whole = robustness_from_basis(&solve(g, &full, &sweep, None)?, g.n())?.value;
    let v_min = estimate_v_min(whole.max(0.0))?.preferred();
    let stop_at = v_min.max(cfg.seeds.len()).max(1).min(g.n());
    let p = peel(g, full, stop_at, &sweep)?;
    let mut best = 0;
    for (i, point) in p.trace.iter().enumerate() {
        if point.lambda > p.trace[best].lambda {
            best = i;
        }
    }
    let mut active = ActiveSet::all(g.n());
    for &v in &p.removed[..best] {
        active.remove(v)?;
    }
    finish(g, active.to_node_set(), Algorithm::GreedyRgs, cfg.t, p.trace)
}

/// Up to `k` subgraphs found by repeated peeling, each round working on what
/// the previous rounds left. Rounds stop early once fewer than `s` vertices
/// remain or the remaining graph has no edges. Results are sorted by
/// robustness; `round` keeps the discovery order.
pub fn greedy_krls(g: &Graph, cfg: &GreedyConfig, k: usize, mode: DisjointMode) -> Result<TopK> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    validate(g, cfg)?;
    let mut out = TopK {
        items: Vec::new(),
        requested: k,
    };
    let mut host = g.clone();
    let mut active = ActiveSet::all(g.n());
    for round in 0..k {
        if active.count() < cfg.s || !has_active_edge(&host, &active) {
            break;
        }
        let mut result = run(&host, active.clone(), cfg, Algorithm::GreedyKrls)?;
        match mode {
            DisjointMode::Node => {
                for v in result.nodes.iter() {
                    active.remove(v)?;
                }
            }
            DisjointMode::Edge => host = host.without_edges_within(&result.nodes)?,
        }
        // Score against the original graph; edge mode may have thinned the host.
        result.score = subgraph_objective(g, &result.nodes, cfg.t)?;
        result.objective = result.score.value;
        out.items.push(RankedResult { round, result });
    }
    out.sort();
    Ok(out)
}

fn has_active_edge(g: &Graph, active: &ActiveSet) -> bool {
    active
        .iter()
        .any(|v| g.neighbors(v).iter().any(|&w| active.contains(w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::clique_robustness;

    fn k_plus_pendant(k: usize) -> Graph {
        let mut edges: Vec<(usize, usize)> = Graph::complete(k).edges().collect();
        edges.push((0, k));
        Graph::from_edges(k + 1, edges).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn mark_schedule() {
        assert_eq!(marks(100), vec![50, 25, 13, 7, 4, 2, 1]);
        assert_eq!(marks(7), vec![4, 2, 1]);
        assert_eq!(marks(1), vec![1]);
    }

    #[test]
    fn k5_pendant() {
        let g = k_plus_pendant(5);
        let r = greedy_rls(&g, &GreedyConfig::new(5)).unwrap();
        assert_eq!(r.nodes.members(), &[0, 1, 2, 3, 4]);
        assert!(close(r.score.value, clique_robustness(5).unwrap().value));
        assert_eq!(r.trace.len(), 2);
    }

    #[test]
    fn star_keeps_hub() {
        let r = greedy_rls(&Graph::star(5), &GreedyConfig::new(3)).unwrap();
        assert!(r.nodes.contains(0));
        assert!((r.score.value - 0.5797).abs() < 1e-4);
    }

    #[test]
    fn clique_is_returned_unchanged() {
        for s in 1..8 {
            let r = greedy_rls(&Graph::complete(s), &GreedyConfig::new(s)).unwrap();
            assert_eq!(r.nodes.len(), s);
            assert!(close(r.score.value, clique_robustness(s).unwrap().value));
        }
    }

    #[test]
    fn argument_errors() {
        let g = Graph::path(4);
        assert!(greedy_rls(&g, &GreedyConfig::new(5)).is_err());
        assert!(greedy_rls(&g, &GreedyConfig::new(0)).is_err());
        let mut cfg = GreedyConfig::new(1);
        cfg.seeds = NodeSet::new(vec![0, 1], 4).unwrap();
        assert!(greedy_seeded(&g, &cfg).is_err());
    }

    #[test]
    fn rgs_examples() {
        let k8 = greedy_rgs(&Graph::complete(8), &GreedyConfig::new(1)).unwrap();
        assert_eq!(k8.nodes.len(), 8);
        let k6p = greedy_rgs(&k_plus_pendant(6), &GreedyConfig::new(1)).unwrap();
        assert_eq!(k6p.nodes.members(), &[0, 1, 2, 3, 4, 5]);
        let two = Graph::disjoint_union(&Graph::complete(8), &Graph::complete(3));
        let r = greedy_rgs(&two, &GreedyConfig::new(1)).unwrap();
        assert!(r.nodes.iter().all(|v| v < 8));
    }

    #[test]
    fn krls_examples() {
        let two = Graph::disjoint_union(&Graph::complete(6), &Graph::complete(6));
        let r = greedy_krls(&two, &GreedyConfig::new(6), 2, DisjointMode::Node).unwrap();
        assert_eq!(r.items.len(), 2);
        for item in &r.items {
            assert!(close(item.result.score.value, clique_robustness(6).unwrap().value));
        }
        let mut sides: Vec<bool> = r.items.iter().map(|i| i.result.nodes.contains(0)).collect();
        sides.sort();
        assert_eq!(sides, vec![false, true]);

        let with_isolates = Graph::disjoint_union(&two, &Graph::empty(8));
        let r = greedy_krls(&with_isolates, &GreedyConfig::new(6), 3, DisjointMode::Node).unwrap();
        assert_eq!(r.items.len(), 2);
        assert!(r.fewer_than_requested());

        let single = greedy_krls(&two, &GreedyConfig::new(6), 1, DisjointMode::Edge).unwrap();
        let direct = greedy_rls(&two, &GreedyConfig::new(6)).unwrap();
        assert_eq!(single.items[0].result.nodes, direct.nodes);
    }

    #[test]
    fn seeded_examples() {
        let g = k_plus_pendant(5);
        let mut cfg = GreedyConfig::new(5);
        cfg.seeds = NodeSet::new(vec![5], 6).unwrap();
        let r = greedy_seeded(&g, &cfg).unwrap();
        assert!(r.nodes.contains(5));
        assert_eq!(r.nodes.len(), 5);

        cfg.s = 1;
        let r = greedy_seeded(&g, &cfg).unwrap();
        assert_eq!(r.nodes.members(), &[5]);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn clique_among_isolates() {
        for s in 2..=12 {
            let g = Graph::disjoint_union(&Graph::empty(7), &Graph::complete(s));
            let r = greedy_rls(&g, &GreedyConfig::new(s)).unwrap();
            assert!(r.nodes.iter().all(|v| v >= 7), "s = {s}");
        }
    }

    #[test]
    fn recompute_only_schedule_runs() {
        let g = k_plus_pendant(6);
        let mut cfg = GreedyConfig::new(6);
        cfg.schedule = Schedule::RecomputeOnly;
        let r = greedy_rls(&g, &cfg).unwrap();
        assert_eq!(r.nodes.len(), 6);
        assert!(!r.nodes.contains(6));
    }
}
