//! Densest-subgraph comparators: minimum-degree peeling for average degree
//! and for edge surplus `e[S] - alpha C(|S|, 2)`, and edge-surplus local search.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeSet};
use crate::result::{Algorithm, SubgraphResult};
use crate::spectral::{subgraph_objective, DEFAULT_EIGS};

pub const DEFAULT_ALPHA: f64 = 1.0 / 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensityObjective {
    AverageDegree,
    EdgeSurplus { alpha: f64 },
}

impl DensityObjective {
    pub fn value(self, edges: usize, size: usize) -> f64 {
        match self {
            DensityObjective::AverageDegree if size == 0 => 0.0,
            DensityObjective::AverageDegree => edges as f64 / size as f64,
            DensityObjective::EdgeSurplus { alpha } => {
                edges as f64 - alpha * (size * size.saturating_sub(1)) as f64 / 2.0
            }
        }
    }

    /// Objective of `G[s]`, counted from scratch.
    pub fn evaluate(self, g: &Graph, s: &NodeSet) -> Result<f64> {
        Ok(self.value(g.count_edges_within(s)?, s.len()))
    }

    fn validate(self) -> Result<()> {
        match self {
            DensityObjective::EdgeSurplus { alpha } if !(alpha > 0.0 && alpha.is_finite()) => {
                Err(invalid(format!("alpha must be positive, got {alpha}")))
            }
            _ => Ok(()),
        }
    }
}

fn finish(g: &Graph, nodes: NodeSet, algorithm: Algorithm, objective: f64) -> Result<SubgraphResult> {
    let score = subgraph_objective(g, &nodes, DEFAULT_EIGS)?;
    Ok(SubgraphResult {
        multi_component: crate::graph::component_count_within(g, &nodes) > 1,
        nodes,
        score,
        algorithm,
        objective,
        trace: Vec::new(),
    })
}

/// Repeatedly deletes a minimum-degree vertex (ties to the smallest id).
/// Returns the snapshot of size `size_cap` if given, else the best snapshot
/// by `objective` with ties going to the smaller set. A best singleton is
/// reported as the smallest vertex id, since all singletons score alike.
pub fn peel(g: &Graph, objective: DensityObjective, size_cap: Option<usize>) -> Result<(NodeSet, f64)> {
    objective.validate()?;
    let n = g.n();
    if n == 0 {
        return Err(invalid("cannot peel an empty graph"));
    }
    if let Some(s) = size_cap {
        if s == 0 || s > n {
            return Err(invalid(format!("size cap {s} must lie in 1..={n}")));
        }
    }
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (degree[v], v)).collect();
    let mut alive = vec![true; n];
    let mut edges = g.m();
    let mut order = Vec::with_capacity(n);

    let mut best_value = f64::NEG_INFINITY;
    let mut best_removed = 0;
    let mut size = n;
    loop {
        let value = objective.value(edges, size);
        let take = match size_cap {
            Some(s) => size == s,
            None => value >= best_value,
        };
        if take {
            best_value = value;
            best_removed = order.len();
        }
        if size == 1 || size_cap == Some(size) {
            break;
        }
        let (_, v) = queue.pop_first().expect("queue holds every live vertex");
        alive[v] = false;
        order.push(v);
        edges -= degree[v];
        size -= 1;
        for &w in g.neighbors(v) {
            if alive[w] {
                queue.remove(&(degree[w], w));
                degree[w] -= 1;
                queue.insert((degree[w], w));
            }
        }
    }
    let removed: BTreeSet<usize> = order[..best_removed].iter().copied().collect();
    let mut members: Vec<usize> = (0..n).filter(|v| !removed.contains(v)).collect();
    if members.len() == 1 && size_cap.is_none() {
        members = vec![0];
    }
    Ok((NodeSet::new(members, n)?, best_value))
}

/// Charikar's average-degree peeling; the objective is `e[S] / |S|`.
pub fn charikar_peel(g: &Graph, size_cap: Option<usize>) -> Result<SubgraphResult> {
    let (nodes, value) = peel(g, DensityObjective::AverageDegree, size_cap)?;
    finish(g, nodes, Algorithm::Charikar, value)
}

/// Minimum-degree peeling tracking the best edge surplus.
pub fn oqc_greedy_peel(g: &Graph, alpha: f64, size_cap: Option<usize>) -> Result<SubgraphResult> {
    let (nodes, value) = peel(g, DensityObjective::EdgeSurplus { alpha }, size_cap)?;
    finish(g, nodes, Algorithm::OqcGreedy, value)
}

/// Edge-surplus local search from `seed_vertex` (default: a maximum-degree
/// vertex, ties to the smallest id). Each sweep adds best strictly improving
/// neighbours until none is left (equal gains go to the candidate with most
/// neighbours in `S` or its neighbourhood, then the smallest id), then removes the best strictly improving
/// member; the search stops when a sweep removes nothing or after
/// `max_sweeps` sweeps.
pub fn oqc_local_search(
    g: &Graph,
    alpha: f64,
    seed_vertex: Option<usize>,
    max_sweeps: usize,
) -> Result<SubgraphResult> {
    DensityObjective::EdgeSurplus { alpha }.validate()?;
    let n = g.n();
    if n == 0 {
        return Err(invalid("cannot search an empty graph"));
    }
    let seed = match seed_vertex {
        Some(v) => {
            g.check_vertex(v)?;
            v
        }
        None => (0..n).max_by(|&a, &b| g.degree(a).cmp(&g.degree(b)).then(b.cmp(&a))).unwrap_or(0),
    };

    let mut inside = vec![false; n];
    let mut deg_in = vec![0usize; n];
    let mut size = 0usize;
    let mut edges = 0usize;
    let mut toggle = |v: usize, inside: &mut Vec<bool>, deg_in: &mut Vec<usize>| {
        let add = !inside[v];
        inside[v] = add;
        for &w in g.neighbors(v) {
            if add {
                deg_in[w] += 1;
            } else {
                deg_in[w] -= 1;
            }
        }
        if add {
            edges += deg_in[v];
            size += 1;
        } else {
            edges -= deg_in[v];
            size -= 1;
        }
        (edges, size)
    };
    let (mut e, mut k) = toggle(seed, &mut inside, &mut deg_in);

    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        loop {
            let threshold = alpha * k as f64;
            let top = (0..n).filter(|&v| !inside[v]).map(|v| deg_in[v]).max().unwrap_or(0);
            let closure = |v: usize| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&w| inside[w] || deg_in[w] > 0)
                    .count()
            };
            let best = (0..n)
                .filter(|&v| !inside[v] && deg_in[v] > 0 && deg_in[v] == top)
                .map(|v| (closure(v), v))
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
                .map(|(_, v)| v);
            match best {
                Some(v) if deg_in[v] as f64 - threshold > 0.0 => {
                    (e, k) = toggle(v, &mut inside, &mut deg_in);
                }
                _ => break,
            }
        }
        if k <= 1 {
            break;
        }
        let threshold = alpha * (k - 1) as f64;
        let worst = (0..n)
            .filter(|&v| inside[v])
            .min_by(|&a, &b| deg_in[a].cmp(&deg_in[b]).then(a.cmp(&b)))
            .expect("set is nonempty");
        if threshold - deg_in[worst] as f64 > 0.0 {
            (e, k) = toggle(worst, &mut inside, &mut deg_in);
        } else {
            break;
        }
    }
    let nodes = NodeSet::new((0..n).filter(|&v| inside[v]).collect(), n)?;
    let value = DensityObjective::EdgeSurplus { alpha }.value(e, k);
    finish(g, nodes, Algorithm::OqcLocalSearch, value)
}
