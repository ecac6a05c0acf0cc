//! Random graph generators and samplers.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeSet};

/// Uniform draw from `(0, 1]`, safe to take the logarithm of.
fn open_unit<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Erdős–Rényi `G(n, p)` by geometric skipping over the pair sequence.
pub fn gen_er<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("edge probability {p} outside [0, 1]")));
    }
    if p == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let log_q = (1.0 - p).ln();
    let mut edges = Vec::new();
    let mut v = 1usize;
    let mut w: i64 = -1;
    while v < n {
        w += 1 + (open_unit(rng).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((v, w as usize));
        }
    }
    Graph::from_edges(n, edges)
}

/// Expected degrees of a Chung–Lu graph, in decreasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct ChungLuWeights {
    pub weights: Vec<f64>,
    /// Index offset `i0` in `w_i = c (i + i0)^(-1/(gamma-1))`; the smallest
    /// integer `>= 1` keeping `max w^2 <= sum w`.
    pub offset: u64,
}

fn weights_with_offset(n: usize, exponent: f64, avg: f64, offset: u64) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|i| ((i as u64 + offset) as f64).powf(-exponent)).collect();
    let total: f64 = raw.iter().sum();
    let c = avg * n as f64 / total;
    raw.into_iter().map(|x| c * x).collect()
}

fn feasible(w: &[f64], total: f64) -> bool {
    w[0] * w[0] <= total * (1.0 + 1e-12)
}

pub fn chung_lu_weights(n: usize, gamma: f64, avg_degree: f64) -> Result<ChungLuWeights> {
    if !(gamma > 2.0 && gamma.is_finite()) {
        return Err(invalid(format!("power-law exponent {gamma} must be finite and above 2")));
    }
    if n == 0 {
        return Err(invalid("Chung-Lu graph needs at least one vertex"));
    }
    if !(avg_degree > 0.0 && avg_degree < n as f64) {
        return Err(Error::Infeasible(format!(
            "average degree {avg_degree} cannot be realized on {n} vertices; use a smaller target"
        )));
    }
    let exponent = 1.0 / (gamma - 1.0);
    let total = avg_degree * n as f64;
    let ok = |offset: u64| feasible(&weights_with_offset(n, exponent, avg_degree, offset), total);
    let mut hi = 1u64;
    while !ok(hi) {
        if hi > 1 << 50 {
            return Err(Error::Infeasible(format!(
                "no weight offset makes average degree {avg_degree} valid; use a smaller target"
            )));
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let offset = if lo >= 1 && ok(lo) { lo } else { hi };
    Ok(ChungLuWeights {
        weights: weights_with_offset(n, exponent, avg_degree, offset),
        offset,
    })
}

/// Chung–Lu power-law graph: edge `(i, j)` appears with probability
/// `min(1, w_i w_j / sum w)`, sampled in expected linear time by skipping.
pub fn gen_chung_lu<R: Rng>(n: usize, gamma: f64, avg_degree: f64, rng: &mut R) -> Result<Graph> {
    let w = chung_lu_weights(n, gamma, avg_degree)?.weights;
    let total: f64 = w.iter().sum();
    let mut edges = Vec::new();
    for u in 0..n.saturating_sub(1) {
        let mut v = u + 1;
        let mut p = (w[u] * w[v] / total).min(1.0);
        while v < n && p > 0.0 {
            if p < 1.0 {
                v += (open_unit(rng).ln() / (1.0 - p).ln()).floor() as usize;
            }
            if v < n {
                let q = (w[u] * w[v] / total).min(1.0);
                if rng.gen::<f64>() < q / p {
                    edges.push((u, v));
                }
                p = q;
                v += 1;
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Adds all edges among `s` uniformly chosen vertices.
pub fn inject_clique<R: Rng>(g: &Graph, s: usize, rng: &mut R) -> Result<(Graph, NodeSet)> {
    if s > g.n() {
        return Err(invalid(format!("clique size {s} exceeds vertex count {}", g.n())));
    }
    let planted = NodeSet::new(sample(rng, g.n(), s).into_vec(), g.n())?;
    Ok((g.with_clique(&planted)?, planted))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snowball {
    pub nodes: NodeSet,
    /// Set when the start vertex's component had fewer vertices than requested.
    pub truncated: bool,
}

/// Depth-first snowball sample from a uniform start vertex. Each expanded
/// vertex adds every unvisited neighbour with probability `p`, and at least
/// one uniformly chosen unvisited neighbour if it has any.
pub fn snowball_sample<R: Rng>(g: &Graph, target: usize, p: f64, rng: &mut R) -> Result<Snowball> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid(format!("inclusion probability {p} outside (0, 1]")));
    }
    if target == 0 {
        return Err(invalid("target size must be at least 1"));
    }
    if g.n() == 0 {
        return Err(invalid("cannot sample from an empty graph"));
    }
    let start = rng.gen_range(0..g.n());
    let mut visited = vec![false; g.n()];
    visited[start] = true;
    let mut picked = vec![start];
    let mut stack = vec![start];
    'grow: while let Some(u) = stack.pop() {
        if picked.len() >= target {
            break;
        }
        let fresh: Vec<usize> = g.neighbors(u).iter().copied().filter(|&w| !visited[w]).collect();
        if fresh.is_empty() {
            continue;
        }
        let mut chosen: Vec<usize> = fresh.iter().copied().filter(|_| rng.gen::<f64>() < p).collect();
        if chosen.is_empty() {
            chosen.push(fresh[rng.gen_range(0..fresh.len())]);
        }
        for &w in chosen.iter().rev() {
            visited[w] = true;
            picked.push(w);
            if picked.len() >= target {
                break 'grow;
            }
        }
        stack.extend(chosen.iter().rev());
    }
    Ok(Snowball {
        truncated: picked.len() < target,
        nodes: NodeSet::new(picked, g.n())?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewireMode {
    /// Move a uniform edge to a uniform non-adjacent pair.
    Uniform,
    /// Double edge swaps that keep every degree.
    DegreePreserving,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RewireOptions {
    /// Successful moves to perform; `None` means `10 m`.
    pub moves: Option<usize>,
    pub mode: RewireMode,
}

impl Default for RewireOptions {
    fn default() -> RewireOptions {
        RewireOptions {
            moves: None,
            mode: RewireMode::Uniform,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rewired {
    pub graph: Graph,
    pub moves: usize,
    /// Set when the graph admits no move (no edge, or no missing pair).
    pub no_rewiring_possible: bool,
}

struct EdgePool {
    edges: Vec<(usize, usize)>,
    present: HashSet<(usize, usize)>,
}

impl EdgePool {
    fn key(u: usize, v: usize) -> (usize, usize) {
        (u.min(v), u.max(v))
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.present.contains(&EdgePool::key(u, v))
    }

    fn replace(&mut self, slot: usize, u: usize, v: usize) {
        let old = self.edges[slot];
        self.present.remove(&old);
        let new = EdgePool::key(u, v);
        self.edges[slot] = new;
        self.present.insert(new);
        debug_assert!(u != v && self.present.len() == self.edges.len());
    }
}

/// Randomly rewired copy of `g` with the same vertex and edge counts.
pub fn rewire<R: Rng>(g: &Graph, opts: RewireOptions, rng: &mut R) -> Result<Rewired> {
    let n = g.n();
    let m = g.m();
    let pairs = n * n.saturating_sub(1) / 2;
    let unchanged = || Rewired {
        graph: g.clone(),
        moves: 0,
        no_rewiring_possible: true,
    };
    if m == 0 || m == pairs {
        return Ok(unchanged());
    }
    let target = opts.moves.unwrap_or(10 * m);
    let mut pool = EdgePool {
        edges: g.edges().collect(),
        present: g.edges().collect(),
    };
    let mut done = 0;
    match opts.mode {
        RewireMode::Uniform => {
            while done < target {
                let slot = rng.gen_range(0..m);
                let (u, v) = loop {
                    let u = rng.gen_range(0..n);
                    let v = rng.gen_range(0..n);
                    if u != v && !pool.has(u, v) {
                        break (u, v);
                    }
                };
                pool.replace(slot, u, v);
                done += 1;
            }
        }
        RewireMode::DegreePreserving => {
            if m < 2 {
                return Ok(unchanged());
            }
            let budget = 100 * target.max(1) + 1000;
            let mut attempts = 0;
            while done < target && attempts < budget {
                attempts += 1;
                let i = rng.gen_range(0..m);
                let j = rng.gen_range(0..m);
                if i == j {
                    continue;
                }
                let (a, b) = pool.edges[i];
                let (mut c, mut d) = pool.edges[j];
                if rng.gen::<bool>() {
                    std::mem::swap(&mut c, &mut d);
                }
                if a == d || c == b || a == c || b == d || pool.has(a, d) || pool.has(c, b) {
                    continue;
                }
                pool.replace(i, a, d);
                pool.replace(j, c, b);
                done += 1;
            }
            if done == 0 {
                return Ok(unchanged());
            }
        }
    }
    Ok(Rewired {
        graph: Graph::from_edges(n, pool.edges)?,
        moves: done,
        no_rewiring_possible: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn er_extremes() {
        let mut rng = stream_rng(1, 0);
        assert_eq!(gen_er(100, 0.0, &mut rng).unwrap().m(), 0);
        assert_eq!(gen_er(100, 1.0, &mut rng).unwrap().m(), 4950);
        assert!(gen_er(10, 1.5, &mut rng).is_err());
    }

    #[test]
    fn er_edge_count_is_binomial() {
        let n = 3000;
        let p = 0.008;
        let pairs = (n * (n - 1) / 2) as f64;
        let mean = p * pairs;
        let sd = (pairs * p * (1.0 - p)).sqrt();
        for seed in 0..3 {
            let g = gen_er(n, p, &mut stream_rng(seed, 0)).unwrap();
            assert!((g.m() as f64 - mean).abs() < 4.0 * sd, "m = {}", g.m());
        }
    }

    #[test]
    fn er_pairs_are_uniform() {
        let mut hits = [0usize; 6];
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for seed in 0..4000 {
            let g = gen_er(4, 0.3, &mut stream_rng(seed, 0)).unwrap();
            for (h, &(u, v)) in hits.iter_mut().zip(&pairs) {
                *h += g.has_edge(u, v) as usize;
            }
        }
        for h in hits {
            assert!((h as f64 / 4000.0 - 0.3).abs() < 0.03, "{hits:?}");
        }
    }

    #[test]
    fn chung_lu_weights_are_valid() {
        let cl = chung_lu_weights(3000, 2.5, 24.0).unwrap();
        let total: f64 = cl.weights.iter().sum();
        assert!((total / 3000.0 - 24.0).abs() < 1e-9);
        assert!(cl.weights[0].powi(2) <= total * (1.0 + 1e-12));
        assert!(cl.offset >= 1);
        if cl.offset > 1 {
            let w = weights_with_offset(3000, 1.0 / 1.5, 24.0, cl.offset - 1);
            assert!(!feasible(&w, total));
        }
        assert!(cl.weights.windows(2).all(|x| x[0] >= x[1]));
        assert!(chung_lu_weights(100, 2.0, 5.0).is_err());
        assert!(chung_lu_weights(100, 2.5, 150.0).is_err());
    }

    #[test]
    fn chung_lu_flattens_with_large_exponent() {
        let spread = |gamma: f64| {
            let w = chung_lu_weights(2000, gamma, 10.0).unwrap().weights;
            w[0] / w[w.len() - 1]
        };
        assert!(spread(2.3) > spread(3.0));
        assert!(spread(3.0) > spread(50.0));
        assert!(spread(1e6) < 1.01);
    }

    #[test]
    fn chung_lu_mean_degree() {
        let g = gen_chung_lu(6000, 2.5, 12.0, &mut stream_rng(3, 0)).unwrap();
        let mean = 2.0 * g.m() as f64 / 6000.0;
        assert!((mean / 12.0 - 1.0).abs() < 0.1, "mean degree {mean}");
    }

    #[test]
    fn chung_lu_matches_pair_probabilities() {
        let w = chung_lu_weights(6, 2.5, 2.0).unwrap().weights;
        let total: f64 = w.iter().sum();
        let trials = 6000;
        let mut hits = [[0usize; 6]; 6];
        for seed in 0..trials {
            let g = gen_chung_lu(6, 2.5, 2.0, &mut stream_rng(seed, 9)).unwrap();
            for (u, v) in g.edges() {
                hits[u][v] += 1;
            }
        }
        for u in 0..6 {
            for v in u + 1..6 {
                let p = (w[u] * w[v] / total).min(1.0);
                let f = hits[u][v] as f64 / trials as f64;
                assert!((f - p).abs() < 0.03, "pair ({u},{v}): {f} vs {p}");
            }
        }
    }

    #[test]
    fn clique_injection() {
        let mut rng = stream_rng(5, 0);
        let g = gen_er(100, 0.01, &mut rng).unwrap();
        let (h, planted) = inject_clique(&g, 10, &mut rng).unwrap();
        assert_eq!(planted.len(), 10);
        assert_eq!(h.count_edges_within(&planted).unwrap(), 45);
        assert!(g.edges().all(|(u, v)| h.has_edge(u, v)));
        let (full, _) = inject_clique(&g, 100, &mut rng).unwrap();
        assert_eq!(full.m(), 4950);
        let (same, one) = inject_clique(&g, 1, &mut rng).unwrap();
        assert_eq!(same, g);
        assert_eq!(one.len(), 1);
        assert!(inject_clique(&g, 101, &mut rng).is_err());
    }

    #[test]
    fn snowball_samples_are_connected() {
        let g = gen_er(400, 0.02, &mut stream_rng(8, 0)).unwrap();
        for seed in 0..30 {
            let s = snowball_sample(&g, 50, 0.3, &mut stream_rng(seed, 1)).unwrap();
            if !s.truncated {
                assert_eq!(s.nodes.len(), 50);
                assert_eq!(crate::graph::component_count_within(&g, &s.nodes), 1);
            }
        }
        let one = snowball_sample(&g, 1, 0.5, &mut stream_rng(0, 0)).unwrap();
        assert_eq!(one.nodes.len(), 1);
    }

    #[test]
    fn snowball_truncates_small_components() {
        let g = Graph::complete(5).disjoint_union(&Graph::complete(5));
        let s = snowball_sample(&g, 8, 1.0, &mut stream_rng(2, 0)).unwrap();
        assert!(s.truncated);
        assert_eq!(s.nodes.len(), 5);
        assert!(snowball_sample(&g, 3, 0.0, &mut stream_rng(2, 0)).is_err());
    }

    #[test]
    fn full_probability_snowball_is_a_ball() {
        let g = Graph::path(30);
        let s = snowball_sample(&g, 10, 1.0, &mut stream_rng(4, 0)).unwrap();
        assert_eq!(s.nodes.len(), 10);
        assert_eq!(crate::graph::component_count_within(&g, &s.nodes), 1);
    }

    #[test]
    fn rewiring_conserves_counts() {
        let g = gen_er(20, 0.3, &mut stream_rng(1, 0)).unwrap();
        for mode in [RewireMode::Uniform, RewireMode::DegreePreserving] {
            let opts = RewireOptions { moves: None, mode };
            let r = rewire(&g, opts, &mut stream_rng(2, 0)).unwrap();
            assert!(!r.no_rewiring_possible);
            assert_eq!(r.graph.n(), g.n());
            assert_eq!(r.graph.m(), g.m());
            assert_ne!(r.graph, g);
            if mode == RewireMode::DegreePreserving {
                for v in 0..g.n() {
                    assert_eq!(r.graph.degree(v), g.degree(v));
                }
            } else {
                assert_eq!(r.moves, 10 * g.m());
            }
        }
    }

    #[test]
    fn complete_graph_cannot_be_rewired() {
        let g = Graph::complete(6);
        let r = rewire(&g, RewireOptions::default(), &mut stream_rng(0, 0)).unwrap();
        assert!(r.no_rewiring_possible);
        assert_eq!(r.graph, g);
        assert!(rewire(&Graph::empty(4), RewireOptions::default(), &mut stream_rng(0, 0))
            .unwrap()
            .no_rewiring_possible);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_chung_lu(500, 2.5, 8.0, &mut stream_rng(6, 0)).unwrap();
        let b = gen_chung_lu(500, 2.5, 8.0, &mut stream_rng(6, 0)).unwrap();
        assert_eq!(a, b);
        let r1 = rewire(&a, RewireOptions::default(), &mut stream_rng(1, 1)).unwrap();
        let r2 = rewire(&a, RewireOptions::default(), &mut stream_rng(1, 1)).unwrap();
        assert_eq!(r1, r2);
    }
}
