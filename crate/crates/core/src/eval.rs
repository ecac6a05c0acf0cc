//! Metrics, planted-recovery scoring, the exhaustive oracle, rewiring
//! significance tests, scaling probes and report serialization.

use std::io::Write;
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::DensityObjective;
use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeSet};
use crate::grasp::{grasp_rls, GraspConfig};
use crate::greedy::{greedy_rls, GreedyConfig};
use crate::result::{Algorithm, SubgraphResult};
use crate::rng::stream_rng;
use crate::spectral::{exact_robustness, log_sum_exp, subgraph_objective, symmetric_eigenvalues, RobustnessScore};
use crate::synth::{rewire, RewireOptions};

/// Precision and recall of `found` against a planted set.
pub fn score_against_planted(found: &NodeSet, planted: &NodeSet) -> Result<(f64, f64)> {
    if found.is_empty() || planted.is_empty() {
        return Err(invalid("precision and recall need nonempty sets"));
    }
    let hit = found.intersection_len(planted) as f64;
    Ok((hit / found.len() as f64, hit / planted.len() as f64))
}

/// `e[S] / C(|S|, 2)`, zero below two vertices.
pub fn edge_density(g: &Graph, s: &NodeSet) -> Result<f64> {
    let k = s.len();
    if k < 2 {
        g.check_set(s)?;
        return Ok(0.0);
    }
    Ok(g.count_edges_within(s)? as f64 / (k * (k - 1) / 2) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleDensity {
    pub value: f64,
    /// Set when the set has fewer than three vertices and the value is 0 by
    /// definition.
    pub undersized: bool,
}

/// `t[S] / C(|S|, 3)` with exact triangle counting in `G[S]`.
pub fn triangle_density(g: &Graph, s: &NodeSet) -> Result<TriangleDensity> {
    let sub = g.induced_subgraph(s)?;
    let k = s.len();
    if k < 3 {
        return Ok(TriangleDensity {
            value: 0.0,
            undersized: true,
        });
    }
    let triples = (k * (k - 1) * (k - 2) / 6) as f64;
    Ok(TriangleDensity {
        value: sub.triangle_count() as f64 / triples,
        undersized: false,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Significance {
    pub p_value: f64,
    pub observed: f64,
    /// Replicates whose robustness strictly exceeds the observed value.
    pub exceeding: usize,
    pub replicates: usize,
    pub no_rewiring_possible: bool,
}

/// Empirical p-value of the robustness of `sub` against `replicates`
/// randomly rewired copies with the same vertex and edge counts. Replicate
/// `b` draws from stream `b` of `seed`, so the value is independent of the
/// number of worker threads.
pub fn significance_test(sub: &Graph, replicates: usize, seed: u64) -> Result<Significance> {
    significance_test_with(sub, replicates, seed, RewireOptions::default())
}

pub fn significance_test_with(
    sub: &Graph,
    replicates: usize,
    seed: u64,
    opts: RewireOptions,
) -> Result<Significance> {
    if replicates == 0 {
        return Err(invalid("at least one replicate is required"));
    }
    let observed = exact_robustness(sub)?;
    let probe = rewire(sub, RewireOptions { moves: Some(1), ..opts }, &mut stream_rng(seed, 0))?;
    if probe.no_rewiring_possible {
        return Ok(Significance {
            p_value: 0.0,
            observed,
            exceeding: 0,
            replicates,
            no_rewiring_possible: true,
        });
    }
    let above = (0..replicates)
        .into_par_iter()
        .map(|b| {
            let copy = rewire(sub, opts, &mut stream_rng(seed, b as u64))?;
            Ok((exact_robustness(&copy.graph)? > observed) as usize)
        })
        .collect::<Result<Vec<usize>>>()?;
    let exceeding: usize = above.iter().sum();
    Ok(Significance {
        p_value: exceeding as f64 / replicates as f64,
        observed,
        exceeding,
        replicates,
        no_rewiring_possible: false,
    })
}

/// Objective maximized by the exhaustive oracle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OracleObjective {
    Robustness,
    Density(DensityObjective),
}

/// Largest number of subsets the oracle will enumerate.
pub const ORACLE_LIMIT: f64 = 1e7;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Natural connectivity from a dense symmetric eigensolve of `G[members]`.
fn dense_robustness(g: &Graph, members: &[usize]) -> f64 {
    let k = members.len();
    let a = DMatrix::from_fn(k, k, |i, j| g.has_edge(members[i], members[j]) as u8 as f64);
    let values = symmetric_eigenvalues(a);
    log_sum_exp(&values) - (k as f64).ln()
}

/// Exhaustive best `s`-subset by `objective`; ties go to the
/// lexicographically first subset.
pub fn brute_force_best_subgraph(g: &Graph, s: usize, objective: OracleObjective) -> Result<SubgraphResult> {
    let n = g.n();
    if s == 0 || s > n {
        return Err(invalid(format!("subset size {s} must lie in 1..={n}")));
    }
    let count = binomial(n, s);
    if count > ORACLE_LIMIT {
        return Err(invalid(format!("{count:.0} subsets exceed the enumeration limit")));
    }
    let value_of = |members: &[usize]| -> f64 {
        match objective {
            OracleObjective::Robustness => dense_robustness(g, members),
            OracleObjective::Density(d) => {
                let mut e = 0;
                for (i, &u) in members.iter().enumerate() {
                    e += members[i + 1..].iter().filter(|&&v| g.has_edge(u, v)).count();
                }
                d.value(e, members.len())
            }
        }
    };
    let mut idx: Vec<usize> = (0..s).collect();
    let mut best = (value_of(&idx), idx.clone());
    while let Some(pos) = (0..s).rev().find(|&i| idx[i] < n - s + i) {
        idx[pos] += 1;
        for i in pos + 1..s {
            idx[i] = idx[i - 1] + 1;
        }
        let value = value_of(&idx);
        if value > best.0 + 1e-12 * best.0.abs().max(1.0) {
            best = (value, idx.clone());
        }
    }
    let nodes = NodeSet::new(best.1, n)?;
    let score = match objective {
        OracleObjective::Robustness => RobustnessScore { value: best.0, t_used: s },
        OracleObjective::Density(_) => RobustnessScore {
            value: dense_robustness(g, nodes.members()),
            t_used: s,
        },
    };
    Ok(SubgraphResult {
        multi_component: crate::graph::component_count_within(g, &nodes) > 1,
        nodes,
        score,
        algorithm: Algorithm::BruteForce,
        objective: best.0,
        trace: Vec::new(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Improvement {
    pub percent: f64,
    /// Set when the reference is zero and `percent` holds the plain difference.
    pub absolute: bool,
}

/// `100 (rs - ds) / |ds|`, or `rs - ds` when `ds` is zero.
pub fn relative_improvement(rs: RobustnessScore, ds: RobustnessScore) -> Improvement {
    if ds.value == 0.0 {
        Improvement {
            percent: rs.value - ds.value,
            absolute: true,
        }
    } else {
        Improvement {
            percent: 100.0 * (rs.value - ds.value) / ds.value.abs(),
            absolute: false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum ProbeAlgorithm {
    /// Mean wall time per iteration, excluding shared setup.
    Grasp(GraspConfig),
    /// Wall time of one full run.
    Greedy(GreedyConfig),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub m: usize,
    pub seconds: f64,
}

/// Times `algorithm` on each graph in turn.
pub fn scaling_probe(graphs: &[Graph], algorithm: &ProbeAlgorithm) -> Result<Vec<ScalingRow>> {
    graphs
        .iter()
        .map(|g| {
            let seconds = match algorithm {
                ProbeAlgorithm::Grasp(cfg) => {
                    let out = grasp_rls(g, cfg)?;
                    let total: f64 = out.diagnostics.iter().map(|d| d.seconds).sum();
                    total / out.diagnostics.len() as f64
                }
                ProbeAlgorithm::Greedy(cfg) => {
                    let start = Instant::now();
                    greedy_rls(g, cfg)?;
                    start.elapsed().as_secs_f64()
                }
            };
            Ok(ScalingRow { n: g.n(), m: g.m(), seconds })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than two
/// distinct positive points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Metrics of one result, all recomputed from its vertex set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub algorithm: Algorithm,
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub robustness: f64,
    pub edge_density: f64,
    pub triangle_density: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub p_value: Option<f64>,
    pub seconds: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    algo: &'a str,
    n: usize,
    m: usize,
    s: usize,
    lambda: f64,
    edge_density: f64,
    triangle_density: f64,
    precision: Option<f64>,
    recall: Option<f64>,
    p_value: Option<f64>,
    seconds: Option<f64>,
    seed: Option<u64>,
}

impl EvalReport {
    /// Robustness, densities and (given a planted set) precision and recall
    /// of `nodes`; `p_value`, `seconds` and `seed` start empty.
    pub fn evaluate(
        g: &Graph,
        graph: impl Into<String>,
        algorithm: Algorithm,
        nodes: &NodeSet,
        t: usize,
        planted: Option<&NodeSet>,
    ) -> Result<EvalReport> {
        let (precision, recall) = match planted {
            Some(p) => {
                let (a, b) = score_against_planted(nodes, p)?;
                (Some(a), Some(b))
            }
            None => (None, None),
        };
        Ok(EvalReport {
            algorithm,
            graph: graph.into(),
            n: g.n(),
            m: g.m(),
            s: nodes.len(),
            robustness: subgraph_objective(g, nodes, t)?.value,
            edge_density: edge_density(g, nodes)?,
            triangle_density: triangle_density(g, nodes)?.value,
            precision,
            recall,
            p_value: None,
            seconds: None,
            seed: None,
        })
    }

    fn csv_row(&self) -> CsvRow<'_> {
        CsvRow {
            algo: self.algorithm.name(),
            n: self.n,
            m: self.m,
            s: self.s,
            lambda: self.robustness,
            edge_density: self.edge_density,
            triangle_density: self.triangle_density,
            precision: self.precision,
            recall: self.recall,
            p_value: self.p_value,
            seconds: self.seconds,
            seed: self.seed,
        }
    }
}

/// CSV header shared by every report file.
pub const CSV_COLUMNS: [&str; 12] = [
    "algo",
    "n",
    "m",
    "s",
    "lambda",
    "edge_density",
    "triangle_density",
    "precision",
    "recall",
    "p_value",
    "seconds",
    "seed",
];

/// Writes one CSV row per report under the fixed header.
pub fn write_reports_csv<W: Write>(reports: &[EvalReport], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in reports {
        w.serialize(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_reports_json<W: Write>(reports: &[EvalReport], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, reports)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::clique_robustness;

    fn set(v: &[usize], n: usize) -> NodeSet {
        NodeSet::new(v.to_vec(), n).unwrap()
    }

    #[test]
    fn precision_recall() {
        let p = set(&[0, 1, 2], 10);
        assert_eq!(score_against_planted(&p, &p).unwrap(), (1.0, 1.0));
        let f = set(&[0, 1, 2, 3, 4, 5], 10);
        assert_eq!(score_against_planted(&f, &p).unwrap(), (0.5, 1.0));
        assert!(score_against_planted(&NodeSet::empty(), &p).is_err());
        let whole = NodeSet::full(3000);
        let planted = NodeSet::new((0..30).collect(), 3000).unwrap();
        let (prec, rec) = score_against_planted(&whole, &planted).unwrap();
        assert!((prec - 0.01).abs() < 1e-12 && rec == 1.0);
    }

    #[test]
    fn densities() {
        let k = Graph::complete(5);
        assert_eq!(triangle_density(&k, &NodeSet::full(5)).unwrap().value, 1.0);
        assert_eq!(edge_density(&k, &NodeSet::full(5)).unwrap(), 1.0);
        let c = Graph::cycle(6);
        assert_eq!(triangle_density(&c, &NodeSet::full(6)).unwrap().value, 0.0);
        let small = triangle_density(&k, &set(&[0, 1], 5)).unwrap();
        assert!(small.undersized && small.value == 0.0);
    }

    #[test]
    fn relative_improvements() {
        let r = |v| RobustnessScore { value: v, t_used: 1 };
        assert_eq!(relative_improvement(r(1.0), r(1.0)).percent, 0.0);
        assert!((relative_improvement(r(1.1), r(1.0)).percent - 10.0).abs() < 1e-9);
        assert!((relative_improvement(r(8.91), r(4.96)).percent - 79.6).abs() < 0.05);
        let z = relative_improvement(r(0.5), r(0.0));
        assert!(z.absolute && z.percent == 0.5);
    }

    #[test]
    fn oracle_examples() {
        let mut edges: Vec<(usize, usize)> = Graph::complete(5).edges().collect();
        edges.push((0, 5));
        let g = Graph::from_edges(6, edges).unwrap();
        let best = brute_force_best_subgraph(&g, 5, OracleObjective::Robustness).unwrap();
        assert_eq!(best.nodes, NodeSet::full(5));
        assert!((best.objective - clique_robustness(5).unwrap().value).abs() < 1e-12);
        let one = brute_force_best_subgraph(&g, 1, OracleObjective::Robustness).unwrap();
        assert_eq!(one.nodes.members(), &[0]);
        assert!(one.objective.abs() < 1e-12);
        let big = Graph::empty(60);
        assert!(brute_force_best_subgraph(&big, 10, OracleObjective::Robustness).is_err());
    }

    #[test]
    fn clique_significance_is_degenerate() {
        let s = significance_test(&Graph::complete(8), 50, 1).unwrap();
        assert!(s.no_rewiring_possible);
        assert_eq!(s.p_value, 0.0);
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = (1..6).map(|i| (i as f64, 3.0 * (i as f64).powf(1.5))).collect();
        assert!((loglog_slope(&pts).unwrap() - 1.5).abs() < 1e-12);
        assert!(loglog_slope(&[]).is_none());
        assert!(loglog_slope(&[(2.0, 1.0), (2.0, 3.0)]).is_none());
        assert!(scaling_probe(&[], &ProbeAlgorithm::Grasp(GraspConfig::new(3))).unwrap().is_empty());
    }

    #[test]
    fn csv_header_and_row() {
        let g = Graph::complete(4);
        let mut r = EvalReport::evaluate(&g, "k4", Algorithm::Charikar, &NodeSet::full(4), 50, None).unwrap();
        r.seed = Some(3);
        let mut buf = Vec::new();
        write_reports_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        let row = lines.next().unwrap();
        assert!(row.starts_with("charikar,4,6,4,"), "{row}");
        assert!(row.ends_with(",1.0,1.0,,,,,3"), "{row}");
    }
}
