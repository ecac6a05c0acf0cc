use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{bail, Result};
use serde::Serialize;

use rls_core::eval::EvalReport;
use rls_core::graph::NodeSet;
use rls_core::grasp::{grasp_krls, grasp_rgs, grasp_rls, grasp_seeded, GraspConfig, IterationDiagnostics, TriangleMode};
use rls_core::greedy::{greedy_krls, greedy_rgs, greedy_rls, greedy_seeded, DisjointMode, GreedyConfig, Schedule};
use rls_core::result::{SubgraphResult, TracePoint};

use crate::args::{Disjoint, MineAlgo, MineArgs};
use crate::output::{digest, load_graph, load_nodes, with_suffix, write_csv, write_json, write_labels, write_manifest, Summary};

#[derive(Serialize)]
pub struct DiagIteration {
    pub iteration: usize,
    pub construction_lambda: f64,
    pub final_lambda: f64,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl DiagIteration {
    pub fn new(d: &IterationDiagnostics, omit_timing: bool) -> DiagIteration {
        DiagIteration {
            iteration: d.iteration,
            construction_lambda: d.construction_lambda,
            final_lambda: d.final_lambda,
            size: d.size,
            seconds: (!omit_timing).then_some(d.seconds),
        }
    }
}

#[derive(Serialize)]
struct Diagnostics<'a> {
    results: &'a [Summary],
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<&'a str>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    iterations: Vec<DiagIteration>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    trace: Vec<TracePoint>,
}

struct Mined {
    results: Vec<SubgraphResult>,
    iterations: Vec<IterationDiagnostics>,
    requested: usize,
}

fn mine_grasp(a: &MineArgs, g: &rls_core::graph::Graph, seeds: NodeSet) -> Result<Mined> {
    if a.disjoint.is_some() {
        bail!("--disjoint applies to --algo greedy; use --max-overlap with grasp");
    }
    if a.recompute_only {
        bail!("--recompute-only applies to --algo greedy");
    }
    let cfg = GraspConfig {
        s: a.size,
        t_max: a.tmax,
        beta: (a.beta_lo, a.beta_hi),
        seed: a.seed,
        t: a.eigs,
        seeds: seeds.clone(),
        allow_disconnect_on_delete: a.allow_disconnect,
        triangles: if a.exact_triangles { TriangleMode::Exact } else { TriangleMode::Approximate },
        max_overlap: a.max_overlap,
    };
    if let Some(k) = a.k {
        let out = grasp_krls(g, &cfg, k)?;
        return Ok(Mined {
            results: out.top.items.into_iter().map(|r| r.result).collect(),
            iterations: out.diagnostics,
            requested: k,
        });
    }
    let out = if a.rgs {
        grasp_rgs(g, &cfg)?
    } else if seeds.is_empty() {
        grasp_rls(g, &cfg)?
    } else {
        grasp_seeded(g, &cfg)?
    };
    Ok(Mined {
        results: vec![out.result],
        iterations: out.diagnostics,
        requested: 1,
    })
}

fn mine_greedy(a: &MineArgs, g: &rls_core::graph::Graph, seeds: NodeSet) -> Result<Mined> {
    if a.max_overlap.is_some() {
        bail!("--max-overlap applies to --algo grasp; use --disjoint with greedy");
    }
    let mut cfg = GreedyConfig::new(a.size);
    cfg.t = a.eigs;
    cfg.seeds = seeds.clone();
    if a.recompute_only {
        cfg.schedule = Schedule::RecomputeOnly;
    }
    let results = if let Some(k) = a.k {
        let mode = match a.disjoint.unwrap_or(Disjoint::Node) {
            Disjoint::Node => DisjointMode::Node,
            Disjoint::Edge => DisjointMode::Edge,
        };
        greedy_krls(g, &cfg, k, mode)?.items.into_iter().map(|r| r.result).collect()
    } else if a.rgs {
        vec![greedy_rgs(g, &cfg)?]
    } else if seeds.is_empty() {
        vec![greedy_rls(g, &cfg)?]
    } else {
        vec![greedy_seeded(g, &cfg)?]
    };
    Ok(Mined {
        results,
        iterations: Vec::new(),
        requested: a.k.unwrap_or(1),
    })
}

pub fn run(a: &MineArgs, json: bool) -> Result<()> {
    let start = Instant::now();
    let c = &a.common;
    let graph = load_graph(&c.input, c.lcc)?;
    let g = &graph.graph;
    let mut inputs = BTreeMap::from([("input".to_string(), digest(&c.input)?)]);
    let seeds = match &a.seeds {
        Some(p) => {
            inputs.insert("seeds".into(), digest(p)?);
            load_nodes(&graph, p)?
        }
        None => NodeSet::empty(),
    };
    let planted = match &c.planted {
        Some(p) => {
            inputs.insert("planted".into(), digest(p)?);
            Some(load_nodes(&graph, p)?)
        }
        None => None,
    };

    let mined = match a.algo {
        MineAlgo::Grasp => mine_grasp(a, g, seeds)?,
        MineAlgo::Greedy => mine_greedy(a, g, seeds)?,
    };
    if mined.results.is_empty() {
        bail!("no subgraph found");
    }
    let warning = (mined.results.len() < mined.requested).then(|| {
        format!("found {} distinct subgraphs, fewer than the {} requested", mined.results.len(), mined.requested)
    });
    let seconds = (!c.omit_timing).then(|| start.elapsed().as_secs_f64());

    let descriptor = c.input.display().to_string();
    let mut reports = Vec::new();
    let mut summaries = Vec::new();
    for (i, r) in mined.results.iter().enumerate() {
        let mut report = EvalReport::evaluate(g, descriptor.clone(), r.algorithm, &r.nodes, a.eigs, planted.as_ref())?;
        report.seconds = seconds;
        report.seed = Some(a.seed);
        reports.push(report);
        summaries.push(Summary::new(i + 1, &graph, r));
    }

    write_labels(&with_suffix(&c.out, "nodes"), &summaries[0].nodes)?;
    if summaries.len() > 1 {
        for s in &summaries {
            write_labels(&with_suffix(&c.out, &format!("rank{}.nodes", s.rank)), &s.nodes)?;
        }
    }
    write_csv(&with_suffix(&c.out, "report.csv"), &reports)?;
    let diagnostics = Diagnostics {
        results: &summaries,
        warning: warning.as_deref(),
        iterations: mined.iterations.iter().map(|d| DiagIteration::new(d, c.omit_timing)).collect(),
        trace: mined.results[0].trace.clone(),
    };
    write_json(&with_suffix(&c.out, "diag.json"), &diagnostics)?;
    write_manifest(&c.out, "mine", a, &inputs)?;

    if let Some(w) = &warning {
        eprintln!("warning: {w}");
    }
    if json {
        println!(
            "{}",
            serde_json::json!({ "results": summaries, "warning": warning, "reports": reports })
        );
    } else {
        for (s, r) in summaries.iter().zip(&reports) {
            let pr = match (r.precision, r.recall) {
                (Some(p), Some(q)) => format!(" precision={p:.4} recall={q:.4}"),
                _ => String::new(),
            };
            println!("{}{pr}", s.line());
        }
    }
    Ok(())
}
