use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use serde::Serialize;

use rls_core::baselines::{charikar_peel, oqc_greedy_peel};
use rls_core::eval::{
    loglog_slope, relative_improvement, scaling_probe, significance_test_with, EvalReport, ProbeAlgorithm,
};
use rls_core::graph::{Graph, ParsedGraph};
use rls_core::grasp::{grasp_rls, GraspConfig};
use rls_core::greedy::{greedy_rls, GreedyConfig};
use rls_core::result::SubgraphResult;
use rls_core::rng::stream_rng;
use rls_core::synth::{gen_chung_lu, gen_er, RewireMode, RewireOptions};

use crate::args::{EvalArgs, EvalMode, Model};
use crate::output::{digest, load_graph, load_nodes, with_suffix, write_csv, write_json, write_manifest, write_text};

fn need<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref().ok_or_else(|| anyhow!("this mode needs {flag}"))
}

fn load_input(a: &EvalArgs, inputs: &mut BTreeMap<String, String>) -> Result<ParsedGraph> {
    let path = need(&a.input, "--input")?;
    inputs.insert("input".into(), digest(path)?);
    load_graph(path, false)
}

pub fn run(a: &EvalArgs, json: bool) -> Result<()> {
    let mut inputs = BTreeMap::new();
    let value = match a.mode {
        EvalMode::Significance => significance(a, &mut inputs, json)?,
        EvalMode::Planted => planted(a, &mut inputs, json)?,
        EvalMode::Sweep => sweep(a, &mut inputs, json)?,
        EvalMode::Scaling => scaling(a, json)?,
    };
    if let Some(out) = &a.out {
        write_json(&with_suffix(out, "eval.json"), &value)?;
        write_manifest(out, "eval", a, &inputs)?;
    }
    if json {
        println!("{value}");
    }
    Ok(())
}

fn significance(a: &EvalArgs, inputs: &mut BTreeMap<String, String>, json: bool) -> Result<serde_json::Value> {
    let graph = load_input(a, inputs)?;
    let nodes_path = need(&a.nodes, "--nodes")?;
    inputs.insert("nodes".into(), digest(nodes_path)?);
    let nodes = load_nodes(&graph, nodes_path)?;
    let sub = graph.graph.induced_subgraph(&nodes)?;
    let opts = RewireOptions {
        moves: None,
        mode: if a.degree_preserving { RewireMode::DegreePreserving } else { RewireMode::Uniform },
    };
    let sig = significance_test_with(&sub, a.replicates, a.seed, opts)?;
    if !json {
        println!(
            "lambda={:.4} p_value={:.4} exceeding={}/{}{}",
            sig.observed,
            sig.p_value,
            sig.exceeding,
            sig.replicates,
            if sig.no_rewiring_possible { " (no rewiring possible)" } else { "" }
        );
    }
    Ok(serde_json::to_value(&sig)?)
}

fn planted(a: &EvalArgs, inputs: &mut BTreeMap<String, String>, json: bool) -> Result<serde_json::Value> {
    let graph = load_input(a, inputs)?;
    let nodes_path = need(&a.nodes, "--nodes")?;
    let planted_path = need(&a.planted, "--planted")?;
    inputs.insert("nodes".into(), digest(nodes_path)?);
    inputs.insert("planted".into(), digest(planted_path)?);
    let nodes = load_nodes(&graph, nodes_path)?;
    let truth = load_nodes(&graph, planted_path)?;
    let descriptor = need(&a.input, "--input")?.display().to_string();
    let report = EvalReport::evaluate(
        &graph.graph,
        descriptor,
        rls_core::result::Algorithm::BruteForce,
        &nodes,
        a.eigs,
        Some(&truth),
    )?;
    if let Some(out) = &a.out {
        write_csv(&with_suffix(out, "report.csv"), std::slice::from_ref(&report))?;
    }
    if !json {
        println!(
            "precision={:.4} recall={:.4} lambda={:.4}",
            report.precision.unwrap_or(0.0),
            report.recall.unwrap_or(0.0),
            report.robustness
        );
    }
    Ok(serde_json::to_value(&report)?)
}

#[derive(Serialize)]
struct SweepRow {
    s: usize,
    grasp: f64,
    greedy: f64,
    charikar: f64,
    oqc_greedy: f64,
    improvement_over_greedy: f64,
    improvement_over_charikar: f64,
    improvement_over_oqc_greedy: f64,
}

fn timed<F: FnOnce() -> rls_core::error::Result<SubgraphResult>>(f: F) -> Result<(SubgraphResult, f64)> {
    let start = Instant::now();
    let r = f()?;
    Ok((r, start.elapsed().as_secs_f64()))
}

fn sweep(a: &EvalArgs, inputs: &mut BTreeMap<String, String>, json: bool) -> Result<serde_json::Value> {
    if a.sizes.is_empty() {
        bail!("sweep mode needs --sizes");
    }
    let graph = load_input(a, inputs)?;
    let g = &graph.graph;
    let descriptor = need(&a.input, "--input")?.display().to_string();
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for &s in &a.sizes {
        let mut gcfg = GraspConfig::new(s);
        gcfg.t_max = a.tmax;
        gcfg.seed = a.seed;
        gcfg.t = a.eigs;
        let mut kcfg = GreedyConfig::new(s);
        kcfg.t = a.eigs;
        let runs = [
            timed(|| grasp_rls(g, &gcfg).map(|o| o.result))?,
            timed(|| greedy_rls(g, &kcfg))?,
            timed(|| charikar_peel(g, Some(s)))?,
            timed(|| oqc_greedy_peel(g, a.alpha, Some(s)))?,
        ];
        for (r, secs) in &runs {
            let mut report = EvalReport::evaluate(g, descriptor.clone(), r.algorithm, &r.nodes, a.eigs, None)?;
            report.seconds = (!a.omit_timing).then_some(*secs);
            report.seed = Some(a.seed);
            reports.push(report);
        }
        let score = |i: usize| runs[i].0.score;
        let row = SweepRow {
            s,
            grasp: score(0).value,
            greedy: score(1).value,
            charikar: score(2).value,
            oqc_greedy: score(3).value,
            improvement_over_greedy: relative_improvement(score(0), score(1)).percent,
            improvement_over_charikar: relative_improvement(score(0), score(2)).percent,
            improvement_over_oqc_greedy: relative_improvement(score(0), score(3)).percent,
        };
        if !json {
            println!(
                "s={} grasp={:.4} greedy={:.4} charikar={:.4} oqc-greedy={:.4}",
                s, row.grasp, row.greedy, row.charikar, row.oqc_greedy
            );
        }
        rows.push(row);
    }
    if let Some(out) = &a.out {
        write_csv(&with_suffix(out, "report.csv"), &reports)?;
    }
    Ok(serde_json::json!({ "rows": rows, "reports": reports }))
}

fn scaling(a: &EvalArgs, json: bool) -> Result<serde_json::Value> {
    if a.ns.is_empty() {
        bail!("scaling mode needs --ns");
    }
    let graphs = a
        .ns
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let mut rng = stream_rng(a.seed, i as u64);
            Ok(match a.model {
                Model::Er => gen_er(n, (a.avg_deg / (n.max(2) - 1) as f64).min(1.0), &mut rng)?,
                Model::ChungLu => gen_chung_lu(n, a.gamma, a.avg_deg, &mut rng)?,
            })
        })
        .collect::<Result<Vec<Graph>>>()?;
    let mut cfg = GraspConfig::new(a.size);
    cfg.t_max = a.tmax;
    cfg.seed = a.seed;
    cfg.t = a.eigs;
    let rows = scaling_probe(&graphs, &ProbeAlgorithm::Grasp(cfg))?;
    let slope = loglog_slope(&rows.iter().map(|r| (r.m as f64, r.seconds)).collect::<Vec<_>>());
    let mut table = String::from("n,m,seconds\n");
    for r in &rows {
        table.push_str(&format!("{},{},{}\n", r.n, r.m, r.seconds));
        if !json {
            println!("n={} m={} seconds_per_iteration={:.4}", r.n, r.m, r.seconds);
        }
    }
    if !json {
        match slope {
            Some(s) => println!("loglog_slope={s:.3}"),
            None => println!("loglog_slope=undefined"),
        }
    }
    if let Some(out) = &a.out {
        write_text(&with_suffix(out, "scaling.csv"), &table)?;
    }
    Ok(serde_json::json!({ "rows": rows, "slope": slope }))
}
