use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{bail, Result};

use rls_core::baselines::{charikar_peel, oqc_greedy_peel, oqc_local_search};
use rls_core::eval::EvalReport;

use crate::args::{BaselineAlgo, BaselineArgs};
use crate::output::{digest, load_graph, load_nodes, with_suffix, write_csv, write_json, write_labels, write_manifest, Summary};

pub fn run(a: &BaselineArgs, json: bool) -> Result<()> {
    let start = Instant::now();
    let c = &a.common;
    let graph = load_graph(&c.input, c.lcc)?;
    let g = &graph.graph;
    let mut inputs = BTreeMap::from([("input".to_string(), digest(&c.input)?)]);
    let planted = match &c.planted {
        Some(p) => {
            inputs.insert("planted".into(), digest(p)?);
            Some(load_nodes(&graph, p)?)
        }
        None => None,
    };
    if a.seed_vertex.is_some() && a.algo != BaselineAlgo::OqcLs {
        bail!("--seed-vertex applies to --algo oqc-ls");
    }
    if a.size.is_some() && a.algo == BaselineAlgo::OqcLs {
        bail!("--size applies to the peeling baselines");
    }
    let result = match a.algo {
        BaselineAlgo::Charikar => charikar_peel(g, a.size)?,
        BaselineAlgo::OqcGreedy => oqc_greedy_peel(g, a.alpha, a.size)?,
        BaselineAlgo::OqcLs => {
            let seed = match a.seed_vertex {
                Some(label) => Some(graph.nodes_from_labels(&[label])?.members()[0]),
                None => None,
            };
            oqc_local_search(g, a.alpha, seed, a.max_sweeps)?
        }
    };
    let mut report = EvalReport::evaluate(g, c.input.display().to_string(), result.algorithm, &result.nodes, a.eigs, planted.as_ref())?;
    report.seconds = (!c.omit_timing).then(|| start.elapsed().as_secs_f64());
    let summary = Summary::new(1, &graph, &result);

    write_labels(&with_suffix(&c.out, "nodes"), &summary.nodes)?;
    write_csv(&with_suffix(&c.out, "report.csv"), std::slice::from_ref(&report))?;
    write_json(&with_suffix(&c.out, "diag.json"), &serde_json::json!({ "results": [&summary] }))?;
    write_manifest(&c.out, "baseline", a, &inputs)?;

    if json {
        println!("{}", serde_json::json!({ "results": [&summary], "reports": [&report] }));
    } else {
        println!("{}", summary.line());
    }
    Ok(())
}
