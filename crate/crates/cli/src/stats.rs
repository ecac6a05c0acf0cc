use anyhow::Result;

use rls_core::graph::NodeSet;
use rls_core::spectral::subgraph_objective;

use crate::args::StatsArgs;
use crate::output::load_graph;

pub fn run(a: &StatsArgs, json: bool) -> Result<()> {
    let graph = load_graph(&a.input, a.lcc)?;
    let g = &graph.graph;
    let lambda = subgraph_objective(g, &NodeSet::full(g.n()), a.eigs)?;
    let density = g.edge_density();
    if json {
        println!(
            "{}",
            serde_json::json!({ "n": g.n(), "m": g.m(), "edge_density": density, "lambda": lambda.value, "t_used": lambda.t_used })
        );
    } else {
        println!("n={} m={} density={:.4} lambda={:.4}", g.n(), g.m(), density, lambda.value);
    }
    Ok(())
}
