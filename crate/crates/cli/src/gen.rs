use std::collections::BTreeMap;

use anyhow::{bail, Result};

use rls_core::graph::write_edge_list;
use rls_core::rng::stream_rng;
use rls_core::synth::{gen_chung_lu, gen_er, inject_clique};

use crate::args::{GenArgs, Model};
use crate::output::{with_suffix, write_labels, write_manifest, write_text};

pub fn run(a: &GenArgs, json: bool) -> Result<()> {
    let mut rng = stream_rng(a.seed, 0);
    let g = match a.model {
        Model::Er => {
            let Some(p) = a.p else { bail!("--model er needs --p") };
            gen_er(a.n, p, &mut rng)?
        }
        Model::ChungLu => {
            let (Some(gamma), Some(avg)) = (a.gamma, a.avg_deg) else {
                bail!("--model chung-lu needs --gamma and --avg-deg")
            };
            gen_chung_lu(a.n, gamma, avg, &mut rng)?
        }
    };
    let (g, planted) = match a.inject_clique {
        Some(s) => {
            let (g, p) = inject_clique(&g, s, &mut rng)?;
            (g, Some(p))
        }
        None => (g, None),
    };

    let edges_path = with_suffix(&a.out, "edges");
    let mut text = format!("# vertices {} edges {}\n", g.n(), g.m());
    let mut buf = Vec::new();
    write_edge_list(&g, None, &mut buf)?;
    text.push_str(&String::from_utf8(buf)?);
    write_text(&edges_path, &text)?;
    let planted_path = with_suffix(&a.out, "planted");
    if let Some(p) = &planted {
        let labels: Vec<u64> = p.iter().map(|v| v as u64).collect();
        write_labels(&planted_path, &labels)?;
    }
    write_manifest(&a.out, "gen", a, &BTreeMap::new())?;

    if json {
        println!(
            "{}",
            serde_json::json!({
                "n": g.n(),
                "m": g.m(),
                "edges": edges_path,
                "planted": planted.as_ref().map(|_| &planted_path),
            })
        );
    } else {
        println!("n={} m={} edges={}", g.n(), g.m(), edges_path.display());
    }
    Ok(())
}
