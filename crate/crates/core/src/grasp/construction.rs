//! Randomized greedy construction with a restricted candidate list.

use rand::Rng;

use super::working::{score_extensions, Working};
use super::{GraspConfig, GraspContext};
use crate::graph::{Graph, NodeSet};
use crate::spectral::SubsetSpectrum;

/// Threshold of the restricted candidate list for scores in `[lo, hi]`.
fn threshold(lo: f64, hi: f64, beta: f64) -> f64 {
    hi.min(lo + beta * (hi - lo))
}

fn draw_beta<R: Rng>(cfg: &GraspConfig, rng: &mut R) -> f64 {
    let (lo, hi) = cfg.beta;
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// First vertex, scored by triangle-to-degree ratio.
fn first_pick<R: Rng>(ctx: &GraspContext, cfg: &GraspConfig, rng: &mut R) -> usize {
    let scores = &ctx.first_scores;
    let hi = scores[ctx.order[0]];
    let eligible = if hi > 0.0 {
        ctx.order.partition_point(|&v| scores[v] > 0.0)
    } else {
        ctx.order.len()
    };
    let lo = scores[ctx.order[eligible - 1]];
    let cut = threshold(lo, hi, draw_beta(cfg, rng));
    let rcl = ctx.order[..eligible].partition_point(|&v| scores[v] >= cut);
    ctx.order[rng.gen_range(0..rcl.max(1))]
}

/// Builds a set of `cfg.s` vertices and returns it with its robustness.
pub(crate) fn construct<R: Rng>(
    g: &Graph,
    ctx: &GraspContext,
    cfg: &GraspConfig,
    rng: &mut R,
) -> (NodeSet, f64) {
    let mut w = Working::from_set(g, &cfg.seeds);
    if w.len() == 0 {
        w.add(first_pick(ctx, cfg, rng));
    }
    while w.len() < cfg.s {
        let frontier = w.frontier();
        if frontier.is_empty() {
            let next = ctx
                .order
                .iter()
                .copied()
                .find(|&v| !w.contains(v))
                .expect("fewer than s vertices outside the working set");
            w.add(next);
            continue;
        }
        let spectrum = SubsetSpectrum::from_adjacency(w.adjacency());
        let scored = score_extensions(&spectrum, &frontier);
        let (lo, hi) = scored
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, x)| (lo.min(x), hi.max(x)));
        let cut = threshold(lo, hi, draw_beta(cfg, rng));
        let rcl: Vec<usize> = scored.iter().filter(|&&(_, x)| x >= cut).map(|&(v, _)| v).collect();
        w.add(rcl[rng.gen_range(0..rcl.len())]);
    }
    let value = SubsetSpectrum::from_adjacency(w.adjacency())
        .robustness()
        .unwrap_or(0.0);
    (w.to_node_set(), value)
}
