use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::spectral::{clique_robustness, exact_robustness};

fn k_plus_pendant(k: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = Graph::complete(k).edges().collect();
    edges.push((0, k));
    Graph::from_edges(k + 1, edges).unwrap()
}

fn set(v: &[usize], n: usize) -> NodeSet {
    NodeSet::new(v.to_vec(), n).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen::<f64>() < p)
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

fn planted(n: usize, p: f64, k: usize, seed: u64) -> (Graph, NodeSet) {
    let clique = NodeSet::new((0..k).map(|i| (i * 7 + 3) % n).collect(), n).unwrap();
    (random_graph(n, p, seed).with_clique(&clique).unwrap(), clique)
}

fn robustness(g: &Graph, s: &NodeSet) -> f64 {
    exact_robustness(&g.induced_subgraph(s).unwrap()).unwrap()
}

#[test]
fn k5_pendant_finds_clique() {
    let g = k_plus_pendant(5);
    let mut cfg = GraspConfig::new(5);
    cfg.t_max = 10;
    for mode in [TriangleMode::Approximate, TriangleMode::Exact] {
        cfg.triangles = mode;
        let out = grasp_rls(&g, &cfg).unwrap();
        assert_eq!(out.result.nodes.members(), &[0, 1, 2, 3, 4]);
        assert!(close(out.result.score.value, clique_robustness(5).unwrap().value));
        assert_eq!(out.diagnostics.len(), 10);
        assert!(!out.result.multi_component);
    }
}

#[test]
fn whole_clique_is_returned() {
    for s in [1, 2, 6] {
        let g = Graph::complete(s);
        let out = grasp_rls(&g, &GraspConfig::new(s)).unwrap();
        assert_eq!(out.result.nodes, NodeSet::full(s));
        assert!(close(out.result.score.value, clique_robustness(s).unwrap().value));
    }
}

#[test]
fn pure_greedy_construction_stays_in_clique() {
    let g = k_plus_pendant(5);
    let mut cfg = GraspConfig::new(3);
    cfg.beta = (1.0, 1.0);
    let k5 = NodeSet::full(5);
    for seed in 0..20 {
        let mut rng = stream_rng(seed, 0);
        let s = grasp_construction(&g, &cfg, &mut rng).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.is_subset_of(&k5), "{s:?}");
    }
}

#[test]
fn isolated_vertex_is_never_picked_first() {
    let g = Graph::complete(3).disjoint_union(&Graph::empty(1));
    let mut cfg = GraspConfig::new(1);
    cfg.beta = (0.0, 0.0);
    cfg.triangles = TriangleMode::Exact;
    for seed in 0..50 {
        let s = grasp_construction(&g, &cfg, &mut stream_rng(seed, 0)).unwrap();
        assert!(!s.contains(3));
    }
    let isolates = Graph::empty(4);
    let s = grasp_construction(&isolates, &cfg, &mut stream_rng(0, 0)).unwrap();
    assert_eq!(s.len(), 1);
}

#[test]
fn construction_is_deterministic() {
    let g = random_graph(60, 0.15, 5);
    let cfg = GraspConfig::new(8);
    let a = grasp_construction(&g, &cfg, &mut stream_rng(11, 3)).unwrap();
    let b = grasp_construction(&g, &cfg, &mut stream_rng(11, 3)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 8);
}

#[test]
fn exhausted_component_restarts_elsewhere() {
    let g = Graph::complete(3).disjoint_union(&Graph::complete(3));
    let mut cfg = GraspConfig::new(4);
    cfg.triangles = TriangleMode::Exact;
    let out = grasp_rls(&g, &cfg).unwrap();
    assert_eq!(out.result.nodes.len(), 4);
    assert!(out.result.multi_component);
}

#[test]
fn planted_clique_survives_local_search() {
    let (g, clique) = planted(80, 0.1, 10, 2);
    let cfg = GraspConfig::new(10);
    assert_eq!(grasp_local_search(&g, &clique, &cfg).unwrap(), clique);
}

#[test]
fn path_start_improves_to_induced_path() {
    let g = Graph::path(4);
    let cfg = GraspConfig::new(3);
    let start = set(&[0, 1, 3], 4);
    let e = std::f64::consts::E;
    assert!((robustness(&g, &start) - ((e + 1.0 / e + 1.0) / 3.0).ln()).abs() < 1e-12);
    let out = grasp_local_search(&g, &start, &cfg).unwrap();
    assert!(out == set(&[0, 1, 2], 4) || out == set(&[1, 2, 3], 4), "{out:?}");
    assert!((robustness(&g, &out) - 0.5797).abs() < 5e-5);
}

#[test]
fn local_search_moves_never_lower_the_objective() {
    for seed in 0..15 {
        let g = random_graph(30, 0.2, seed);
        let s = 5 + (seed as usize % 4);
        let cfg = GraspConfig::new(s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
        let mut members: Vec<usize> = (0..30).collect();
        for i in 0..s {
            let j = rng.gen_range(i..30);
            members.swap(i, j);
        }
        let start = set(&members[..s], 30);
        let found = local_search::search(&g, &start, &cfg, false);
        for w in found.history.windows(2) {
            assert!(w[1] >= w[0] - 1e-12 * w[0].abs().max(1.0), "{:?}", found.history);
        }
        assert_eq!(found.nodes.len(), s);
        assert!(found.value >= robustness(&g, &start) - 1e-12);
        assert!((found.value - robustness(&g, &found.nodes)).abs() < 1e-10);
    }
}

#[test]
fn connected_results_when_disconnecting_deletions_are_rejected() {
    for seed in 0..5 {
        let g = random_graph(40, 0.12, seed);
        let largest = g.largest_component();
        if largest.len() < 8 {
            continue;
        }
        let mut cfg = GraspConfig::new(6);
        cfg.t_max = 8;
        cfg.seed = seed;
        let out = grasp_rls(&g, &cfg).unwrap();
        assert_eq!(component_count_within(&g, &out.result.nodes), 1);
    }
}

#[test]
fn krls_with_one_matches_rls() {
    let g = random_graph(50, 0.15, 9);
    let mut cfg = GraspConfig::new(6);
    cfg.t_max = 12;
    cfg.seed = 4;
    let best = grasp_rls(&g, &cfg).unwrap();
    let top = grasp_krls(&g, &cfg, 1).unwrap();
    assert_eq!(top.top.items.len(), 1);
    assert_eq!(top.top.items[0].result.nodes, best.result.nodes);
    assert_eq!(top.top.items[0].result.score, best.result.score);
}

#[test]
fn krls_results_are_distinct_and_ordered() {
    let g = random_graph(50, 0.15, 9);
    let mut cfg = GraspConfig::new(6);
    cfg.t_max = 20;
    let top = grasp_krls(&g, &cfg, 4).unwrap().top;
    for (i, a) in top.items.iter().enumerate() {
        for b in &top.items[i + 1..] {
            assert_ne!(a.result.nodes, b.result.nodes);
            assert!(a.result.score.value >= b.result.score.value);
        }
    }
    cfg.max_overlap = Some(0.0);
    let spread = grasp_krls(&g, &cfg, 4).unwrap().top;
    for (i, a) in spread.items.iter().enumerate() {
        for b in &spread.items[i + 1..] {
            assert_eq!(a.result.nodes.intersection_len(&b.result.nodes), 0);
        }
    }
    let two_cliques = Graph::complete(4).disjoint_union(&Graph::complete(4));
    let mut cfg = GraspConfig::new(4);
    cfg.t_max = 5;
    let few = grasp_krls(&two_cliques, &cfg, 5).unwrap().top;
    assert!(few.items.len() < 5);
    assert!(few.fewer_than_requested());
    assert!(grasp_krls(&two_cliques, &cfg, 6).is_err());
}

#[test]
fn seeded_run_recovers_planted_clique() {
    let (g, clique) = planted(200, 0.05, 30, 3);
    let mut cfg = GraspConfig::new(30);
    cfg.t_max = 4;
    let m = clique.members();
    cfg.seeds = set(&[m[4], m[17]], 200);
    let out = grasp_seeded(&g, &cfg).unwrap();
    assert_eq!(out.result.nodes, clique);
    assert_eq!(out.result.algorithm, Algorithm::GraspSeeded);
}

#[test]
fn seeds_are_never_dropped() {
    let g = k_plus_pendant(6);
    let mut cfg = GraspConfig::new(6);
    cfg.seeds = set(&[6], 7);
    let out = grasp_seeded(&g, &cfg).unwrap();
    assert!(out.result.nodes.contains(6));
    assert_eq!(out.result.nodes.len(), 6);
}

#[test]
fn rgs_finds_k8() {
    let g = k_plus_pendant(8);
    let mut cfg = GraspConfig::new(3);
    cfg.t_max = 10;
    let out = grasp_rgs(&g, &cfg).unwrap();
    assert_eq!(out.result.nodes, NodeSet::full(8));
    assert_eq!(out.result.algorithm, Algorithm::GraspRgs);
}

#[test]
fn argument_errors() {
    let g = Graph::complete(4);
    assert!(grasp_rls(&g, &GraspConfig::new(5)).is_err());
    assert!(grasp_rls(&g, &GraspConfig::new(0)).is_err());
    let mut cfg = GraspConfig::new(2);
    cfg.beta = (0.9, 0.5);
    assert!(grasp_rls(&g, &cfg).is_err());
    let mut cfg = GraspConfig::new(2);
    cfg.t_max = 0;
    assert!(grasp_rls(&g, &cfg).is_err());
    let mut cfg = GraspConfig::new(1);
    cfg.seeds = set(&[0, 1], 4);
    assert!(grasp_seeded(&g, &cfg).is_err());
    assert!(grasp_local_search(&g, &set(&[0, 1], 4), &GraspConfig::new(3)).is_err());
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let g = random_graph(70, 0.12, 21);
    let mut cfg = GraspConfig::new(7);
    cfg.t_max = 16;
    cfg.seed = 77;
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| grasp_rls(&g, &cfg).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a.result, b.result);
    let strip = |d: &[IterationDiagnostics]| {
        d.iter()
            .map(|x| (x.iteration, x.construction_lambda, x.final_lambda, x.size))
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a.diagnostics), strip(&b.diagnostics));
}
