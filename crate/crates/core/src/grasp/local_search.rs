//! Swap-based local search: delete the best member, then add the best
//! neighbours, until neither move is accepted.

use std::collections::HashSet;

use nalgebra::DMatrix;

use super::working::{components_without, robustness_of, score_extensions, Working};
use super::GraspConfig;
use crate::graph::{Graph, NodeSet};
use crate::spectral::{symmetric_eigenvalues, SubsetSpectrum};

/// Upper bound on accepted moves in one call.
const MOVE_CAP: usize = 50_000;

fn tolerance(x: f64) -> f64 {
    1e-12 * x.abs().max(1.0)
}

struct State<'g> {
    w: Working<'g>,
    a: DMatrix<f64>,
    spectrum: SubsetSpectrum,
    value: f64,
}

impl<'g> State<'g> {
    fn new(w: Working<'g>) -> State<'g> {
        let a = w.adjacency();
        let spectrum = SubsetSpectrum::from_adjacency(a.clone());
        let value = spectrum.robustness().unwrap_or(f64::NEG_INFINITY);
        State { w, a, spectrum, value }
    }

    fn add(self, v: usize) -> State<'g> {
        let mut w = self.w;
        w.add(v);
        State::new(w)
    }

    fn remove(self, v: usize) -> State<'g> {
        let mut w = self.w;
        w.remove(v);
        State::new(w)
    }

    /// Robustness after deleting each unprotected member, best first with
    /// ties to the smallest vertex id.
    fn deletions(&self, protected: &NodeSet) -> Vec<(f64, usize, usize)> {
        let mut out: Vec<(f64, usize, usize)> = self
            .w
            .members()
            .iter()
            .enumerate()
            .filter(|&(_, &v)| !protected.contains(v))
            .map(|(r, &v)| {
                let sub = self.a.clone().remove_row(r).remove_column(r);
                let values = symmetric_eigenvalues(sub);
                (robustness_of(&values), v, r)
            })
            .collect();
        out.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
        out
    }

    /// Best extension by one frontier vertex, ties to the smallest id.
    fn best_addition(&self) -> Option<(usize, f64)> {
        let frontier = self.w.frontier();
        score_extensions(&self.spectrum, &frontier)
            .into_iter()
            .fold(None, |best, (v, x)| match best {
                Some((_, bx)) if bx >= x => best,
                _ => Some((v, x)),
            })
    }
}

/// Improves `s0` by deletions and additions. With `any_size` the size cap on
/// additions is lifted and the best set of any size is kept; otherwise the
/// best set of exactly `cfg.s` vertices is kept.
pub(crate) struct Searched {
    pub nodes: NodeSet,
    pub value: f64,
    /// Robustness of the working set after every accepted move.
    #[cfg_attr(not(test), allow(dead_code))]
    pub history: Vec<f64>,
}

pub(crate) fn search(g: &Graph, s0: &NodeSet, cfg: &GraspConfig, any_size: bool) -> Searched {
    let mut state = State::new(Working::from_set(g, s0));
    let mut best = (s0.clone(), state.value);
    let mut equal_taken: HashSet<NodeSet> = HashSet::new();
    let mut history = vec![state.value];

    let record = |state: &State, best: &mut (NodeSet, f64)| {
        if (any_size || state.w.len() == cfg.s) && state.value > best.1 {
            *best = (state.w.to_node_set(), state.value);
        }
    };

    while history.len() <= MOVE_CAP {
        let mut deleted = false;
        if state.w.len() > 1 {
            let tol = tolerance(state.value);
            let base = components_without(&state.a, None);
            let mut pick = None;
            for (x, v, r) in state.deletions(&cfg.seeds) {
                if x < state.value - tol {
                    break;
                }
                if !cfg.allow_disconnect_on_delete && components_without(&state.a, Some(r)) > base {
                    continue;
                }
                if x <= state.value + tol && !equal_taken.insert(state.w.to_node_set()) {
                    break;
                }
                pick = Some(v);
                break;
            }
            if let Some(v) = pick {
                state = state.remove(v);
                record(&state, &mut best);
                deleted = true;
                history.push(state.value);
            }
        }

        let mut added = false;
        while (any_size || state.w.len() <= cfg.s) && history.len() <= MOVE_CAP {
            match state.best_addition() {
                Some((v, x)) if x > state.value + tolerance(state.value) => {
                    state = state.add(v);
                    record(&state, &mut best);
                    added = true;
                    history.push(state.value);
                }
                _ => break,
            }
        }

        if !(deleted || added) {
            break;
        }
    }
    Searched {
        nodes: best.0,
        value: best.1,
        history,
    }
}
