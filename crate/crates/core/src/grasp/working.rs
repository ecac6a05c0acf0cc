//! Mutable vertex set with dense spectra, used by construction and local search.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;

use crate::graph::{Graph, NodeSet};
use crate::spectral::{log_sum_exp, SubsetSpectrum};

/// Vertex set whose adjacency rows follow insertion order.
#[derive(Clone, Debug)]
pub(crate) struct Working<'g> {
    g: &'g Graph,
    members: Vec<usize>,
    row: HashMap<usize, usize>,
}

impl<'g> Working<'g> {
    pub fn from_set(g: &'g Graph, s: &NodeSet) -> Working<'g> {
        let mut w = Working {
            g,
            members: Vec::with_capacity(s.len() + 1),
            row: HashMap::with_capacity(s.len() + 1),
        };
        for v in s.iter() {
            w.add(v);
        }
        w
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.row.contains_key(&v)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn add(&mut self, v: usize) {
        if !self.contains(v) {
            self.row.insert(v, self.members.len());
            self.members.push(v);
        }
    }

    pub fn remove(&mut self, v: usize) {
        if let Some(r) = self.row.remove(&v) {
            self.members.swap_remove(r);
            if r < self.members.len() {
                self.row.insert(self.members[r], r);
            }
        }
    }

    pub fn to_node_set(&self) -> NodeSet {
        let mut m = self.members.clone();
        m.sort_unstable();
        NodeSet::from_sorted(m)
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        let k = self.len();
        let mut a = DMatrix::zeros(k, k);
        for (r, &u) in self.members.iter().enumerate() {
            if self.g.degree(u) <= 4 * k {
                for &w in self.g.neighbors(u) {
                    if let Some(&c) = self.row.get(&w) {
                        a[(r, c)] = 1.0;
                    }
                }
            } else {
                for (c, &w) in self.members.iter().enumerate() {
                    if self.g.has_edge(u, w) {
                        a[(r, c)] = 1.0;
                    }
                }
            }
        }
        a
    }

    /// Candidate vertices `N(S) \ S` with the rows of their neighbours in `S`.
    pub fn frontier(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (r, &u) in self.members.iter().enumerate() {
            for &w in self.g.neighbors(u) {
                if !self.contains(w) {
                    out.entry(w).or_default().push(r);
                }
            }
        }
        out
    }
}

/// Natural connectivity from a full spectrum of `k` vertices.
pub(crate) fn robustness_of(values: &[f64]) -> f64 {
    log_sum_exp(values) - (values.len() as f64).ln()
}

/// Robustness of every distinct extension `S + v` over the frontier, in
/// ascending vertex order.
pub(crate) fn score_extensions(
    spectrum: &SubsetSpectrum,
    frontier: &BTreeMap<usize, Vec<usize>>,
) -> Vec<(usize, f64)> {
    let mut memo: HashMap<&[usize], f64> = HashMap::new();
    frontier
        .iter()
        .map(|(&v, pattern)| {
            let value = *memo
                .entry(pattern.as_slice())
                .or_insert_with(|| spectrum.robustness_with(pattern));
            (v, value)
        })
        .collect()
}

/// Component count of the subgraph with adjacency `a`, skipping row `skip`.
pub(crate) fn components_without(a: &DMatrix<f64>, skip: Option<usize>) -> usize {
    let k = a.nrows();
    let mut seen = vec![false; k];
    if let Some(s) = skip {
        seen[s] = true;
    }
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if !seen[j] && a[(i, j)] != 0.0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    count
}
