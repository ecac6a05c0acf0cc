//! Immutable sparse undirected graphs in compressed neighbor-list form,
//! plus the vertex-set types the miners work with.
//!
//! A [`Graph`] is never mutated after construction. Algorithms that "remove"
//! vertices track that through an [`ActiveSet`] mask or a [`NodeSet`], so a
//! single graph can be shared read-only across worker threads.

mod io;
mod triangles;

pub use io::{parse_edge_list, parse_node_list, write_edge_list, write_node_list, ParsedGraph};
pub use triangles::approx_local_triangles;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph stored as sorted adjacency lists (CSR layout).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Self-loops and duplicate edges are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut arcs = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u != v {
                arcs.push((u, v));
                arcs.push((v, u));
            }
        }
        arcs.sort_unstable();
        arcs.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &arcs {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = arcs.into_iter().map(|(_, v)| v).collect();
        Ok(Graph { offsets, targets })
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    pub fn complete(k: usize) -> Graph {
        let edges = (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v)));
        Graph::from_edges(k, edges).expect("ids in range")
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("ids in range")
    }

    pub fn cycle(n: usize) -> Graph {
        let edges = (0..n).map(|v| (v, (v + 1) % n));
        Graph::from_edges(n, edges).expect("ids in range")
    }

    /// Star with hub 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("ids in range")
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n();
        let edges = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + shift, v + shift)));
        Graph::from_edges(self.n() + other.n(), edges).expect("ids in range")
    }

    /// Copy of the graph with every edge between members of `s` added.
    pub fn with_clique(&self, s: &NodeSet) -> Result<Graph> {
        self.check_set(s)?;
        let m = s.members();
        let extra = (0..m.len()).flat_map(|i| (i + 1..m.len()).map(move |j| (m[i], m[j])));
        Graph::from_edges(self.n(), self.edges().chain(extra))
    }

    /// Copy of the graph with every edge between members of `s` deleted.
    pub fn without_edges_within(&self, s: &NodeSet) -> Result<Graph> {
        self.check_set(s)?;
        let edges = self
            .edges()
            .filter(|&(u, v)| !(s.contains(u) && s.contains(v)));
        Graph::from_edges(self.n(), edges)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edge density `m / C(n, 2)`; zero for graphs with fewer than two vertices.
    pub fn edge_density(&self) -> f64 {
        let n = self.n() as f64;
        if self.n() < 2 {
            0.0
        } else {
            self.m() as f64 / (n * (n - 1.0) / 2.0)
        }
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_set(&self, s: &NodeSet) -> Result<()> {
        match s.members().last() {
            Some(&v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    /// The subgraph induced by `s`; local id `i` is the `i`-th smallest member.
    pub fn induced_subgraph(&self, s: &NodeSet) -> Result<Graph> {
        self.check_set(s)?;
        let members = s.members();
        let mut offsets = Vec::with_capacity(members.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for &u in members {
            for &w in self.neighbors(u) {
                if let Ok(local) = members.binary_search(&w) {
                    targets.push(local);
                }
            }
            offsets.push(targets.len());
        }
        Ok(Graph { offsets, targets })
    }

    /// `e[S]`, the number of edges with both endpoints in `s`.
    pub fn count_edges_within(&self, s: &NodeSet) -> Result<usize> {
        self.check_set(s)?;
        let twice: usize = s
            .iter()
            .map(|u| sorted_intersection_len(self.neighbors(u), s.members()))
            .sum();
        Ok(twice / 2)
    }

    /// Number of edges between `v` and members of `s`.
    pub fn degree_into(&self, v: usize, s: &NodeSet) -> usize {
        sorted_intersection_len(self.neighbors(v), s.members())
    }

    /// Vertices adjacent to some member of `s`, excluding `s` itself.
    pub fn neighborhood(&self, s: &NodeSet) -> Result<NodeSet> {
        self.check_set(s)?;
        let mut out: Vec<usize> = s
            .iter()
            .flat_map(|u| self.neighbors(u).iter().copied())
            .filter(|&w| !s.contains(w))
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(NodeSet(out))
    }

    /// Connected-component label per vertex, numbered in order of smallest member.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        const UNSEEN: usize = usize::MAX;
        let mut label = vec![UNSEEN; self.n()];
        let mut count = 0;
        let mut stack = Vec::new();
        for root in 0..self.n() {
            if label[root] != UNSEEN {
                continue;
            }
            label[root] = count;
            stack.push(root);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if label[w] == UNSEEN {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// True when every vertex is reachable from vertex 0. The empty graph is connected.
    pub fn is_connected(&self) -> bool {
        self.component_labels().1 <= 1
    }

    /// Members of the largest connected component (ties go to the component with
    /// the smallest vertex).
    pub fn largest_component(&self) -> NodeSet {
        let (label, count) = self.component_labels();
        if count == 0 {
            return NodeSet::empty();
        }
        let mut sizes = vec![0usize; count];
        for &l in &label {
            sizes[l] += 1;
        }
        let best = (0..count).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))).unwrap();
        NodeSet((0..self.n()).filter(|&v| label[v] == best).collect())
    }

    /// Exact local triangle count of `v` by sorted-list intersection.
    pub fn local_triangles(&self, v: usize) -> usize {
        let nv = self.neighbors(v);
        let twice: usize = nv
            .iter()
            .map(|&w| sorted_intersection_len(nv, self.neighbors(w)))
            .sum();
        twice / 2
    }

    /// Exact local triangle counts for every vertex.
    pub fn all_local_triangles(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n()];
        for (u, v) in self.edges() {
            let (a, b) = (self.neighbors(u), self.neighbors(v));
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        let w = a[i];
                        if w > v {
                            counts[u] += 1;
                            counts[v] += 1;
                            counts[w] += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        counts
    }

    pub fn triangle_count(&self) -> usize {
        self.all_local_triangles().iter().sum::<usize>() / 3
    }
}

pub(crate) fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    // Galloping would help for very skewed lengths; plain merge is fine here.
    if a.len() * 8 < b.len() {
        return a.iter().filter(|x| b.binary_search(x).is_ok()).count();
    }
    if b.len() * 8 < a.len() {
        return b.iter().filter(|x| a.binary_search(x).is_ok()).count();
    }
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Sorted, deduplicated set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeSet(Vec<usize>);

impl NodeSet {
    /// Sorts and deduplicates `members`, checking every id is below `n`.
    pub fn new(mut members: Vec<usize>, n: usize) -> Result<NodeSet> {
        members.sort_unstable();
        members.dedup();
        if let Some(&v) = members.last() {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        Ok(NodeSet(members))
    }

    pub fn empty() -> NodeSet {
        NodeSet(Vec::new())
    }

    pub fn full(n: usize) -> NodeSet {
        NodeSet((0..n).collect())
    }

    pub(crate) fn from_sorted(members: Vec<usize>) -> NodeSet {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        NodeSet(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn with(&self, v: usize) -> NodeSet {
        let mut out = self.0.clone();
        if let Err(pos) = out.binary_search(&v) {
            out.insert(pos, v);
        }
        NodeSet(out)
    }

    pub fn without(&self, v: usize) -> NodeSet {
        let mut out = self.0.clone();
        if let Ok(pos) = out.binary_search(&v) {
            out.remove(pos);
        }
        NodeSet(out)
    }

    pub fn intersection_len(&self, other: &NodeSet) -> usize {
        sorted_intersection_len(&self.0, &other.0)
    }

    pub fn is_subset_of(&self, other: &NodeSet) -> bool {
        self.intersection_len(other) == self.len()
    }

    /// Jaccard similarity; two empty sets are identical.
    pub fn jaccard(&self, other: &NodeSet) -> f64 {
        let inter = self.intersection_len(other);
        let union = self.len() + other.len() - inter;
        if union == 0 {
            1.0
        } else {
            inter as f64 / union as f64
        }
    }
}

/// Boolean membership mask over a host graph's vertices with a cached count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveSet {
    flags: Vec<bool>,
    count: usize,
}

impl ActiveSet {
    pub fn all(n: usize) -> ActiveSet {
        ActiveSet {
            flags: vec![true; n],
            count: n,
        }
    }

    pub fn from_nodes(n: usize, s: &NodeSet) -> Result<ActiveSet> {
        let mut flags = vec![false; n];
        for v in s.iter() {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            flags[v] = true;
        }
        Ok(ActiveSet {
            flags,
            count: s.len(),
        })
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.flags[v]
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Length of the host vertex range.
    pub fn universe(&self) -> usize {
        self.flags.len()
    }

    pub fn remove(&mut self, v: usize) -> Result<()> {
        if !self.flags[v] {
            return Err(Error::InactiveVertex(v));
        }
        self.flags[v] = false;
        self.count -= 1;
        Ok(())
    }

    pub fn to_node_set(&self) -> NodeSet {
        NodeSet(
            self.flags
                .iter()
                .enumerate()
                .filter_map(|(v, &on)| on.then_some(v))
                .collect(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter_map(|(v, &on)| on.then_some(v))
    }
}

/// Number of connected components of the subgraph induced by `s`.
pub fn component_count_within(g: &Graph, s: &NodeSet) -> usize {
    let members = s.members();
    let mut seen = vec![false; members.len()];
    let mut stack = Vec::new();
    let mut count = 0;
    for start in 0..members.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(i) = stack.pop() {
            for &w in g.neighbors(members[i]) {
                if let Ok(j) = members.binary_search(&w) {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> NodeSet {
        NodeSet::new(v.to_vec(), usize::MAX).unwrap()
    }

    fn wheel4() -> Graph {
        // 4-cycle 1-2-3-4 with hub 0
        let mut edges = vec![(1, 2), (2, 3), (3, 4), (4, 1)];
        edges.extend((1..=4).map(|v| (0, v)));
        Graph::from_edges(5, edges).unwrap()
    }

    #[test]
    fn construction_drops_loops_and_duplicates() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (2, 2), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn induced_subgraph_examples() {
        let k3 = Graph::complete(4).induced_subgraph(&set(&[0, 1, 2])).unwrap();
        assert_eq!(k3, Graph::complete(3));

        let leaves = Graph::star(4).induced_subgraph(&set(&[1, 2, 3])).unwrap();
        assert_eq!((leaves.n(), leaves.m()), (3, 0));

        let p = Graph::path(4).induced_subgraph(&set(&[0, 1, 3])).unwrap();
        assert_eq!(p.n(), 3);
        assert_eq!(p.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(p.degree(2), 0);

        assert!(Graph::path(4).induced_subgraph(&set(&[0, 9])).is_err());
    }

    #[test]
    fn edges_within() {
        let k5 = Graph::complete(5);
        assert_eq!(k5.count_edges_within(&NodeSet::full(5)).unwrap(), 10);
        assert_eq!(k5.count_edges_within(&set(&[3])).unwrap(), 0);
    }

    #[test]
    fn local_triangles_examples() {
        let k4 = Graph::complete(4);
        assert!((0..4).all(|v| k4.local_triangles(v) == 3));
        assert_eq!(Graph::star(5).local_triangles(0), 0);
        assert_eq!(wheel4().local_triangles(0), 4);
        assert_eq!(wheel4().all_local_triangles(), vec![4, 2, 2, 2, 2]);
    }

    #[test]
    fn neighborhood_examples() {
        assert_eq!(Graph::path(4).neighborhood(&set(&[1])).unwrap(), set(&[0, 2]));
        assert!(Graph::complete(4)
            .neighborhood(&NodeSet::full(4))
            .unwrap()
            .is_empty());
        assert_eq!(Graph::star(5).neighborhood(&set(&[1])).unwrap(), set(&[0]));
    }

    #[test]
    fn connectivity() {
        assert!(Graph::complete(3).is_connected());
        assert!(Graph::path(4).is_connected());
        assert!(Graph::empty(0).is_connected());
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!two.is_connected());
        assert_eq!(component_count_within(&two, &NodeSet::full(4)), 2);
        let g = Graph::complete(3).disjoint_union(&Graph::complete(4));
        assert_eq!(g.largest_component(), set(&[3, 4, 5, 6]));
    }

    #[test]
    fn active_set_tracks_count() {
        let mut a = ActiveSet::all(4);
        a.remove(2).unwrap();
        assert!(a.remove(2).is_err());
        assert_eq!(a.count(), 3);
        assert_eq!(a.to_node_set(), set(&[0, 1, 3]));
    }

    #[test]
    fn edit_helpers() {
        let g = Graph::empty(5).with_clique(&set(&[1, 2, 4])).unwrap();
        assert_eq!(g.m(), 3);
        let h = g.without_edges_within(&set(&[1, 2])).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(1, 4), (2, 4)]);
    }
}
