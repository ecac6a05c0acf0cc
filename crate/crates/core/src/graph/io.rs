use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{Graph, NodeSet};
use crate::error::{Error, Result};

/// A parsed edge list: the compacted graph plus the external label of every
/// internal vertex id.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub labels: Vec<u64>,
}

impl ParsedGraph {
    /// Reverse lookup from external label to internal id.
    pub fn label_index(&self) -> HashMap<u64, usize> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i))
            .collect()
    }

    /// Maps external labels to a [`NodeSet`] of internal ids.
    pub fn nodes_from_labels(&self, labels: &[u64]) -> Result<NodeSet> {
        let index = self.label_index();
        let ids = labels
            .iter()
            .map(|l| {
                index
                    .get(l)
                    .copied()
                    .ok_or_else(|| Error::InvalidArgument(format!("vertex label {l} not in graph")))
            })
            .collect::<Result<Vec<_>>>()?;
        NodeSet::new(ids, self.graph.n())
    }

    pub fn labels_of(&self, s: &NodeSet) -> Vec<u64> {
        s.iter().map(|v| self.labels[v]).collect()
    }
}

fn is_skipped(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#') || t.starts_with('%')
}

/// Reads a whitespace-separated edge list. Lines starting with `#` or `%` and
/// blank lines are ignored; columns after the first two are ignored. Vertex
/// labels are compacted to `0..n` in order of first appearance.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<ParsedGraph> {
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if is_skipped(&line) {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let mut endpoint = || -> Result<usize> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno + 1,
                message: "expected two vertex ids".into(),
            })?;
            let label: u64 = tok.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("invalid vertex id {tok:?}"),
            })?;
            Ok(*index.entry(label).or_insert_with(|| {
                labels.push(label);
                labels.len() - 1
            }))
        };
        let u = endpoint()?;
        let v = endpoint()?;
        edges.push((u, v));
    }
    let graph = Graph::from_edges(labels.len(), edges)?;
    Ok(ParsedGraph { graph, labels })
}

/// Writes one `u v` line per edge, using `labels` when given.
pub fn write_edge_list<W: Write>(g: &Graph, labels: Option<&[u64]>, mut out: W) -> Result<()> {
    for (u, v) in g.edges() {
        match labels {
            Some(l) => writeln!(out, "{} {}", l[u], l[v])?,
            None => writeln!(out, "{u} {v}")?,
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads one vertex label per line (comments and blank lines ignored).
pub fn parse_node_list<R: BufRead>(reader: R) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if is_skipped(&line) {
            continue;
        }
        let tok = line.split_whitespace().next().unwrap_or_default();
        out.push(tok.parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            message: format!("invalid vertex id {tok:?}"),
        })?);
    }
    Ok(out)
}

pub fn write_node_list<W: Write>(labels: &[u64], mut out: W) -> Result<()> {
    for l in labels {
        writeln!(out, "{l}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ParsedGraph> {
        parse_edge_list(text.as_bytes())
    }

    #[test]
    fn triangle() {
        let p = parse("0 1\n1 2\n2 0\n").unwrap();
        assert_eq!((p.graph.n(), p.graph.m()), (3, 3));
    }

    #[test]
    fn loops_and_duplicates_dropped() {
        let p = parse("0 0\n0 1\n0 1\n").unwrap();
        assert_eq!((p.graph.n(), p.graph.m()), (2, 1));
    }

    #[test]
    fn labels_compacted_in_first_appearance_order() {
        let p = parse("# header\n\n10 7\n% other\n7 3\n").unwrap();
        assert_eq!(p.labels, vec![10, 7, 3]);
        assert!(p.graph.has_edge(0, 1) && p.graph.has_edge(1, 2));
        assert_eq!(p.nodes_from_labels(&[3, 10]).unwrap().members(), &[0, 2]);
        assert!(p.nodes_from_labels(&[99]).is_err());
    }

    #[test]
    fn malformed_lines_report_line_number() {
        match parse("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse("0 1\n\n5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("-1 2\n").is_err());
    }

    #[test]
    fn empty_input() {
        let p = parse("").unwrap();
        assert_eq!((p.graph.n(), p.graph.m()), (0, 0));
    }

    #[test]
    fn write_then_parse() {
        let g = Graph::cycle(5);
        let mut buf = Vec::new();
        write_edge_list(&g, None, &mut buf).unwrap();
        let p = parse_edge_list(buf.as_slice()).unwrap();
        assert_eq!(p.labels, vec![0, 1, 4, 2, 3]);
        assert_eq!(p.graph.m(), 5);

        let mut nodes = Vec::new();
        write_node_list(&[4, 2, 9], &mut nodes).unwrap();
        assert_eq!(parse_node_list(nodes.as_slice()).unwrap(), vec![4, 2, 9]);
    }
}
