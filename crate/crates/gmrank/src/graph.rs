//! Directed-graph ingestion and adjacency storage.
//!
//! Graphs are ingested once from a text edge list and are immutable
//! afterwards. Adjacency is binary: duplicate edges in the input collapse to a
//! single edge. Both forward and reverse adjacency are stored in CSR form so
//! that successors and predecessors of a node are each reachable in
//! O(degree), which is what the ranking iterations need at the
//! tens-of-millions-of-links scale.

use std::collections::HashMap;
use std::io::BufRead;

use thiserror::Error;

/// Dense index of a node after ingestion, in `0..N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// How raw identifiers in an edge list map to [`NodeId`]s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdMode {
    /// Identifiers are non-negative integers used verbatim as node indices.
    /// The node count is `max_id + 1`; integers never mentioned in the input
    /// become isolated nodes.
    DenseInteger,
    /// Identifiers are arbitrary strings, numbered by first appearance.
    /// The original string is kept as the node label.
    ArbitraryString,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("parse error: line {line}: expected 'source target', found {found} token(s)")]
    TokenCount { line: usize, found: usize },
    #[error("parse error: line {line}: '{token}' is not a non-negative integer id")]
    InvalidId { line: usize, token: String },
    #[error("parse error: label line {line}: expected 'node_id<TAB>title'")]
    MalformedLabel { line: usize },
    #[error("label line {line}: node id {id} out of range (graph has {node_count} nodes)")]
    LabelOutOfRange {
        line: usize,
        id: u64,
        node_count: usize,
    },
    #[error("edge endpoint {id} out of range (graph has {node_count} nodes)")]
    EndpointOutOfRange { id: u32, node_count: usize },
    #[error("too many distinct nodes (limit {limit})")]
    TooManyNodes { limit: u64 },
    #[error("read error: {0}")]
    Io(#[from] std::io::Error),
}

/// Immutable directed graph with forward and reverse CSR adjacency.
///
/// Safe to share across threads once built; there is no mutation API.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    in_offsets: Vec<usize>,
    in_sources: Vec<NodeId>,
    labels: Option<Vec<String>>,
}

impl DirectedGraph {
    /// Builds a graph from raw `(source, target)` pairs over `node_count`
    /// nodes. Duplicate pairs collapse to a single edge; self-loops are kept.
    pub fn from_edges(
        node_count: usize,
        mut edges: Vec<(u32, u32)>,
    ) -> Result<DirectedGraph, GraphError> {
        for &(s, t) in &edges {
            let bad = if s as usize >= node_count {
                Some(s)
            } else if t as usize >= node_count {
                Some(t)
            } else {
                None
            };
            if let Some(id) = bad {
                return Err(GraphError::EndpointOutOfRange { id, node_count });
            }
        }
        edges.sort_unstable();
        edges.dedup();

        let mut out_offsets = vec![0usize; node_count + 1];
        for &(s, _) in &edges {
            out_offsets[s as usize + 1] += 1;
        }
        for i in 0..node_count {
            out_offsets[i + 1] += out_offsets[i];
        }
        let out_targets: Vec<NodeId> = edges.iter().map(|&(_, t)| NodeId(t)).collect();

        // Reverse CSR by counting sort; edges are sorted by (source, target),
        // so each predecessor list comes out in ascending source order.
        let mut in_offsets = vec![0usize; node_count + 1];
        for &(_, t) in &edges {
            in_offsets[t as usize + 1] += 1;
        }
        for i in 0..node_count {
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut cursor = in_offsets[..node_count].to_vec();
        let mut in_sources = vec![NodeId(0); edges.len()];
        for &(s, t) in &edges {
            in_sources[cursor[t as usize]] = NodeId(s);
            cursor[t as usize] += 1;
        }

        Ok(DirectedGraph {
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
            labels: None,
        })
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.out_offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    #[inline]
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count() as u32).map(NodeId)
    }

    /// Successors of `n`, in ascending order.
    #[inline]
    pub fn out_neighbors(&self, n: NodeId) -> &[NodeId] {
        &self.out_targets[self.out_offsets[n.index()]..self.out_offsets[n.index() + 1]]
    }

    /// Predecessors of `n`, in ascending order.
    #[inline]
    pub fn in_neighbors(&self, n: NodeId) -> &[NodeId] {
        &self.in_sources[self.in_offsets[n.index()]..self.in_offsets[n.index() + 1]]
    }

    #[inline]
    pub fn out_degree(&self, n: NodeId) -> usize {
        self.out_offsets[n.index() + 1] - self.out_offsets[n.index()]
    }

    #[inline]
    pub fn in_degree(&self, n: NodeId) -> usize {
        self.in_offsets[n.index() + 1] - self.in_offsets[n.index()]
    }

    /// In-degree and out-degree vectors, both of length `node_count`.
    pub fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.node_count();
        let mut ins = Vec::with_capacity(n);
        let mut outs = Vec::with_capacity(n);
        for v in self.nodes() {
            ins.push(self.in_degree(v));
            outs.push(self.out_degree(v));
        }
        (ins, outs)
    }

    /// The graph with every link direction inverted. Labels and node count
    /// are preserved; `reverse` is an involution.
    pub fn reverse(&self) -> DirectedGraph {
        DirectedGraph {
            out_offsets: self.in_offsets.clone(),
            out_targets: self.in_sources.clone(),
            in_offsets: self.out_offsets.clone(),
            in_sources: self.out_targets.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn label(&self, n: NodeId) -> Option<&str> {
        self.labels
            .as_ref()
            .map(|l| l[n.index()].as_str())
            .filter(|s| !s.is_empty())
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }

    /// Attaches titles from a label stream: one line per node,
    /// `node_id<TAB>title`, UTF-8. Nodes absent from the stream keep an
    /// empty label.
    pub fn attach_labels<R: BufRead>(&mut self, reader: R) -> Result<(), GraphError> {
        let n = self.node_count();
        let mut labels = vec![String::new(); n];
        for (line_no, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = line_no + 1;
            let trimmed = line.trim_end_matches(['\r', '\n']);
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (id_str, title) = trimmed
                .split_once('\t')
                .ok_or(GraphError::MalformedLabel { line: line_no })?;
            let id: u64 = id_str
                .parse()
                .map_err(|_| GraphError::MalformedLabel { line: line_no })?;
            if id >= n as u64 {
                return Err(GraphError::LabelOutOfRange {
                    line: line_no,
                    id,
                    node_count: n,
                });
            }
            labels[id as usize] = title.to_string();
        }
        self.labels = Some(labels);
        Ok(())
    }

    fn set_labels(&mut self, labels: Vec<String>) {
        debug_assert_eq!(labels.len(), self.node_count());
        self.labels = Some(labels);
    }
}

/// Parses a text edge list: one `source target` pair per line, whitespace
/// separated. Lines starting with `#` are comments; blank lines are allowed.
/// Duplicate edges collapse to one.
pub fn parse_edge_list<R: BufRead>(reader: R, mode: IdMode) -> Result<DirectedGraph, GraphError> {
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut interner: HashMap<String, u32> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut max_id: Option<u32> = None;

    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = line_no + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (src, dst) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            (Some(_), None, _) => return Err(GraphError::TokenCount { line: line_no, found: 1 }),
            _ => {
                return Err(GraphError::TokenCount {
                    line: line_no,
                    found: 2 + tokens.count() + 1,
                })
            }
        };

        let resolve = |token: &str,
                       interner: &mut HashMap<String, u32>,
                       names: &mut Vec<String>|
         -> Result<u32, GraphError> {
            match mode {
                IdMode::DenseInteger => token.parse::<u32>().map_err(|_| GraphError::InvalidId {
                    line: line_no,
                    token: token.to_string(),
                }),
                IdMode::ArbitraryString => {
                    if let Some(&id) = interner.get(token) {
                        Ok(id)
                    } else {
                        let id = u32::try_from(names.len())
                            .map_err(|_| GraphError::TooManyNodes { limit: u32::MAX as u64 })?;
                        interner.insert(token.to_string(), id);
                        names.push(token.to_string());
                        Ok(id)
                    }
                }
            }
        };

        let s = resolve(src, &mut interner, &mut names)?;
        let t = resolve(dst, &mut interner, &mut names)?;
        max_id = Some(max_id.map_or(s.max(t), |m| m.max(s).max(t)));
        edges.push((s, t));
    }

    let node_count = match mode {
        IdMode::DenseInteger => max_id.map_or(0, |m| m as usize + 1),
        IdMode::ArbitraryString => names.len(),
    };
    let mut g = DirectedGraph::from_edges(node_count, edges)?;
    if mode == IdMode::ArbitraryString && node_count > 0 {
        g.set_labels(names);
    }
    Ok(g)
}
