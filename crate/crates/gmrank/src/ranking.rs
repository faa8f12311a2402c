//! Rank indices over probability vectors, the PageRank–CheiRank correlator,
//! the combined two-dimensional ordering, and the logarithmic rank-plane
//! density grid.
//!
//! The two-dimensional rank K2 enumerates nodes along the ribs of growing
//! squares in the (K, K*) plane: the rib of size `r` holds the nodes whose
//! larger rank index equals `r`. Within one rib the canonical traversal is
//! fixed as: the node on the K side (K = r, K* < r), then the corner
//! (r, r) if occupied, then the node on the K* side (K* = r, K < r). Since
//! K and K* are both permutations, each rib carries at most two nodes, so
//! this rule determines K2 completely.

use thiserror::Error;

use crate::graph::NodeId;
use crate::gmatrix::RankVector;
use crate::kahan::KahanSum;

#[derive(Debug, Error)]
pub enum RankingError {
    #[error("rank vectors cover different node sets: {left} vs {right} nodes")]
    LengthMismatch { left: usize, right: usize },
    #[error("density grid needs at least 2 nodes, got {n}")]
    TooFewNodes { n: usize },
    #[error("density grid needs at least 2 bins, got {bins}")]
    InvalidBins { bins: usize },
}

/// Descending-probability ordering of nodes with its inverse permutation.
///
/// `order[k - 1]` is the node at rank `k`; `position` gives each node its
/// 1-based rank index. Ties break by ascending node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankIndex {
    order: Vec<NodeId>,
    position: Vec<u32>,
}

impl RankIndex {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Node at 1-based rank `k`.
    pub fn node_at(&self, k: usize) -> NodeId {
        self.order[k - 1]
    }

    /// 1-based rank index of `n`.
    pub fn rank_of(&self, n: NodeId) -> usize {
        self.position[n.index()] as usize
    }

    pub fn order(&self) -> &[NodeId] {
        &self.order
    }
}

/// Sorts nodes by descending probability, ties by ascending node id.
pub fn rank_index(v: &RankVector) -> RankIndex {
    let mut order: Vec<NodeId> = (0..v.len() as u32).map(NodeId).collect();
    order.sort_by(|&a, &b| {
        v.probability(b)
            .total_cmp(&v.probability(a))
            .then_with(|| a.cmp(&b))
    });
    let mut position = vec![0u32; v.len()];
    for (k, n) in order.iter().enumerate() {
        position[n.index()] = k as u32 + 1;
    }
    RankIndex { order, position }
}

/// The correlator `kappa = N * sum_i P(i) P*(i) - 1`.
pub fn correlator(p: &RankVector, pstar: &RankVector) -> Result<f64, RankingError> {
    if p.len() != pstar.len() {
        return Err(RankingError::LengthMismatch {
            left: p.len(),
            right: pstar.len(),
        });
    }
    let mut dot = KahanSum::new();
    for (a, b) in p.probabilities.iter().zip(&pstar.probabilities) {
        dot.add(a * b);
    }
    Ok(p.len() as f64 * dot.value() - 1.0)
}

/// K2 ordering by rib enumeration, see the module docs for the canonical
/// within-rib rule. Both indices must cover the same node set.
pub fn two_d_rank(
    pagerank_index: &RankIndex,
    cheirank_index: &RankIndex,
) -> Result<Vec<NodeId>, RankingError> {
    if pagerank_index.len() != cheirank_index.len() {
        return Err(RankingError::LengthMismatch {
            left: pagerank_index.len(),
            right: cheirank_index.len(),
        });
    }
    let n = pagerank_index.len();
    let mut out = Vec::with_capacity(n);
    for r in 1..=n {
        let k_side = pagerank_index.node_at(r);
        let kstar_side = cheirank_index.node_at(r);
        if k_side == kstar_side {
            // Corner (r, r).
            out.push(k_side);
            continue;
        }
        if cheirank_index.rank_of(k_side) < r {
            out.push(k_side);
        }
        if pagerank_index.rank_of(kstar_side) < r {
            out.push(kstar_side);
        }
    }
    Ok(out)
}

/// Joint (K, K*) assignment with the combined K2 ordering.
#[derive(Debug, Clone)]
pub struct RankPlane {
    pub pagerank_index: RankIndex,
    pub cheirank_index: RankIndex,
    pub two_d_order: Vec<NodeId>,
}

impl RankPlane {
    pub fn new(p: &RankVector, pstar: &RankVector) -> Result<RankPlane, RankingError> {
        let pagerank_index = rank_index(p);
        let cheirank_index = rank_index(pstar);
        let two_d_order = two_d_rank(&pagerank_index, &cheirank_index)?;
        Ok(RankPlane {
            pagerank_index,
            cheirank_index,
            two_d_order,
        })
    }

    pub fn node_count(&self) -> usize {
        self.pagerank_index.len()
    }
}

/// Node counts over logarithmically equidistant cells covering the whole
/// (K, K*) plane.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    bins: usize,
    /// Row-major counts, `cells[k_cell * bins + kstar_cell]`.
    cells: Vec<u32>,
    k_edges: Vec<f64>,
    kstar_edges: Vec<f64>,
}

impl DensityGrid {
    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn count(&self, k_cell: usize, kstar_cell: usize) -> u32 {
        self.cells[k_cell * self.bins + kstar_cell]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn k_edges(&self) -> &[f64] {
        &self.k_edges
    }

    pub fn kstar_edges(&self) -> &[f64] {
        &self.kstar_edges
    }

    pub fn total(&self) -> u64 {
        self.cells.iter().map(|&c| c as u64).sum()
    }
}

/// `bins + 1` geometrically spaced boundaries from 1 to `n` inclusive.
fn log_edges(n: usize, bins: usize) -> Vec<f64> {
    let ln_n = (n as f64).ln();
    let mut edges: Vec<f64> = (0..=bins)
        .map(|i| (ln_n * i as f64 / bins as f64).exp())
        .collect();
    edges[0] = 1.0;
    edges[bins] = n as f64;
    edges
}

/// Locates `x` among the edges; the last interval is right-closed.
fn locate(edges: &[f64], x: f64) -> usize {
    let bins = edges.len() - 1;
    let i = edges.partition_point(|&e| e <= x) - 1;
    i.min(bins - 1)
}

/// Bins every node of the plane by its (K, K*) pair; each node lands in
/// exactly one cell, so the grid totals the node count.
pub fn density_grid(plane: &RankPlane, bins: usize) -> Result<DensityGrid, RankingError> {
    let n = plane.node_count();
    if n < 2 {
        return Err(RankingError::TooFewNodes { n });
    }
    if bins < 2 {
        return Err(RankingError::InvalidBins { bins });
    }
    let k_edges = log_edges(n, bins);
    let kstar_edges = log_edges(n, bins);
    let mut cells = vec![0u32; bins * bins];
    for idx in 0..n {
        let node = NodeId(idx as u32);
        let k = plane.pagerank_index.rank_of(node);
        let kstar = plane.cheirank_index.rank_of(node);
        let row = locate(&k_edges, k as f64);
        let col = locate(&kstar_edges, kstar as f64);
        cells[row * bins + col] += 1;
    }
    Ok(DensityGrid {
        bins,
        cells,
        k_edges,
        kstar_edges,
    })
}

pub const DEFAULT_DENSITY_BINS: usize = 100;
