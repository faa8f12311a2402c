//! Implicit Google-matrix operator and power iteration.
//!
//! For a directed graph with binary adjacency `A`, the Markov transition
//! matrix `S` normalizes each column of `A` to unit sum and replaces
//! all-zero columns (dangling nodes) by the uniform column `1/N`. The
//! Google matrix is
//!
//! > `G = α S + (1 − α) / N`
//!
//! and PageRank is its stationary probability vector. `G` is never
//! materialized: one application costs O(edges) by pulling, for each target
//! node, the rank of its predecessors divided by their out-degree, plus a
//! rank-one correction that spreads the accumulated dangling mass and the
//! teleportation term uniformly.
//!
//! CheiRank is the PageRank of the graph with all link directions
//! inverted; it rewards nodes with many outgoing links the way PageRank
//! rewards nodes with many incoming links.
//!
//! Applications across target nodes may run in parallel. Each entry of the
//! output is produced by the same sequential reduction in either mode, so
//! parallel and sequential execution agree exactly; the sequential path is
//! still exposed for callers that want single-threaded runs.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{DirectedGraph, NodeId};
use crate::kahan::{kahan_sum, l1_distance, KahanSum};

/// Standard damping factor.
pub const DEFAULT_ALPHA: f64 = 0.85;
/// Default L1 stopping tolerance for power iteration.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 1000;

/// Input probability vectors may deviate from unit sum by at most this.
const INPUT_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankKind {
    PageRank,
    CheiRank,
}

impl std::fmt::Display for RankKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RankKind::PageRank => f.write_str("PageRank"),
            RankKind::CheiRank => f.write_str("CheiRank"),
        }
    }
}

/// A converged (or last-iterate) probability vector over the nodes of a
/// graph, together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    pub probabilities: Vec<f64>,
    pub kind: RankKind,
    pub iterations_used: usize,
    /// L1 difference between the last two iterates.
    pub residual: f64,
}

impl RankVector {
    #[inline]
    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    #[inline]
    pub fn probability(&self, n: NodeId) -> f64 {
        self.probabilities[n.index()]
    }

    /// Compensated sum of all entries; 1 within accumulation tolerance for
    /// any vector produced by this module.
    pub fn sum(&self) -> f64 {
        kahan_sum(&self.probabilities)
    }
}

#[derive(Debug, Error)]
pub enum GmatrixError {
    #[error("damping factor must lie in (0, 1), got {alpha}")]
    InvalidAlpha { alpha: f64 },
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("dimension mismatch: vector has {got} entries, operator expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("input is not a probability vector: entry {index} is {value}")]
    NegativeEntry { index: usize, value: f64 },
    #[error("input is not a probability vector: sum is {sum}")]
    NotNormalized { sum: f64 },
    #[error("tolerance must be positive, got {tol}")]
    InvalidTolerance { tol: f64 },
    #[error("max_iter must be at least 1")]
    InvalidMaxIter,
    #[error("weight matrix must be {expected} entries for {n} nodes, got {got}")]
    BadWeightShape { expected: usize, n: usize, got: usize },
    #[error("weight at ({row}, {col}) is {value}; weights must be finite and non-negative")]
    InvalidWeight { row: usize, col: usize, value: f64 },
    #[error(
        "power iteration did not converge after {} iterations (final residual {:e})",
        last.iterations_used,
        last.residual
    )]
    NonConverged {
        /// Last iterate, so callers can inspect or resume instead of
        /// mistaking it for a converged result.
        last: Box<RankVector>,
    },
}

/// Anything that acts like a column-stochastic Google matrix on probability
/// vectors. Implementors guarantee that applying to a probability vector
/// yields a probability vector.
pub trait Operator {
    fn node_count(&self) -> usize;

    /// One matrix-vector product. `v` is assumed valid (length checked by
    /// callers); `out` must have the same length.
    fn apply_into(&self, v: &[f64], out: &mut [f64]);

    /// Validated application returning a fresh vector.
    fn apply(&self, v: &[f64]) -> Result<Vec<f64>, GmatrixError> {
        validate_probability(v, self.node_count())?;
        let mut out = vec![0.0; v.len()];
        self.apply_into(v, &mut out);
        Ok(out)
    }
}

fn validate_probability(v: &[f64], expected: usize) -> Result<(), GmatrixError> {
    if v.len() != expected {
        return Err(GmatrixError::DimensionMismatch {
            expected,
            got: v.len(),
        });
    }
    for (index, &value) in v.iter().enumerate() {
        if !(value >= 0.0) {
            return Err(GmatrixError::NegativeEntry { index, value });
        }
    }
    let sum = kahan_sum(v);
    if (sum - 1.0).abs() > INPUT_SUM_TOL {
        return Err(GmatrixError::NotNormalized { sum });
    }
    Ok(())
}

/// The Google matrix of a [`DirectedGraph`], kept implicit.
#[derive(Debug, Clone)]
pub struct GoogleOperator<'g> {
    graph: &'g DirectedGraph,
    alpha: f64,
    /// 1 / k_out per node; 0.0 marks a dangling node.
    inv_out_degree: Vec<f64>,
    dangling: Vec<NodeId>,
    sequential: bool,
}

impl<'g> GoogleOperator<'g> {
    pub fn new(graph: &'g DirectedGraph, alpha: f64) -> Result<Self, GmatrixError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(GmatrixError::InvalidAlpha { alpha });
        }
        if graph.node_count() == 0 {
            return Err(GmatrixError::EmptyGraph);
        }
        let mut inv_out_degree = Vec::with_capacity(graph.node_count());
        let mut dangling = Vec::new();
        for n in graph.nodes() {
            let k = graph.out_degree(n);
            if k == 0 {
                inv_out_degree.push(0.0);
                dangling.push(n);
            } else {
                inv_out_degree.push(1.0 / k as f64);
            }
        }
        Ok(GoogleOperator {
            graph,
            alpha,
            inv_out_degree,
            dangling,
            sequential: false,
        })
    }

    /// Forces single-threaded application.
    pub fn sequential(mut self, yes: bool) -> Self {
        self.sequential = yes;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn graph(&self) -> &DirectedGraph {
        self.graph
    }

    /// Nodes with zero out-degree, whose transition columns are uniform.
    pub fn dangling_nodes(&self) -> &[NodeId] {
        &self.dangling
    }

    /// Teleportation plus dangling-mass share every node receives, and the
    /// in-link pull for one target node.
    #[inline]
    fn pull(&self, target: usize, v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for &j in self.graph.in_neighbors(NodeId(target as u32)) {
            acc += v[j.index()] * self.inv_out_degree[j.index()];
        }
        acc
    }
}

impl Operator for GoogleOperator<'_> {
    fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let n = self.graph.node_count();
        let inv_n = 1.0 / n as f64;
        let mut dangling_mass = KahanSum::new();
        for &d in &self.dangling {
            dangling_mass.add(v[d.index()]);
        }
        // Rank-one part: teleportation plus uniformly spread dangling mass.
        let base = (1.0 - self.alpha) * inv_n + self.alpha * dangling_mass.value() * inv_n;
        if self.sequential {
            for (i, slot) in out.iter_mut().enumerate() {
                *slot = base + self.alpha * self.pull(i, v);
            }
        } else {
            out.par_iter_mut().enumerate().for_each(|(i, slot)| {
                *slot = base + self.alpha * self.pull(i, v);
            });
        }
    }
}

/// Dense Google matrix for small weighted directed networks.
///
/// Each node's outgoing links are treated democratically: column `j` of the
/// transition matrix carries node `j`'s outgoing weights renormalized to
/// unit sum, and nodes without outgoing weight get the uniform column.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseGoogle {
    n: usize,
    /// Row-major G, `entries[i * n + j] = G_ij`.
    entries: Vec<f64>,
}

impl DenseGoogle {
    /// Builds G from row-major out-weights `w[u * n + v]` = weight of the
    /// link `u -> v`.
    pub fn from_out_weights(weights: &[f64], n: usize, alpha: f64) -> Result<Self, GmatrixError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(GmatrixError::InvalidAlpha { alpha });
        }
        if n == 0 {
            return Err(GmatrixError::EmptyGraph);
        }
        if weights.len() != n * n {
            return Err(GmatrixError::BadWeightShape {
                expected: n * n,
                n,
                got: weights.len(),
            });
        }
        for (idx, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(GmatrixError::InvalidWeight {
                    row: idx / n,
                    col: idx % n,
                    value: w,
                });
            }
        }
        let inv_n = 1.0 / n as f64;
        let teleport = (1.0 - alpha) * inv_n;
        let mut entries = vec![0.0; n * n];
        for j in 0..n {
            let total: f64 = (0..n).map(|i| weights[j * n + i]).sum();
            for i in 0..n {
                let s = if total > 0.0 {
                    weights[j * n + i] / total
                } else {
                    inv_n
                };
                entries[i * n + j] = alpha * s + teleport;
            }
        }
        Ok(DenseGoogle { n, entries })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn column_sum(&self, j: usize) -> f64 {
        let col: Vec<f64> = (0..self.n).map(|i| self.get(i, j)).collect();
        kahan_sum(&col)
    }
}

impl Operator for DenseGoogle {
    fn node_count(&self) -> usize {
        self.n
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            let row = &self.entries[i * self.n..(i + 1) * self.n];
            let mut acc = KahanSum::new();
            for (g, x) in row.iter().zip(v) {
                acc.add(g * x);
            }
            out[i] = acc.value();
        }
    }
}

/// Runs power iteration from the uniform vector until the L1 difference
/// between successive iterates drops below `tol` or `max_iter` is reached.
///
/// Non-convergence is an error carrying the last iterate, never a silent
/// success.
pub fn power_iterate<O: Operator>(
    op: &O,
    tol: f64,
    max_iter: usize,
) -> Result<RankVector, GmatrixError> {
    if !(tol > 0.0) {
        return Err(GmatrixError::InvalidTolerance { tol });
    }
    if max_iter == 0 {
        return Err(GmatrixError::InvalidMaxIter);
    }
    let n = op.node_count();
    if n == 0 {
        return Err(GmatrixError::EmptyGraph);
    }
    let mut current = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iteration in 1..=max_iter {
        op.apply_into(&current, &mut next);
        residual = l1_distance(&next, &current);
        std::mem::swap(&mut current, &mut next);
        if residual < tol {
            return Ok(RankVector {
                probabilities: current,
                kind: RankKind::PageRank,
                iterations_used: iteration,
                residual,
            });
        }
    }
    Err(GmatrixError::NonConverged {
        last: Box::new(RankVector {
            probabilities: current,
            kind: RankKind::PageRank,
            iterations_used: max_iter,
            residual,
        }),
    })
}

/// PageRank of `g` via the implicit Google operator, parallel application.
pub fn pagerank(
    g: &DirectedGraph,
    alpha: f64,
    tol: f64,
    max_iter: usize,
) -> Result<RankVector, GmatrixError> {
    let op = GoogleOperator::new(g, alpha)?;
    power_iterate(&op, tol, max_iter)
}

/// PageRank with single-threaded application, for bit-reproducible runs.
pub fn pagerank_deterministic(
    g: &DirectedGraph,
    alpha: f64,
    tol: f64,
    max_iter: usize,
) -> Result<RankVector, GmatrixError> {
    let op = GoogleOperator::new(g, alpha)?.sequential(true);
    power_iterate(&op, tol, max_iter)
}

/// CheiRank of `g`: the PageRank of the link-inverted graph.
pub fn cheirank(
    g: &DirectedGraph,
    alpha: f64,
    tol: f64,
    max_iter: usize,
) -> Result<RankVector, GmatrixError> {
    relabel(pagerank(&g.reverse(), alpha, tol, max_iter))
}

/// CheiRank with single-threaded application.
pub fn cheirank_deterministic(
    g: &DirectedGraph,
    alpha: f64,
    tol: f64,
    max_iter: usize,
) -> Result<RankVector, GmatrixError> {
    relabel(pagerank_deterministic(&g.reverse(), alpha, tol, max_iter))
}

fn relabel(result: Result<RankVector, GmatrixError>) -> Result<RankVector, GmatrixError> {
    match result {
        Ok(mut rv) => {
            rv.kind = RankKind::CheiRank;
            Ok(rv)
        }
        Err(GmatrixError::NonConverged { mut last }) => {
            last.kind = RankKind::CheiRank;
            Err(GmatrixError::NonConverged { last })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_edge_list, IdMode};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::io::Cursor;

    fn graph(text: &str) -> DirectedGraph {
        parse_edge_list(Cursor::new(text), IdMode::DenseInteger).unwrap()
    }

    // ---- dense brute-force oracle, written against the definition before
    // ---- the implicit operator existed; it never touches GoogleOperator.

    /// G as an explicit dense matrix: columns of A normalized, dangling
    /// columns uniform, then damped.
    fn oracle_google_matrix(g: &DirectedGraph, alpha: f64) -> Vec<Vec<f64>> {
        let n = g.node_count();
        let teleport = (1.0 - alpha) / n as f64;
        let mut m = vec![vec![teleport; n]; n];
        for j in g.nodes() {
            let outs = g.out_neighbors(j);
            if outs.is_empty() {
                for i in 0..n {
                    m[i][j.index()] += alpha / n as f64;
                }
            } else {
                for &t in outs {
                    m[t.index()][j.index()] += alpha / outs.len() as f64;
                }
            }
        }
        m
    }

    /// Stationary vector of a column-stochastic matrix by direct solve:
    /// (G - I) x = 0 with the last equation replaced by sum(x) = 1,
    /// Gaussian elimination with partial pivoting.
    fn oracle_stationary(m: &[Vec<f64>]) -> Vec<f64> {
        let n = m.len();
        let mut a = vec![vec![0.0; n + 1]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = m[i][j] - if i == j { 1.0 } else { 0.0 };
            }
        }
        for j in 0..n {
            a[n - 1][j] = 1.0;
        }
        a[n - 1][n] = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r][col].abs().partial_cmp(&a[s][col].abs()).unwrap())
                .unwrap();
            a.swap(col, pivot);
            for row in 0..n {
                if row != col && a[row][col] != 0.0 {
                    let f = a[row][col] / a[col][col];
                    for k in col..=n {
                        a[row][k] -= f * a[col][k];
                    }
                }
            }
        }
        (0..n).map(|i| a[i][n] / a[i][i]).collect()
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, edges: usize) -> DirectedGraph {
        let raw: Vec<(u32, u32)> = (0..edges)
            .map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)))
            .collect();
        DirectedGraph::from_edges(n, raw).unwrap()
    }

    #[test]
    fn apply_on_cycle_keeps_uniform() {
        let g = graph("0 1\n1 2\n2 0\n");
        let op = GoogleOperator::new(&g, 0.85).unwrap();
        let v = vec![1.0 / 3.0; 3];
        let out = op.apply(&v).unwrap();
        for x in out {
            assert_abs_diff_eq!(x, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn apply_matches_hand_evaluated_dangling_column() {
        // 0 -> 1, node 1 dangling, v = delta on node 0.
        let g = graph("0 1\n");
        let op = GoogleOperator::new(&g, 0.85).unwrap();
        assert_eq!(op.dangling_nodes(), &[NodeId(1)]);
        let out = op.apply(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(out[0], 0.075, epsilon = 1e-15);
        assert_abs_diff_eq!(out[1], 0.925, epsilon = 1e-15);
    }

    #[test]
    fn apply_rejects_bad_input() {
        let g = graph("0 1\n");
        let op = GoogleOperator::new(&g, 0.85).unwrap();
        assert!(matches!(
            op.apply(&[1.0]),
            Err(GmatrixError::DimensionMismatch { expected: 2, got: 1 })
        ));
        assert!(matches!(
            op.apply(&[1.5, -0.5]),
            Err(GmatrixError::NegativeEntry { index: 1, .. })
        ));
        assert!(matches!(
            op.apply(&[0.9, 0.2]),
            Err(GmatrixError::NotNormalized { .. })
        ));
    }

    #[test]
    fn alpha_out_of_range_rejected() {
        let g = graph("0 1\n");
        assert!(matches!(
            GoogleOperator::new(&g, 1.0),
            Err(GmatrixError::InvalidAlpha { .. })
        ));
        assert!(matches!(
            GoogleOperator::new(&g, 0.0),
            Err(GmatrixError::InvalidAlpha { .. })
        ));
    }

    #[test]
    fn empty_graph_rejected() {
        let g = DirectedGraph::from_edges(0, vec![]).unwrap();
        assert!(matches!(
            pagerank(&g, 0.85, 1e-10, 100),
            Err(GmatrixError::EmptyGraph)
        ));
    }

    #[test]
    fn cycle_converges_to_uniform() {
        let g = graph("0 1\n1 2\n2 0\n");
        let rv = pagerank(&g, 0.85, 1e-12, 1000).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(rv.probabilities[i], 1.0 / 3.0, epsilon = 1e-10);
        }
        assert_eq!(rv.kind, RankKind::PageRank);
    }

    #[test]
    fn two_node_chain_matches_closed_form() {
        // Stationary system: p1 = 1.85 p0, p0 + p1 = 1.
        let g = graph("0 1\n");
        let rv = pagerank(&g, 0.85, 1e-13, 1000).unwrap();
        assert_abs_diff_eq!(rv.probabilities[0], 1.0 / 2.85, epsilon = 1e-9);
        assert_abs_diff_eq!(rv.probabilities[1], 1.85 / 2.85, epsilon = 1e-9);
    }

    #[test]
    fn matches_dense_oracle_up_to_twelve_nodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..60 {
            let n = 2 + (trial % 11);
            let edges = rng.gen_range(0..=3 * n);
            let g = random_graph(&mut rng, n, edges);
            let expected = oracle_stationary(&oracle_google_matrix(&g, 0.85));
            let rv = pagerank(&g, 0.85, 1e-13, 2000).unwrap();
            let err = l1_distance(&rv.probabilities, &expected);
            assert!(err < 1e-9, "n={n} trial={trial} l1={err:e}");
        }
    }

    #[test]
    fn non_convergence_carries_last_iterate() {
        let g = graph("0 1\n1 2\n2 0\n0 2\n");
        let err = pagerank(&g, 0.85, 1e-15, 1).unwrap_err();
        match err {
            GmatrixError::NonConverged { last } => {
                assert_eq!(last.iterations_used, 1);
                assert!(last.residual > 1e-15);
                assert_abs_diff_eq!(last.sum(), 1.0, epsilon = 1e-12);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn star_center_has_max_pagerank() {
        let g = graph("1 0\n2 0\n3 0\n");
        let rv = pagerank(&g, 0.85, 1e-12, 1000).unwrap();
        for i in 1..4 {
            assert!(rv.probabilities[0] > rv.probabilities[i]);
        }
    }

    #[test]
    fn star_center_has_max_cheirank() {
        let g = graph("0 1\n0 2\n0 3\n");
        let rv = cheirank(&g, 0.85, 1e-12, 1000).unwrap();
        assert_eq!(rv.kind, RankKind::CheiRank);
        for i in 1..4 {
            assert!(rv.probabilities[0] > rv.probabilities[i]);
        }
    }

    #[test]
    fn cheirank_is_pagerank_of_reversed_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = random_graph(&mut rng, 40, 160);
        let a = cheirank(&g, 0.85, 1e-12, 1000).unwrap();
        let b = pagerank(&g.reverse(), 0.85, 1e-12, 1000).unwrap();
        assert_eq!(a.probabilities, b.probabilities);
        assert_eq!(a.iterations_used, b.iterations_used);
    }

    #[test]
    fn cheirank_on_cycle_is_uniform() {
        let g = graph("0 1\n1 2\n2 0\n");
        let rv = cheirank(&g, 0.85, 1e-12, 1000).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(rv.probabilities[i], 1.0 / 3.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn converged_entries_are_strictly_positive() {
        // Node 3 is isolated; teleportation still reaches it.
        let g = graph("0 1\n1 2\n2 0\n0 3\n");
        let rv = pagerank(&g, 0.85, 1e-12, 1000).unwrap();
        for &p in &rv.probabilities {
            assert!(p > 0.0);
        }
    }

    #[test]
    fn residuals_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_graph(&mut rng, 60, 240);
        let op = GoogleOperator::new(&g, 0.85).unwrap();
        let mut v = vec![1.0 / 60.0; 60];
        let mut prev_residual = f64::INFINITY;
        for _ in 0..50 {
            let next = op.apply(&v).unwrap();
            let r = l1_distance(&next, &v);
            assert!(r <= prev_residual + 1e-15, "{r} > {prev_residual}");
            prev_residual = r;
            v = next;
        }
    }

    #[test]
    fn dangling_mass_stays_accounted() {
        // Node 4 is isolated and dangling; no probability leaks.
        let g = DirectedGraph::from_edges(5, vec![(0, 1), (1, 0), (2, 2), (3, 3)]).unwrap();
        let rv = pagerank(&g, 0.85, 1e-12, 1000).unwrap();
        assert_abs_diff_eq!(rv.sum(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_graph(&mut rng, 500, 3000);
        let par = pagerank(&g, 0.85, 1e-12, 1000).unwrap();
        let seq = pagerank_deterministic(&g, 0.85, 1e-12, 1000).unwrap();
        assert!(l1_distance(&par.probabilities, &seq.probabilities) < 1e-9);
    }

    #[test]
    fn dense_google_columns_are_stochastic() {
        // Two out-links from node 0 with weights 2 and 3; node 2 dangling.
        let w = vec![0.0, 2.0, 3.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let dg = DenseGoogle::from_out_weights(&w, 3, 0.85).unwrap();
        for j in 0..3 {
            assert_abs_diff_eq!(dg.column_sum(j), 1.0, epsilon = 1e-12);
        }
        // Column 0 splits alpha by 2/5 and 3/5.
        assert_abs_diff_eq!(dg.get(1, 0), 0.85 * 0.4 + 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(dg.get(2, 0), 0.85 * 0.6 + 0.05, epsilon = 1e-15);
        // Dangling column 2 is uniform.
        for i in 0..3 {
            assert_abs_diff_eq!(dg.get(i, 2), 0.85 / 3.0 + 0.05, epsilon = 1e-15);
        }
    }

    #[test]
    fn dense_power_iteration_matches_sparse_on_binary_weights() {
        let g = graph("0 1\n1 2\n2 0\n0 2\n");
        let mut w = vec![0.0; 9];
        for s in g.nodes() {
            for &t in g.out_neighbors(s) {
                w[s.index() * 3 + t.index()] = 1.0;
            }
        }
        let dense = DenseGoogle::from_out_weights(&w, 3, 0.85).unwrap();
        let a = power_iterate(&dense, 1e-13, 2000).unwrap();
        let b = pagerank(&g, 0.85, 1e-13, 2000).unwrap();
        assert!(l1_distance(&a.probabilities, &b.probabilities) < 1e-11);
    }

    #[test]
    fn dense_rejects_bad_weights() {
        assert!(matches!(
            DenseGoogle::from_out_weights(&[1.0; 8], 3, 0.85),
            Err(GmatrixError::BadWeightShape { .. })
        ));
        assert!(matches!(
            DenseGoogle::from_out_weights(&[1.0, -1.0, 0.0, 0.0], 2, 0.85),
            Err(GmatrixError::InvalidWeight { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn invalid_iteration_parameters_rejected() {
        let g = graph("0 1\n");
        assert!(matches!(
            pagerank(&g, 0.85, 0.0, 10),
            Err(GmatrixError::InvalidTolerance { .. })
        ));
        assert!(matches!(
            pagerank(&g, 0.85, 1e-10, 0),
            Err(GmatrixError::InvalidMaxIter)
        ));
    }

    proptest! {
        // Column stochasticity: applying the operator preserves unit sum.
        #[test]
        fn apply_preserves_probability_sum(
            raw in proptest::collection::vec((0u32..25, 0u32..25), 0..120),
            weights in proptest::collection::vec(0.0f64..1.0, 25),
        ) {
            let g = DirectedGraph::from_edges(25, raw).unwrap();
            let total: f64 = weights.iter().sum();
            prop_assume!(total > 1e-9);
            let v: Vec<f64> = weights.iter().map(|w| w / total).collect();
            let op = GoogleOperator::new(&g, 0.85).unwrap();
            let out = op.apply(&v).unwrap();
            prop_assert!((kahan_sum(&out) - 1.0).abs() < 1e-12);
            prop_assert!(out.iter().all(|&x| x > 0.0));
        }
    }
}
