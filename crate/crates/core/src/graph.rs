//! Problem instances: simple undirected node-weighted graphs, derived graphs
//! (square and line graph), bid vectors, and the color-based tie-break order.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

/// Maximisation or minimisation direction of a binary problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Max,
    Min,
}

/// A simple undirected graph with integer node weights in `{0..=weight_bound}`.
///
/// Node ids are dense integers `0..n`. Edge ids are dense integers in input
/// order; they number the nodes of the line graph and identify charges in the
/// vertex-cover mechanism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    node_count: usize,
    adjacency: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
    edge_index: HashMap<(NodeId, NodeId), EdgeId>,
    weights: Vec<u32>,
    weight_bound: u32,
    max_degree: usize,
}

impl WeightedGraph {
    /// Builds a graph from an edge list. Ids must be in range; structural
    /// defects like self-loops or duplicate edges are stored as given and
    /// reported by [`validate`](Self::validate).
    pub fn new(
        node_count: usize,
        edges: Vec<(NodeId, NodeId)>,
        weights: Vec<u32>,
        weight_bound: u32,
    ) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("node count must be positive".into()));
        }
        if weights.len() != node_count {
            return Err(Error::InvalidGraph(format!(
                "expected {} weights, got {}",
                node_count,
                weights.len()
            )));
        }
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) out of range for {node_count} nodes"
                )));
            }
            adjacency[u].push(v);
            if u != v {
                adjacency[v].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        let mut edge_index = HashMap::new();
        for (id, &(u, v)) in edges.iter().enumerate() {
            let key = (u.min(v), u.max(v));
            edge_index.entry(key).or_insert(id);
        }
        Ok(Self {
            node_count,
            adjacency,
            edges,
            edge_index,
            weights,
            weight_bound,
            max_degree,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn weight_bound(&self) -> u32 {
        self.weight_bound
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn weight(&self, v: NodeId) -> u32 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_between(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        self.edge_index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edge_between(u, v).is_some()
    }

    /// Returns a copy with the given weights (same structure).
    pub fn with_weights(&self, weights: Vec<u32>, weight_bound: u32) -> Result<Self> {
        Self::new(self.node_count, self.edges.clone(), weights, weight_bound)
    }

    /// Checks all structural invariants, reporting the first violation found.
    pub fn validate(&self) -> std::result::Result<(), String> {
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if u == v {
                return Err(format!("self-loop at node {u} (edge {id})"));
            }
        }
        let mut seen = HashMap::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            let key = (u.min(v), u.max(v));
            if let Some(prev) = seen.insert(key, id) {
                return Err(format!(
                    "duplicate edge ({},{}) at ids {prev} and {id}",
                    key.0, key.1
                ));
            }
        }
        for v in 0..self.node_count {
            for &u in &self.adjacency[v] {
                if !self.adjacency[u].contains(&v) {
                    return Err(format!("adjacency not symmetric between {v} and {u}"));
                }
            }
            let mut sorted = self.adjacency[v].clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != self.adjacency[v].len() {
                return Err(format!("duplicate neighbor entries at node {v}"));
            }
        }
        for (v, &w) in self.weights.iter().enumerate() {
            if w > self.weight_bound {
                return Err(format!(
                    "weight out of range: node {v} has weight {w} > bound {}",
                    self.weight_bound
                ));
            }
        }
        let true_max = (0..self.node_count)
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0);
        if true_max != self.max_degree {
            return Err(format!(
                "cached max degree {} differs from true max {true_max}",
                self.max_degree
            ));
        }
        Ok(())
    }

    /// The square graph: same nodes, edges between all pairs at distance 1 or 2.
    pub fn square(&self) -> Self {
        let n = self.node_count;
        let mut edges = Vec::new();
        for v in 0..n {
            let mut reach: Vec<NodeId> = self.adjacency[v].to_vec();
            for &u in &self.adjacency[v] {
                reach.extend_from_slice(&self.adjacency[u]);
            }
            reach.sort_unstable();
            reach.dedup();
            for u in reach {
                if u > v {
                    edges.push((v, u));
                }
            }
        }
        Self::new(n, edges, self.weights.clone(), self.weight_bound)
            .expect("square of a valid graph is valid")
    }

    /// The line graph: one node per edge, adjacency between edges sharing an
    /// endpoint. Line-graph nodes carry zero weights (only structure is used).
    /// Requires at least one edge.
    pub fn line_graph(&self) -> Result<Self> {
        let m = self.edges.len();
        if m == 0 {
            return Err(Error::InvalidInput(
                "line graph of an edgeless graph".into(),
            ));
        }
        let mut edges = Vec::new();
        for v in 0..self.node_count {
            let incident: Vec<EdgeId> = self.incident_edges(v);
            for i in 0..incident.len() {
                for j in (i + 1)..incident.len() {
                    let (a, b) = (incident[i].min(incident[j]), incident[i].max(incident[j]));
                    edges.push((a, b));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Self::new(m, edges, vec![0; m], 0)
    }

    /// Edge ids incident to `v`, ascending.
    pub fn incident_edges(&self, v: NodeId) -> Vec<EdgeId> {
        self.adjacency[v]
            .iter()
            .filter_map(|&u| self.edge_between(v, u))
            .collect()
    }

    /// Parses the line-based text format: header `n m W`, then `n` lines
    /// `v w(v)` in canonical order, then `m` lines `u v` with `u < v`.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().collect();
        let fail = |line: usize, message: String| Error::GraphFormat { line, message };
        if lines.is_empty() {
            return Err(fail(1, "missing header line".into()));
        }
        let header: Vec<&str> = lines[0].split_whitespace().collect();
        if header.len() != 3 {
            return Err(fail(
                1,
                format!("header must be `n m W`, got {:?}", lines[0]),
            ));
        }
        let n: usize = header[0]
            .parse()
            .map_err(|_| fail(1, format!("bad node count {:?}", header[0])))?;
        let m: usize = header[1]
            .parse()
            .map_err(|_| fail(1, format!("bad edge count {:?}", header[1])))?;
        let w_bound: u32 = header[2]
            .parse()
            .map_err(|_| fail(1, format!("bad weight bound {:?}", header[2])))?;
        if n == 0 {
            return Err(fail(1, "node count must be positive".into()));
        }
        if lines.len() != 1 + n + m {
            return Err(fail(
                lines.len().min(1 + n + m) + 1,
                format!("expected {} lines total, got {}", 1 + n + m, lines.len()),
            ));
        }
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let lineno = 2 + i;
            let parts: Vec<&str> = lines[1 + i].split_whitespace().collect();
            if parts.len() != 2 {
                return Err(fail(
                    lineno,
                    format!("node line must be `v w`, got {:?}", lines[1 + i]),
                ));
            }
            let v: usize = parts[0]
                .parse()
                .map_err(|_| fail(lineno, format!("bad node id {:?}", parts[0])))?;
            if v != i {
                return Err(fail(
                    lineno,
                    format!("node lines must be in order; expected {i}, got {v}"),
                ));
            }
            let w: u32 = parts[1]
                .parse()
                .map_err(|_| fail(lineno, format!("bad weight {:?}", parts[1])))?;
            if w > w_bound {
                return Err(fail(lineno, format!("weight {w} exceeds bound {w_bound}")));
            }
            weights.push(w);
        }
        let mut edges = Vec::with_capacity(m);
        let mut seen = HashMap::new();
        for j in 0..m {
            let lineno = 2 + n + j;
            let parts: Vec<&str> = lines[1 + n + j].split_whitespace().collect();
            if parts.len() != 2 {
                return Err(fail(
                    lineno,
                    format!("edge line must be `u v`, got {:?}", lines[1 + n + j]),
                ));
            }
            let u: usize = parts[0]
                .parse()
                .map_err(|_| fail(lineno, format!("bad node id {:?}", parts[0])))?;
            let v: usize = parts[1]
                .parse()
                .map_err(|_| fail(lineno, format!("bad node id {:?}", parts[1])))?;
            if u >= v {
                return Err(fail(
                    lineno,
                    format!("edge must satisfy u < v, got ({u},{v})"),
                ));
            }
            if v >= n {
                return Err(fail(
                    lineno,
                    format!("edge ({u},{v}) out of range for {n} nodes"),
                ));
            }
            if seen.insert((u, v), lineno).is_some() {
                return Err(fail(lineno, format!("duplicate edge ({u},{v})")));
            }
            edges.push((u, v));
        }
        let g = Self::new(n, edges, weights, w_bound)?;
        g.validate().map_err(Error::InvalidGraph)?;
        Ok(g)
    }

    /// Canonical text form; `parse` round-trips it.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} {} {}\n",
            self.node_count,
            self.edges.len(),
            self.weight_bound
        ));
        for (v, w) in self.weights.iter().enumerate() {
            out.push_str(&format!("{v} {w}\n"));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u.min(v), u.max(v)));
        }
        out
    }
}

/// Reported weights, one per node, on the integer grid `{0..=W}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BidVector(pub Vec<u32>);

impl BidVector {
    pub fn from_weights(g: &WeightedGraph) -> Self {
        Self(g.weights().to_vec())
    }

    pub fn get(&self, v: NodeId) -> u32 {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The vector with `v`'s bid replaced by `x` — the `(x, b_{-v})` probe.
    pub fn with_bid(&self, v: NodeId, x: u32) -> Self {
        let mut out = self.clone();
        out.0[v] = x;
        out
    }

    pub fn validate_for(&self, g: &WeightedGraph) -> Result<()> {
        if self.0.len() != g.node_count() {
            return Err(Error::InvalidInput(format!(
                "bid vector has {} entries for {} nodes",
                self.0.len(),
                g.node_count()
            )));
        }
        for (v, &b) in self.0.iter().enumerate() {
            if b > g.weight_bound() {
                return Err(Error::InvalidInput(format!(
                    "bid {b} of node {v} exceeds bound {}",
                    g.weight_bound()
                )));
            }
        }
        Ok(())
    }
}

/// A compared quantity paired with the tie-breaking color of its node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TieKey {
    pub value: u32,
    pub color: u32,
}

impl TieKey {
    pub fn new(value: u32, color: u32) -> Self {
        Self { value, color }
    }
}

/// Strict total order used by every greedy mechanism: higher value wins under
/// `Max` (lower under `Min`), and equal values go to the smaller color.
///
/// Returns `Greater` when `a` is selected over `b`. Comparing equal colors is
/// a contract violation and signals an improper coloring upstream.
pub fn tie_compare(a: TieKey, b: TieKey, objective: Objective) -> Result<Ordering> {
    if a.color == b.color {
        return Err(Error::ContractViolation(format!(
            "tie_compare on equal colors {} (values {} and {})",
            a.color, a.value, b.value
        )));
    }
    let by_value = match objective {
        Objective::Max => a.value.cmp(&b.value),
        Objective::Min => b.value.cmp(&a.value),
    };
    Ok(match by_value {
        Ordering::Equal => b.color.cmp(&a.color),
        other => other,
    })
}

/// True when `a` is selected over `b`.
pub fn beats(a: TieKey, b: TieKey, objective: Objective) -> Result<bool> {
    Ok(tie_compare(a, b, objective)? == Ordering::Greater)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> WeightedGraph {
        WeightedGraph::new(3, vec![(0, 1), (1, 2)], vec![1, 5, 1], 5).unwrap()
    }

    #[test]
    fn validate_ok_single_node() {
        let g = WeightedGraph::new(1, vec![], vec![3], 3).unwrap();
        assert!(g.validate().is_ok());
    }

    #[test]
    fn validate_reports_self_loop() {
        let g = WeightedGraph::new(2, vec![(1, 1)], vec![0, 0], 1).unwrap();
        let err = g.validate().unwrap_err();
        assert!(err.contains("self-loop"), "{err}");
    }

    #[test]
    fn validate_reports_weight_out_of_range() {
        let mut g = WeightedGraph::new(1, vec![], vec![4], 4).unwrap();
        g.weights[0] = 5;
        let err = g.validate().unwrap_err();
        assert!(err.contains("weight out of range"), "{err}");
    }

    #[test]
    fn validate_reports_duplicate_edge() {
        let g = WeightedGraph::new(2, vec![(0, 1), (0, 1)], vec![0, 0], 0).unwrap();
        assert!(g.validate().unwrap_err().contains("duplicate edge"));
    }

    #[test]
    fn validate_reports_stale_max_degree() {
        let mut g = path3();
        g.max_degree = 7;
        assert!(g.validate().unwrap_err().contains("max degree"));
    }

    #[test]
    fn square_of_path_is_triangle() {
        let sq = path3().square();
        assert!(sq.validate().is_ok());
        assert_eq!(sq.edge_count(), 3);
        assert!(sq.has_edge(0, 2));
    }

    #[test]
    fn square_of_single_edge_is_unchanged() {
        let g = WeightedGraph::new(2, vec![(0, 1)], vec![2, 3], 3).unwrap();
        let sq = g.square();
        assert_eq!(sq.edges(), g.edges());
        assert_eq!(sq.weights(), g.weights());
    }

    #[test]
    fn square_of_four_cycle_is_complete() {
        // All-pairs distances on C4 are at most 2.
        let g = WeightedGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)], vec![0; 4], 0).unwrap();
        let sq = g.square();
        assert_eq!(sq.edge_count(), 6);
        for u in 0..4 {
            for v in (u + 1)..4 {
                assert!(sq.has_edge(u, v), "missing ({u},{v})");
            }
        }
    }

    #[test]
    fn line_graph_of_path_is_single_edge() {
        let lg = path3().line_graph().unwrap();
        assert!(lg.validate().is_ok());
        assert_eq!(lg.node_count(), 2);
        assert_eq!(lg.edge_count(), 1);
    }

    #[test]
    fn line_graph_of_triangle_is_triangle() {
        let g = WeightedGraph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![0; 3], 0).unwrap();
        let lg = g.line_graph().unwrap();
        assert_eq!(lg.node_count(), 3);
        assert_eq!(lg.edge_count(), 3);
    }

    #[test]
    fn line_graph_of_star_is_triangle() {
        let g = WeightedGraph::new(4, vec![(0, 1), (0, 2), (0, 3)], vec![0; 4], 0).unwrap();
        let lg = g.line_graph().unwrap();
        assert_eq!(lg.node_count(), 3);
        assert_eq!(lg.edge_count(), 3);
    }

    #[test]
    fn line_graph_degree_matches_endpoint_degrees() {
        let g = WeightedGraph::new(
            5,
            vec![(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)],
            vec![0; 5],
            0,
        )
        .unwrap();
        let lg = g.line_graph().unwrap();
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            let expect = g.degree(u) + g.degree(v) - 2;
            assert_eq!(lg.degree(id), expect, "edge {id}");
        }
    }

    #[test]
    fn tie_compare_examples() {
        use Objective::*;
        // Equal values: smaller color wins.
        assert!(beats(TieKey::new(5, 2), TieKey::new(5, 4), Max).unwrap());
        // Strict value dominance beats any color.
        assert!(beats(TieKey::new(6, 0), TieKey::new(5, 9), Max).unwrap());
        // Minimisation mirrors, smaller color still wins ties.
        assert!(beats(TieKey::new(3, 0), TieKey::new(3, 1), Min).unwrap());
        assert!(!beats(TieKey::new(3, 1), TieKey::new(3, 0), Min).unwrap());
    }

    #[test]
    fn tie_compare_rejects_equal_colors() {
        assert!(tie_compare(TieKey::new(1, 3), TieKey::new(2, 3), Objective::Max).is_err());
    }

    #[test]
    fn tie_order_is_total_and_transitive() {
        // Exhaustive over small value/color ranges with pairwise-distinct colors.
        for &obj in &[Objective::Max, Objective::Min] {
            let keys: Vec<TieKey> = (0..4)
                .flat_map(|v| (0..4).map(move |c| TieKey::new(v, c)))
                .collect();
            for &a in &keys {
                for &b in &keys {
                    if a.color == b.color {
                        continue;
                    }
                    let ab = beats(a, b, obj).unwrap();
                    let ba = beats(b, a, obj).unwrap();
                    assert!(ab ^ ba, "exactly one direction must win");
                    for &c in &keys {
                        if c.color == a.color || c.color == b.color {
                            continue;
                        }
                        if ab && beats(b, c, obj).unwrap() {
                            assert!(beats(a, c, obj).unwrap(), "transitivity");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parse_round_trips() {
        let g = path3();
        let text = g.to_text();
        let back = WeightedGraph::parse(&text).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn parse_rejects_bad_lines() {
        assert!(matches!(
            WeightedGraph::parse("2 1 3\n0 1\n1 2\n1 0\n"),
            Err(Error::GraphFormat { line: 4, .. })
        ));
        assert!(matches!(
            WeightedGraph::parse("1 0 3\n0 9\n"),
            Err(Error::GraphFormat { line: 2, .. })
        ));
        assert!(matches!(
            WeightedGraph::parse("2 1 3\n0 1\n0 2\n0 1\n"),
            Err(Error::GraphFormat { line: 3, .. })
        ));
    }

    proptest! {
        #[test]
        fn derived_graphs_stay_valid(n in 1usize..7, edge_bits in 0u32..1 << 15) {
            let mut edges = Vec::new();
            let mut bit = 0;
            for u in 0..n {
                for v in (u + 1)..n {
                    if edge_bits & (1 << bit) != 0 {
                        edges.push((u, v));
                    }
                    bit += 1;
                }
            }
            let g = WeightedGraph::new(n, edges, vec![1; n], 1).unwrap();
            prop_assert!(g.validate().is_ok());
            prop_assert!(g.square().validate().is_ok());
            if g.edge_count() > 0 {
                prop_assert!(g.line_graph().unwrap().validate().is_ok());
            }
        }
    }
}
