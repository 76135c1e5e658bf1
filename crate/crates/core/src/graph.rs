//! Metric multigraphs.
//!
//! A [`MetricGraph`] is a finite multigraph (loops and parallel edges
//! allowed) with a scalar length per edge. Edge ids are dense `0..E` and
//! every operation is deterministic in them. The validity notion is the
//! usual one for moduli of graphs: connected, every vertex of valence at
//! least 3 (a loop counts twice), and no separating edges.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::num::Length;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph<L> {
    vertex_count: usize,
    edges: Vec<Edge>,
    lengths: Vec<L>,
}

/// Outcome of the validity check, field by field so callers can report
/// exactly what failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub is_connected: bool,
    pub min_valence: usize,
    pub separating_edges: Vec<usize>,
    pub is_outer_space_point: bool,
}

/// A cycle subgraph: support is connected and every supported vertex has
/// valence exactly 2 inside the support.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleSubgraph<L> {
    pub edges: Vec<usize>,
    pub total_length: L,
}

/// Edge-id translation after a contraction: `map[old] = Some(new)`, with
/// `None` exactly at the contracted edge.
pub type EdgeIdMap = Vec<Option<usize>>;

impl<L: Length> MetricGraph<L> {
    /// Builds a graph from `(src, dst, length)` triples; the position in the
    /// slice is the edge id. Lengths must be nonnegative (zero is legal only
    /// transiently, e.g. for boundary bookkeeping).
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, L)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Degenerate("graph needs at least one vertex".into()));
        }
        let mut es = Vec::with_capacity(edges.len());
        let mut lengths = Vec::with_capacity(edges.len());
        for (id, (src, dst, len)) in edges.into_iter().enumerate() {
            if src >= vertex_count {
                return Err(Error::BadVertexId(src));
            }
            if dst >= vertex_count {
                return Err(Error::BadVertexId(dst));
            }
            if len.cmp_total(&L::zero()) == std::cmp::Ordering::Less {
                return Err(Error::NonPositiveLength(id));
            }
            es.push(Edge { src, dst });
            lengths.push(len);
        }
        Ok(MetricGraph { vertex_count, edges: es, lengths })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn length(&self, id: usize) -> &L {
        &self.lengths[id]
    }

    pub fn lengths(&self) -> &[L] {
        &self.lengths
    }

    pub fn with_lengths(&self, lengths: Vec<L>) -> Result<Self> {
        if lengths.len() != self.edge_count() {
            return Err(Error::ChainSize { got: lengths.len(), want: self.edge_count() });
        }
        Ok(MetricGraph { vertex_count: self.vertex_count, edges: self.edges.clone(), lengths })
    }

    pub fn map_lengths<M: Length>(&self, f: impl Fn(&L) -> M) -> MetricGraph<M> {
        MetricGraph {
            vertex_count: self.vertex_count,
            edges: self.edges.clone(),
            lengths: self.lengths.iter().map(f).collect(),
        }
    }

    /// Same underlying graph, lengths ignored.
    pub fn same_shape<M>(&self, other: &MetricGraph<M>) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }

    pub fn total_length(&self) -> L {
        self.lengths.iter().fold(L::zero(), |acc, l| acc + l.clone())
    }

    pub fn all_lengths_positive(&self) -> bool {
        self.lengths.iter().all(Length::is_positive)
    }

    /// Valence of every vertex; a loop contributes 2 to its vertex.
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0usize; self.vertex_count];
        for e in &self.edges {
            val[e.src] += 1;
            val[e.dst] += 1;
        }
        val
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.vertex_count];
        for (id, e) in self.edges.iter().enumerate() {
            adj[e.src].push((e.dst, id));
            if e.src != e.dst {
                adj[e.dst].push((e.src, id));
            }
        }
        adj
    }

    /// Number of connected components with the given edge ids removed
    /// (isolated vertices count as components).
    pub fn component_count_without(&self, removed: &[usize]) -> usize {
        let mut skip = vec![false; self.edge_count()];
        for &e in removed {
            skip[e] = true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut comps = 0;
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            comps += 1;
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                for &(w, id) in &adj[v] {
                    if !skip[id] && !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.component_count_without(&[]) <= 1
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn genus(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.edge_count() + 1 - self.vertex_count)
    }

    /// Separating edges (bridges) by iterative depth-first low-link, one
    /// pass per component. Loops and parallel edges are handled: neither is
    /// ever a bridge. Sorted by edge id.
    pub fn bridges(&self) -> Vec<usize> {
        let n = self.vertex_count;
        let adj = self.adjacency();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0usize;
        let mut out = Vec::new();

        // stack frames: (vertex, incoming edge id, adjacency cursor)
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(frame) = stack.len().checked_sub(1) {
                let (v, in_edge, cursor) = stack[frame];
                if cursor < adj[v].len() {
                    stack[frame].2 += 1;
                    let (w, id) = adj[v][cursor];
                    if id == in_edge || w == v {
                        continue; // the edge we arrived on, or a loop
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, id, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            out.push(in_edge);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Unordered pairs `{e, f}` such that removing either edge alone keeps
    /// the graph connected but removing both disconnects it. Requires a
    /// bridgeless input; brute force over pairs.
    pub fn separating_pairs(&self) -> Result<Vec<(usize, usize)>> {
        if let Some(&b) = self.bridges().first() {
            return Err(Error::BridgePresent(b));
        }
        let e = self.edge_count();
        let base = self.component_count_without(&[]);
        let mut out = Vec::new();
        for i in 0..e {
            for j in (i + 1)..e {
                if self.component_count_without(&[i, j]) > base {
                    out.push((i, j));
                }
            }
        }
        Ok(out)
    }

    /// Contracts a non-loop edge: its endpoints merge (keeping the smaller
    /// vertex id), vertex and edge ids re-densify preserving order. Returns
    /// the new graph and the old-to-new edge id map.
    pub fn contract_edge(&self, e: usize) -> Result<(Self, EdgeIdMap)> {
        if e >= self.edge_count() {
            return Err(Error::BadEdgeId(e));
        }
        let Edge { src, dst } = self.edges[e];
        if src == dst {
            return Err(Error::LoopContraction(e));
        }
        let (keep, gone) = (src.min(dst), src.max(dst));
        let remap_vertex = |v: usize| {
            if v == gone {
                keep
            } else if v > gone {
                v - 1
            } else {
                v
            }
        };
        let mut edges = Vec::with_capacity(self.edge_count() - 1);
        let mut lengths = Vec::with_capacity(self.edge_count() - 1);
        let mut id_map: EdgeIdMap = vec![None; self.edge_count()];
        for (id, edge) in self.edges.iter().enumerate() {
            if id == e {
                continue;
            }
            id_map[id] = Some(edges.len());
            edges.push(Edge { src: remap_vertex(edge.src), dst: remap_vertex(edge.dst) });
            lengths.push(self.lengths[id].clone());
        }
        let g = MetricGraph { vertex_count: self.vertex_count - 1, edges, lengths };
        Ok((g, id_map))
    }

    /// True when the edge ids form a cycle subgraph.
    pub fn is_cycle_edge_set(&self, ids: &[usize]) -> bool {
        if ids.is_empty() {
            return false;
        }
        let mut mask = 0u64;
        for &id in ids {
            if id >= self.edge_count() || mask & (1 << id) != 0 {
                return false;
            }
            mask |= 1 << id;
        }
        self.mask_is_cycle(mask)
    }

    fn mask_is_cycle(&self, mask: u64) -> bool {
        let mut val = vec![0usize; self.vertex_count];
        for (id, e) in self.edges.iter().enumerate() {
            if mask & (1 << id) != 0 {
                val[e.src] += 1;
                val[e.dst] += 1;
            }
        }
        if val.iter().any(|&v| v != 0 && v != 2) {
            return false;
        }
        // support must be a single component
        let Some(start) = self.edges.iter().enumerate().find_map(|(id, e)| {
            (mask & (1 << id) != 0).then_some(e.src)
        }) else {
            return false;
        };
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(w, id) in &adj[v] {
                if mask & (1 << id) != 0 && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        self.edges
            .iter()
            .enumerate()
            .all(|(id, e)| mask & (1 << id) == 0 || (seen[e.src] && seen[e.dst]))
    }

    /// All cycle subgraphs, by exhaustive search over edge subsets. Sorted
    /// by total length, ties broken by the lexicographic edge-id set.
    /// Exponential in `|E|`; intended for `|E| <= 16`.
    pub fn enumerate_cycles(&self) -> Vec<CycleSubgraph<L>> {
        let e = self.edge_count();
        assert!(e < 64, "cycle enumeration is a bitmask search over edge subsets");
        let mut out = Vec::new();
        for mask in 1u64..(1u64 << e) {
            if !self.mask_is_cycle(mask) {
                continue;
            }
            let ids: Vec<usize> = (0..e).filter(|&i| mask & (1 << i) != 0).collect();
            let total = ids.iter().fold(L::zero(), |acc, &i| acc + self.lengths[i].clone());
            out.push(CycleSubgraph { edges: ids, total_length: total });
        }
        out.sort_by(|a, b| {
            a.total_length
                .cmp_total(&b.total_length)
                .then_with(|| a.edges.cmp(&b.edges))
        });
        out
    }

    /// Length of a shortest cycle subgraph.
    pub fn systole(&self) -> Result<L> {
        if self.genus()? == 0 {
            return Err(Error::GenusZero);
        }
        Ok(self
            .enumerate_cycles()
            .into_iter()
            .next()
            .expect("positive genus graph has a cycle")
            .total_length)
    }

    /// Scales all lengths so they sum to one.
    pub fn normalize(&self) -> Result<Self> {
        let total = self.total_length();
        if !total.is_positive() {
            return Err(Error::ZeroTotalLength);
        }
        let lengths = self.lengths.iter().map(|l| l.clone() / total.clone()).collect();
        Ok(MetricGraph { vertex_count: self.vertex_count, edges: self.edges.clone(), lengths })
    }

    /// Connectivity, valence, and bridge checks in one report.
    pub fn validate_outer(&self) -> ValidityReport {
        let is_connected = self.is_connected();
        let min_valence = self.valences().into_iter().min().unwrap_or(0);
        let separating_edges = self.bridges();
        let is_outer_space_point =
            is_connected && min_valence >= 3 && separating_edges.is_empty();
        ValidityReport { is_connected, min_valence, separating_edges, is_outer_space_point }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{dumbbell as mk_dumbbell, k4 as mk_k4, theta};

    fn k4() -> MetricGraph<f64> {
        mk_k4([1.0; 6])
    }

    fn dumbbell() -> MetricGraph<f64> {
        mk_dumbbell(0.4, 0.4, 0.2)
    }

    #[test]
    fn validity_examples() {
        let t = theta(0.5, 0.3, 0.2);
        let r = t.validate_outer();
        assert!(r.is_outer_space_point);
        assert_eq!(r.min_valence, 3);

        let k = k4().validate_outer();
        assert!(k.is_outer_space_point);
        assert_eq!(k.min_valence, 3);

        // single loop: valence 2, fails
        let loop1 = MetricGraph::new(1, vec![(0, 0, 1.0)]).unwrap();
        let r = loop1.validate_outer();
        assert!(!r.is_outer_space_point);
        assert_eq!(r.min_valence, 2);

        // dumbbell: bridge fails it even though valences are 3
        let d = dumbbell().validate_outer();
        assert_eq!(d.min_valence, 3);
        assert_eq!(d.separating_edges, vec![2]);
        assert!(!d.is_outer_space_point);
    }

    #[test]
    fn genus_counts_independent_cycles() {
        assert_eq!(theta(0.5, 0.3, 0.2).genus().unwrap(), 2);
        assert_eq!(k4().genus().unwrap(), 3);
        let disconnected =
            MetricGraph::new(3, vec![(0, 1, 1.0)]).unwrap();
        assert_eq!(disconnected.genus(), Err(Error::Disconnected));
    }

    #[test]
    fn bridges_match_brute_force() {
        for g in [theta(0.5, 0.3, 0.2), k4(), dumbbell()] {
            let brute: Vec<usize> = (0..g.edge_count())
                .filter(|&e| g.component_count_without(&[e]) > g.component_count_without(&[]))
                .collect();
            assert_eq!(g.bridges(), brute);
        }
    }

    #[test]
    fn theta_has_no_separating_pairs() {
        // removing two of the three parallel edges still leaves one edge
        // joining both vertices, so the theta graph is 3-edge connected
        assert_eq!(theta(0.5, 0.3, 0.2).separating_pairs().unwrap(), vec![]);
        assert_eq!(k4().separating_pairs().unwrap(), vec![]);
    }

    #[test]
    fn triangle_pairs_and_banana_pair() {
        let triangle =
            MetricGraph::new(3, vec![(0, 1, 0.2), (1, 2, 0.3), (2, 0, 0.5)]).unwrap();
        assert_eq!(triangle.separating_pairs().unwrap(), vec![(0, 1), (0, 2), (1, 2)]);
        let banana = MetricGraph::new(2, vec![(0, 1, 0.5), (0, 1, 0.5)]).unwrap();
        assert_eq!(banana.separating_pairs().unwrap(), vec![(0, 1)]);
    }

    #[test]
    fn separating_pairs_requires_bridgeless() {
        assert!(matches!(
            dumbbell().separating_pairs(),
            Err(Error::BridgePresent(2))
        ));
    }

    #[test]
    fn contraction_merges_and_remaps() {
        let t = theta(0.5, 0.3, 0.2);
        let (g, map) = t.contract_edge(0).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 2);
        // surviving edges become loops with ids shifted down
        assert_eq!(map, vec![None, Some(0), Some(1)]);
        assert_eq!(g.edge(0), Edge { src: 0, dst: 0 });
        assert_eq!(*g.length(0), 0.3);
        assert_eq!(t.contract_edge(0).unwrap().0.genus().unwrap(), 2);

        let loop1 = MetricGraph::new(1, vec![(0, 0, 1.0)]).unwrap();
        assert_eq!(loop1.contract_edge(0), Err(Error::LoopContraction(0)));
    }

    #[test]
    fn cycle_enumeration_on_k4() {
        // 4 triangles + 3 quadrilaterals
        let cycles = k4().enumerate_cycles();
        assert_eq!(cycles.len(), 7);
        assert!(cycles[..4].iter().all(|c| c.edges.len() == 3));
        assert!(cycles[4..].iter().all(|c| c.edges.len() == 4));
        // ties broken lexicographically
        assert_eq!(cycles[0].edges, vec![0, 1, 3]);
    }

    #[test]
    fn theta_cycles_and_systole() {
        let t = theta(0.5, 0.3, 0.2);
        let cycles = t.enumerate_cycles();
        let sets: Vec<Vec<usize>> = cycles.iter().map(|c| c.edges.clone()).collect();
        assert_eq!(sets, vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
        assert_eq!(t.systole().unwrap(), 0.5);
        // loops are cycles on their own
        let rose = MetricGraph::new(1, vec![(0, 0, 0.6), (0, 0, 0.4)]).unwrap();
        assert_eq!(rose.enumerate_cycles().len(), 2);
        assert!(rose.is_cycle_edge_set(&[0]));
        assert!(!rose.is_cycle_edge_set(&[]));
    }

    #[test]
    fn normalize_scales_to_unit_total() {
        let g = theta(1.0, 2.0, 5.0).normalize().unwrap();
        assert_eq!(g.total_length(), 1.0);
        assert_eq!(*g.length(2), 0.625);
        let zero = MetricGraph::new(1, Vec::<(usize, usize, f64)>::new()).unwrap();
        assert_eq!(zero.normalize(), Err(Error::ZeroTotalLength));
    }
}
