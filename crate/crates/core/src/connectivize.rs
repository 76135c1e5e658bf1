//! C1-sets, edge connectivizations, and the tropical Torelli test.
//!
//! Two metric graphs have the same tropical Jacobian exactly when their
//! 3-edge connectivizations are cyclically equivalent. The quotient is
//! reached by contracting bridges (operation A) and then one edge of a
//! separating pair at a time (operation B); its edge lengths are not the
//! surviving lengths but sums over C1-sets of the input, which is what
//! makes the quotient a complete invariant.
//!
//! Everything here works for any `Length`, but the decision procedures
//! compare lengths by exact equality, so rational lengths are the intended
//! instantiation (the CLI converts doubles exactly).

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeIdMap, MetricGraph};
use crate::num::Length;

/// An edge subset `S` with `Γ(S)` a cycle and `Γ−S` bridgeless. Edge ids
/// refer to the ambient graph and are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C1Set {
    pub edges: Vec<usize>,
}

/// Result of 3-edge connectivization: the quotient, the C1-sets of the
/// input, and the class-to-quotient-edge bijection carrying the length
/// transport.
#[derive(Debug, Clone)]
pub struct Connectivization<L> {
    /// Bridgeless quotient with no separating pairs; lengths are C1-set sums.
    pub quotient: MetricGraph<L>,
    /// C1-sets of the input (of its 2-edge connectivization when the input
    /// has bridges), in original edge ids, sorted by smallest member.
    pub classes: Vec<C1Set>,
    /// `classes[i]` corresponds to quotient edge `class_to_quotient[i]`;
    /// a permutation of the quotient edge ids.
    pub class_to_quotient: Vec<usize>,
    /// Original edge id to quotient edge id; `None` on contracted edges.
    pub edge_map: EdgeIdMap,
}

/// A length-preserving edge bijection mapping cycle subgraphs onto cycle
/// subgraphs; the witness format for cyclic equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeBijection {
    forward: Vec<usize>,
}

impl EdgeBijection {
    pub fn new(forward: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; forward.len()];
        for &t in &forward {
            if t >= forward.len() || seen[t] {
                return Err(Error::Invalid("edge map is not a bijection".into()));
            }
            seen[t] = true;
        }
        Ok(EdgeBijection { forward })
    }

    pub fn map(&self, edge: usize) -> usize {
        self.forward[edge]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.forward
    }

    /// Re-verifies the defining properties against a concrete pair of
    /// graphs: lengths preserved, cycle subgraphs carried onto cycle
    /// subgraphs bijectively.
    pub fn is_witness<L: Length>(&self, g1: &MetricGraph<L>, g2: &MetricGraph<L>) -> bool {
        if self.forward.len() != g1.edge_count() || g1.edge_count() != g2.edge_count() {
            return false;
        }
        if (0..g1.edge_count()).any(|e| g1.length(e) != g2.length(self.forward[e])) {
            return false;
        }
        let cycles1 = g1.enumerate_cycles();
        let cycles2: HashSet<Vec<usize>> = g2
            .enumerate_cycles()
            .into_iter()
            .map(|c| c.edges)
            .collect();
        if cycles1.len() != cycles2.len() {
            return false;
        }
        cycles1.iter().all(|c| {
            let mut image: Vec<usize> = c.edges.iter().map(|&e| self.forward[e]).collect();
            image.sort_unstable();
            cycles2.contains(&image)
        })
    }
}

/// Contracts every component of `g − s` to a point and re-attaches the
/// edges of `s`. Result edge `i` is the `i`-th smallest id in `s`, with its
/// length kept.
pub fn contracted_complement<L: Length>(
    g: &MetricGraph<L>,
    s: &[usize],
) -> Result<MetricGraph<L>> {
    let s = checked_subset(g, s)?;
    let comp = component_labels(g, &s);
    let nv = comp.iter().copied().max().map_or(0, |m| m + 1);
    let edges = s
        .iter()
        .map(|&e| {
            let ends = g.edge(e);
            (comp[ends.src], comp[ends.dst], g.length(e).clone())
        })
        .collect();
    MetricGraph::new(nv, edges)
}

/// True when `s` is a C1-set: the contracted complement is a cycle and
/// `g − s` has no bridge. Requires `g` connected and bridgeless.
pub fn is_c1_set<L: Length>(g: &MetricGraph<L>, s: &[usize]) -> Result<bool> {
    require_bridgeless(g)?;
    let s = checked_subset(g, s)?;
    if !minus(g, &s).bridges().is_empty() {
        return Ok(false);
    }
    let cc = contracted_complement(g, &s)?;
    Ok(cc.is_connected() && cc.valences().iter().all(|&v| v == 2))
}

/// All C1-sets, by exhaustive subset search (the per-subset test exits
/// early, which is all the pruning desk-scale graphs need). The sets are
/// checked to partition the edges and come back sorted by smallest member.
pub fn c1_sets<L: Length>(g: &MetricGraph<L>) -> Result<Vec<C1Set>> {
    require_bridgeless(g)?;
    let m = g.edge_count();
    assert!(m < 64, "C1-set search enumerates edge subsets");
    let mut found: Vec<C1Set> = Vec::new();
    for mask in 1u64..(1u64 << m) {
        let s: Vec<usize> = (0..m).filter(|&e| mask & (1 << e) != 0).collect();
        if is_c1_set(g, &s)? {
            found.push(C1Set { edges: s });
        }
    }
    let mut cover = vec![0usize; m];
    for set in &found {
        for &e in &set.edges {
            cover[e] += 1;
        }
    }
    if cover.iter().any(|&c| c != 1) {
        return Err(Error::Internal(
            "C1-sets do not partition the edge set".into(),
        ));
    }
    found.sort_by_key(|s| s.edges[0]);
    Ok(found)
}

/// Contracts bridges until none remain (operation A iterated). Returns the
/// quotient and the original-to-quotient edge id map (`None` on contracted
/// bridges). Genus is preserved since bridges lie on no cycle.
pub fn two_edge_connectivize<L: Length>(
    g: &MetricGraph<L>,
) -> Result<(MetricGraph<L>, EdgeIdMap)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut h = g.clone();
    let mut map: EdgeIdMap = (0..g.edge_count()).map(Some).collect();
    loop {
        let bridges = h.bridges();
        let Some(&b) = bridges.first() else { break };
        let (next, step) = h.contract_edge(b)?;
        compose(&mut map, &step);
        h = next;
    }
    Ok((h, map))
}

/// Operation (B) with the deterministic choice: always the smaller edge of
/// the lexicographically smallest separating pair.
pub fn three_edge_connectivize<L: Length>(g: &MetricGraph<L>) -> Result<Connectivization<L>> {
    three_edge_connectivize_with(g, |_| (0, false))
}

/// Operation (B) with an injectable choice of which pair to split, for
/// order-independence experiments. `choose` receives the sorted nonempty
/// pair list and returns `(pair index, contract the larger member)`. All
/// choices land in the same cyclic-equivalence class.
pub fn three_edge_connectivize_with<L, F>(
    g: &MetricGraph<L>,
    mut choose: F,
) -> Result<Connectivization<L>>
where
    L: Length,
    F: FnMut(&[(usize, usize)]) -> (usize, bool),
{
    let (two, map_two) = two_edge_connectivize(g)?;
    let mut h = two.clone();
    let mut map = map_two.clone();
    loop {
        let pairs = h.separating_pairs()?;
        if pairs.is_empty() {
            break;
        }
        let (idx, larger) = choose(&pairs);
        let pair = pairs[idx];
        let target = if larger { pair.1 } else { pair.0 };
        let (next, step) = h.contract_edge(target)?;
        compose(&mut map, &step);
        h = next;
    }

    // C1-sets of the bridgeless stage, pulled back to original edge ids.
    let back: Vec<usize> = invert_map(&map_two, two.edge_count());
    let classes: Vec<C1Set> = c1_sets(&two)?
        .into_iter()
        .map(|s| C1Set { edges: s.edges.iter().map(|&e| back[e]).collect() })
        .collect();

    // Each class must survive in exactly one quotient edge (the canonical
    // bijection); quotient lengths are the class sums in the input.
    let mut class_to_quotient = Vec::with_capacity(classes.len());
    let mut lengths = h.lengths().to_vec();
    let mut hit = vec![false; h.edge_count()];
    for class in &classes {
        let survivors: HashSet<usize> =
            class.edges.iter().filter_map(|&e| map[e]).collect();
        if survivors.len() != 1 {
            return Err(Error::Internal(format!(
                "C1-set {:?} survives in {} quotient edges",
                class.edges,
                survivors.len()
            )));
        }
        let q = *survivors.iter().next().expect("nonempty");
        if std::mem::replace(&mut hit[q], true) {
            return Err(Error::Internal(format!(
                "quotient edge {q} corresponds to two C1-sets"
            )));
        }
        class_to_quotient.push(q);
        lengths[q] = class
            .edges
            .iter()
            .fold(L::zero(), |acc, &e| acc + g.length(e).clone());
    }
    if !hit.iter().all(|&b| b) {
        return Err(Error::Internal(
            "a quotient edge corresponds to no C1-set".into(),
        ));
    }
    let quotient = h.with_lengths(lengths)?;
    if quotient.genus()? != g.genus()? {
        return Err(Error::Internal("connectivization changed the genus".into()));
    }
    Ok(Connectivization { quotient, classes, class_to_quotient, edge_map: map })
}

/// Searches for a length-preserving edge bijection carrying the cycle
/// subgraphs of `g1` exactly onto those of `g2`. Returns the
/// lexicographically first witness (by image of edge 0, then 1, ...) or
/// `None` conclusively. Brute force within equal-length groups; intended
/// for desk scale (`|E| <= 12`).
pub fn cyclically_equivalent<L: Length>(
    g1: &MetricGraph<L>,
    g2: &MetricGraph<L>,
) -> Result<Option<EdgeBijection>> {
    for g in [g1, g2] {
        if !g.all_lengths_positive() {
            return Err(Error::Invalid(
                "cyclic equivalence needs positive edge lengths".into(),
            ));
        }
    }
    let m = g1.edge_count();
    if g2.edge_count() != m {
        return Ok(None);
    }
    if m == 0 {
        return Ok(Some(EdgeBijection { forward: vec![] }));
    }
    if !same_length_multiset(g1, g2) {
        return Ok(None);
    }
    let cycles1 = g1.enumerate_cycles();
    let cycles2 = g2.enumerate_cycles();
    if cycles1.len() != cycles2.len() {
        return Ok(None);
    }
    let targets: HashSet<Vec<usize>> = cycles2.into_iter().map(|c| c.edges).collect();
    // cycles become checkable once their highest edge is assigned
    let mut closing: Vec<Vec<&[usize]>> = vec![Vec::new(); m];
    for c in &cycles1 {
        closing[*c.edges.last().expect("cycles are nonempty")].push(&c.edges);
    }

    let mut forward = vec![usize::MAX; m];
    let mut used = vec![false; m];
    if assign(0, g1, g2, &mut forward, &mut used, &closing, &targets) {
        return Ok(Some(EdgeBijection { forward }));
    }
    Ok(None)
}

fn assign<L: Length>(
    e: usize,
    g1: &MetricGraph<L>,
    g2: &MetricGraph<L>,
    forward: &mut Vec<usize>,
    used: &mut Vec<bool>,
    closing: &[Vec<&[usize]>],
    targets: &HashSet<Vec<usize>>,
) -> bool {
    if e == g1.edge_count() {
        return true;
    }
    for t in 0..g2.edge_count() {
        if used[t] || g1.length(e) != g2.length(t) {
            continue;
        }
        forward[e] = t;
        used[t] = true;
        let ok = closing[e].iter().all(|cycle| {
            let mut image: Vec<usize> = cycle.iter().map(|&x| forward[x]).collect();
            image.sort_unstable();
            targets.contains(&image)
        });
        if ok && assign(e + 1, g1, g2, forward, used, closing, targets) {
            return true;
        }
        used[t] = false;
        forward[e] = usize::MAX;
    }
    false
}

/// Outcome of the Torelli decision: quotients compared by cyclic
/// equivalence, with the witness when equal.
#[derive(Debug, Clone)]
pub struct TorelliOutcome<L> {
    pub equal: bool,
    pub witness: Option<EdgeBijection>,
    pub quotients: (MetricGraph<L>, MetricGraph<L>),
}

/// Decides whether two graphs have the same tropical Jacobian: 3-edge
/// connectivize both, then test cyclic equivalence of the quotients.
pub fn tropical_torelli_equal<L: Length>(
    g1: &MetricGraph<L>,
    g2: &MetricGraph<L>,
) -> Result<TorelliOutcome<L>> {
    let q1 = three_edge_connectivize(g1)?.quotient;
    let q2 = three_edge_connectivize(g2)?.quotient;
    let witness = cyclically_equivalent(&q1, &q2)?;
    Ok(TorelliOutcome { equal: witness.is_some(), witness, quotients: (q1, q2) })
}

fn checked_subset<L: Length>(g: &MetricGraph<L>, s: &[usize]) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(Error::Degenerate("edge subset is empty".into()));
    }
    let mut s = s.to_vec();
    s.sort_unstable();
    for w in s.windows(2) {
        if w[0] == w[1] {
            return Err(Error::BadEdgeId(w[0]));
        }
    }
    if *s.last().expect("nonempty") >= g.edge_count() {
        return Err(Error::BadEdgeId(*s.last().expect("nonempty")));
    }
    Ok(s)
}

fn require_bridgeless<L: Length>(g: &MetricGraph<L>) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(&b) = g.bridges().first() {
        return Err(Error::BridgePresent(b));
    }
    Ok(())
}

/// Component index of every vertex in `g − s`, numbered by first visit in
/// vertex order.
fn component_labels<L: Length>(g: &MetricGraph<L>, s: &[usize]) -> Vec<usize> {
    let skip: HashSet<usize> = s.iter().copied().collect();
    let mut label = vec![usize::MAX; g.vertex_count()];
    let mut next = 0;
    for start in 0..g.vertex_count() {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for (id, edge) in g.edges().iter().enumerate() {
                if skip.contains(&id) {
                    continue;
                }
                for (a, b) in [(edge.src, edge.dst), (edge.dst, edge.src)] {
                    if a == v && label[b] == usize::MAX {
                        label[b] = next;
                        stack.push(b);
                    }
                }
            }
        }
        next += 1;
    }
    label
}

/// `g` with the edges of `s` deleted (vertices kept).
fn minus<L: Length>(g: &MetricGraph<L>, s: &[usize]) -> MetricGraph<L> {
    let skip: HashSet<usize> = s.iter().copied().collect();
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(id, _)| !skip.contains(id))
        .map(|(id, e)| (e.src, e.dst, g.length(id).clone()))
        .collect();
    MetricGraph::new(g.vertex_count(), edges).expect("subgraph of a valid graph")
}

/// Composes an accumulated id map with one contraction step.
fn compose(map: &mut EdgeIdMap, step: &EdgeIdMap) {
    for slot in map.iter_mut() {
        *slot = slot.and_then(|mid| step[mid]);
    }
}

/// Inverse of an injective-on-survivors id map: quotient id to original id.
fn invert_map(map: &EdgeIdMap, quotient_edges: usize) -> Vec<usize> {
    let mut back = vec![usize::MAX; quotient_edges];
    for (orig, slot) in map.iter().enumerate() {
        if let Some(q) = *slot {
            back[q] = orig;
        }
    }
    back
}

fn same_length_multiset<L: Length>(g1: &MetricGraph<L>, g2: &MetricGraph<L>) -> bool {
    let mut a = g1.lengths().to_vec();
    let mut b = g2.lengths().to_vec();
    a.sort_by(|x, y| x.cmp_total(y));
    b.sort_by(|x, y| x.cmp_total(y));
    a == b
}
