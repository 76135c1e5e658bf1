//! Named graphs used throughout tests, the report runner, and examples.

use crate::graph::MetricGraph;
use crate::num::Length;

/// Two vertices joined by three parallel edges.
pub fn theta<L: Length>(a: L, b: L, c: L) -> MetricGraph<L> {
    MetricGraph::new(2, vec![(0, 1, a), (0, 1, b), (0, 1, c)]).expect("theta is well formed")
}

/// One vertex with a loop per length.
pub fn rose<L: Length>(lengths: Vec<L>) -> MetricGraph<L> {
    let edges = lengths.into_iter().map(|l| (0, 0, l)).collect();
    MetricGraph::new(1, edges).expect("rose is well formed")
}

/// Two vertices joined by two parallel edges.
pub fn banana<L: Length>(a: L, b: L) -> MetricGraph<L> {
    MetricGraph::new(2, vec![(0, 1, a), (0, 1, b)]).expect("banana is well formed")
}

/// Loops `l1` at vertex 0 and `l2` at vertex 1, joined by parallel edges
/// `f1`, `f2`. Edge ids: 0 = l1, 1 = l2, 2 = f1, 3 = f2.
pub fn looped_banana<L: Length>(l1: L, l2: L, f1: L, f2: L) -> MetricGraph<L> {
    MetricGraph::new(2, vec![(0, 0, l1), (1, 1, l2), (0, 1, f1), (0, 1, f2)])
        .expect("looped banana is well formed")
}

/// Cycle on `lengths.len()` vertices (a triangle for three lengths).
pub fn circle<L: Length>(lengths: Vec<L>) -> MetricGraph<L> {
    let n = lengths.len();
    assert!(n >= 1);
    let edges = lengths
        .into_iter()
        .enumerate()
        .map(|(i, l)| (i, (i + 1) % n, l))
        .collect();
    MetricGraph::new(n, edges).expect("circle is well formed")
}

/// Complete graph on four vertices. Edge order:
/// 01, 02, 03, 12, 13, 23.
pub fn k4<L: Length>(lengths: [L; 6]) -> MetricGraph<L> {
    let [a, b, c, d, e, f] = lengths;
    MetricGraph::new(
        4,
        vec![(0, 1, a), (0, 2, b), (0, 3, c), (1, 2, d), (1, 3, e), (2, 3, f)],
    )
    .expect("k4 is well formed")
}

/// Equilateral K4 with total length one.
pub fn k4_uniform() -> MetricGraph<f64> {
    let s = 1.0 / 6.0;
    k4([s; 6])
}

/// Two loops joined by a bridge; the standard example failing validity.
pub fn dumbbell<L: Length>(l1: L, l2: L, bridge: L) -> MetricGraph<L> {
    MetricGraph::new(2, vec![(0, 0, l1), (1, 1, l2), (0, 1, bridge)])
        .expect("dumbbell is well formed")
}
