//! Seeded random generators for stress tests and the acceptance report.
//!
//! Everything funnels through one ChaCha8 stream so a single seed pins the
//! whole sample. Graph shapes come from rejection sampling against the
//! validity conditions, which keeps the distribution honest: any valid
//! shape within the size bounds can appear.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::MetricGraph;
use crate::homology::{cycle_basis, Marking};
use crate::mat::Mat;
use crate::num::Rat;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        xs.shuffle(&mut self.rng);
    }

    /// Positive lengths summing to one, bounded away from the faces.
    pub fn lengths(&mut self, m: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..m).map(|_| self.uniform(0.05, 1.0)).collect();
        let s: f64 = raw.iter().sum();
        raw.iter().map(|x| x / s).collect()
    }

    /// Positive rational lengths with small denominators summing to one.
    pub fn rat_lengths(&mut self, m: usize) -> Vec<Rat> {
        let raw: Vec<Rat> = (0..m)
            .map(|_| Rat::new((self.index(40) as i64 + 1).into(), (self.index(9) as i64 + 1).into()))
            .collect();
        let total: Rat = raw.iter().cloned().sum();
        raw.into_iter().map(|x| x / total.clone()).collect()
    }

    /// A valid shape (connected, min valence 3, bridgeless) with genus in
    /// `gmin..=gmax`, at most 10 edges, unit total length.
    pub fn graph(&mut self, gmin: usize, gmax: usize) -> MetricGraph<f64> {
        self.graph_where(gmin, gmax, |_| true)
    }

    /// A valid shape that also has no separating edge pairs, i.e. is
    /// 3-edge connected.
    pub fn three_edge_connected_graph(&mut self, gmin: usize, gmax: usize) -> MetricGraph<f64> {
        // valid shapes are bridgeless, so separating_pairs cannot error
        self.graph_where(gmin, gmax, |g| {
            g.separating_pairs().map_or(false, |pairs| pairs.is_empty())
        })
    }

    fn graph_where(
        &mut self,
        gmin: usize,
        gmax: usize,
        keep: impl Fn(&MetricGraph<f64>) -> bool,
    ) -> MetricGraph<f64> {
        assert!((2..=4).contains(&gmin) && gmin <= gmax && gmax <= 4);
        loop {
            let genus = gmin + self.index(gmax - gmin + 1);
            // valence >= 3 forces |V| <= 2 genus - 2
            let vertices = 1 + self.index(2 * genus - 2);
            let edges = vertices + genus - 1;
            if edges > 10 {
                continue;
            }
            let triples: Vec<(usize, usize, f64)> = (0..edges)
                .map(|_| (self.index(vertices), self.index(vertices), 1.0))
                .collect();
            let Ok(shape) = MetricGraph::new(vertices, triples) else {
                continue;
            };
            if !shape.validate_outer().is_outer_space_point || !keep(&shape) {
                continue;
            }
            let lengths = self.lengths(edges);
            return shape.with_lengths(lengths).expect("positive lengths");
        }
    }

    /// Re-lengths a shape with exact rationals.
    pub fn with_rat_lengths(&mut self, g: &MetricGraph<f64>) -> MetricGraph<Rat> {
        let lengths = self.rat_lengths(g.edge_count());
        let triples: Vec<(usize, usize, Rat)> = (0..g.edge_count())
            .map(|e| {
                let edge = g.edge(e);
                (edge.src, edge.dst, lengths[e].clone())
            })
            .collect();
        MetricGraph::new(g.vertex_count(), triples).expect("same shape")
    }

    /// A unimodular integer matrix: `ops` random elementary row operations
    /// applied to the identity, entries kept within `cap`.
    pub fn unimodular(&mut self, n: usize, ops: usize, cap: i64) -> Vec<Vec<i64>> {
        let mut u: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut done = 0;
        while done < ops {
            match self.index(3) {
                0 => {
                    let i = self.index(n);
                    let j = self.index(n);
                    if i == j {
                        continue;
                    }
                    let sign = if self.index(2) == 0 { 1 } else { -1 };
                    let candidate: Vec<i64> =
                        (0..n).map(|c| u[j][c] + sign * u[i][c]).collect();
                    if candidate.iter().any(|x| x.abs() > cap) {
                        continue;
                    }
                    u[j] = candidate;
                }
                1 => {
                    let i = self.index(n);
                    for x in &mut u[i] {
                        *x = -*x;
                    }
                }
                _ => {
                    let i = self.index(n);
                    let j = self.index(n);
                    u.swap(i, j);
                }
            }
            done += 1;
        }
        u
    }

    /// A marking of `g`: the fundamental cycle basis composed with a
    /// random unimodular change of basis.
    pub fn marking(&mut self, g: &MetricGraph<f64>) -> Result<Marking> {
        let base = cycle_basis(g)?;
        let n = base.genus();
        let u = self.unimodular(n, 6, 8);
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..g.edge_count())
                    .map(|e| (0..n).map(|k| u[i][k] * base.basis()[k][e]).sum())
                    .collect()
            })
            .collect();
        Marking::new(g, rows)
    }

    /// A random symmetric positive definite matrix with eigenvalues
    /// bounded away from zero.
    pub fn spd(&mut self, n: usize) -> Mat {
        let a = Mat::from_rows(
            &(0..n)
                .map(|_| (0..n).map(|_| self.uniform(-1.0, 1.0)).collect())
                .collect::<Vec<_>>(),
        );
        let sym = a.transpose().mul(&a);
        let bump = Mat::from_rows(
            &(0..n)
                .map(|i| (0..n).map(|j| if i == j { 0.1 } else { 0.0 }).collect())
                .collect::<Vec<_>>(),
        );
        sym.add(&bump)
    }

    /// Multiplies every length by `1 + delta` with `|delta| <= scale`,
    /// then renormalizes to unit total length. The shape is unchanged; the
    /// point moves.
    pub fn perturb_lengths(&mut self, g: &MetricGraph<f64>, scale: f64) -> MetricGraph<f64> {
        let jittered: Vec<f64> = g
            .lengths()
            .iter()
            .map(|l| l * (1.0 + self.uniform(-scale, scale)))
            .collect();
        let total: f64 = jittered.iter().sum();
        g.with_lengths(jittered.iter().map(|l| l / total).collect())
            .expect("positive lengths stay positive under small jitter")
    }

    /// A random decision function for connectivization order tests: picks
    /// a candidate index and a coin flip per call, deterministically from
    /// the seed.
    pub fn order_chooser(&mut self) -> impl FnMut(&[(usize, usize)]) -> (usize, bool) + '_ {
        move |options: &[(usize, usize)]| {
            let k = self.index(options.len().max(1));
            (k, self.index(2) == 0)
        }
    }
}

/// Convenience: `count` graphs from one seed.
pub fn graphs(seed: u64, count: usize, gmin: usize, gmax: usize) -> Vec<MetricGraph<f64>> {
    let mut gen = Gen::new(seed);
    (0..count).map(|_| gen.graph(gmin, gmax)).collect()
}

impl Gen {
    /// Validation helper used by tests: draws until a marking succeeds
    /// (cycle_basis can only fail on disconnected graphs, which `graph`
    /// never produces, so this is a formality).
    pub fn marked_graph(&mut self, gmin: usize, gmax: usize) -> (MetricGraph<f64>, Marking) {
        loop {
            let g = self.graph(gmin, gmax);
            if let Ok(m) = self.marking(&g) {
                return (g, m);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Length;
    use crate::snf::{det_int, int_mat};

    #[test]
    fn graphs_are_valid_and_sized() {
        let mut gen = Gen::new(7);
        for _ in 0..50 {
            let g = gen.graph(2, 4);
            let report = g.validate_outer();
            assert!(report.is_outer_space_point);
            assert!(g.edge_count() <= 10);
            let genus = g.genus().unwrap();
            assert!((2..=4).contains(&genus));
            let total: f64 = g.lengths().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn three_edge_connected_graphs_have_no_separating_pairs() {
        let mut gen = Gen::new(11);
        for _ in 0..20 {
            let g = gen.three_edge_connected_graph(2, 3);
            assert!(g.separating_pairs().unwrap().is_empty());
            assert!(g.bridges().is_empty());
        }
    }

    #[test]
    fn unimodular_matrices_have_unit_determinant() {
        let mut gen = Gen::new(3);
        for n in 2..=4 {
            for _ in 0..20 {
                let u = gen.unimodular(n, 8, 9);
                let d = det_int(&int_mat(&u));
                assert_eq!(num::Signed::abs(&d), 1i64.into());
            }
        }
    }

    #[test]
    fn markings_are_cycle_lattice_bases() {
        let mut gen = Gen::new(5);
        for _ in 0..20 {
            let (g, m) = gen.marked_graph(2, 3);
            assert_eq!(m.basis()[0].len(), g.edge_count());
            assert!(m.is_cycle_lattice_basis());
        }
    }

    #[test]
    fn spd_samples_are_positive_definite() {
        let mut gen = Gen::new(9);
        for _ in 0..20 {
            let y = gen.spd(3);
            assert!(y.cholesky().is_some());
        }
    }

    #[test]
    fn seeding_is_reproducible() {
        let a = graphs(42, 5, 2, 4);
        let b = graphs(42, 5, 2, 4);
        assert_eq!(a, b);
        let mut g1 = Gen::new(1);
        let mut g2 = Gen::new(2);
        assert_ne!(g1.lengths(4), g2.lengths(4));
    }

    #[test]
    fn rat_lengths_sum_to_one_exactly() {
        let mut gen = Gen::new(13);
        let ls = gen.rat_lengths(5);
        let total: Rat = ls.iter().cloned().sum();
        assert_eq!(total, Rat::from_int(1));
        assert!(ls.iter().all(|l| crate::num::Length::is_positive(l)));
    }
}
