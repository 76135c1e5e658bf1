//! Property tests: the structural invariants that should hold on any
//! input, exercised over generated graphs, matrices, and polynomials.

use proptest::prelude::*;

use trop_core::connectivize::{c1_sets, three_edge_connectivize_with};
use trop_core::graph::MetricGraph;
use trop_core::homology::{change_marking, cycle_basis, period_matrix_f64};
use trop_core::num::Rat;
use trop_core::random::Gen;
use trop_core::spd::{d_inv, tensor_eval, SpdPoint};
use trop_core::tropical::{check_balancing, Monomial, TropicalPolynomial2};

/// Brute-force bridge detection: an edge is a bridge when removing it
/// disconnects the graph.
fn bridges_brute(g: &MetricGraph<f64>) -> Vec<usize> {
    (0..g.edge_count())
        .filter(|&e| {
            let edge = g.edge(e);
            edge.src != edge.dst && g.component_count_without(&[e]) > 1
        })
        .collect()
}

fn arb_multigraph() -> impl Strategy<Value = MetricGraph<f64>> {
    (1usize..6, proptest::collection::vec((0usize..6, 0usize..6), 1..10)).prop_map(
        |(extra_vertices, pairs)| {
            let vertices = extra_vertices
                .max(pairs.iter().map(|&(s, d)| s.max(d) + 1).max().unwrap_or(1));
            let triples: Vec<(usize, usize, f64)> =
                pairs.into_iter().map(|(s, d)| (s, d, 1.0)).collect();
            MetricGraph::new(vertices, triples).expect("nonnegative lengths")
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bridges_match_brute_force(g in arb_multigraph()) {
        prop_assume!(g.is_connected());
        let mut fast = g.bridges();
        fast.sort_unstable();
        prop_assert_eq!(fast, bridges_brute(&g));
    }

    #[test]
    fn genus_survives_contraction(g in arb_multigraph(), pick in 0usize..16) {
        prop_assume!(g.is_connected());
        let non_loops: Vec<usize> = (0..g.edge_count())
            .filter(|&e| g.edge(e).src != g.edge(e).dst)
            .collect();
        prop_assume!(!non_loops.is_empty());
        let e = non_loops[pick % non_loops.len()];
        let (h, _) = g.contract_edge(e).unwrap();
        prop_assert_eq!(h.genus().unwrap(), g.genus().unwrap());
    }

    #[test]
    fn invariant_distance_is_a_metric(seed in 0u64..1000) {
        let mut gen = Gen::new(seed);
        let n = 2 + (seed % 3) as usize;
        let a = SpdPoint::new(gen.spd(n)).unwrap();
        let b = SpdPoint::new(gen.spd(n)).unwrap();
        let c = SpdPoint::new(gen.spd(n)).unwrap();
        let ab = d_inv(&a, &b).unwrap();
        let ba = d_inv(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-9 * (1.0 + ab.abs()));
        prop_assert!(d_inv(&a, &a).unwrap().abs() <= 1e-9);
        let ac = d_inv(&a, &c).unwrap();
        let cb = d_inv(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-9);
    }

    #[test]
    fn tensor_eval_is_symmetric_bilinear(seed in 0u64..500) {
        let mut gen = Gen::new(seed);
        let y = SpdPoint::new(gen.spd(3)).unwrap();
        let h1 = gen.spd(3).symmetrized();
        let h2 = gen.spd(3).symmetrized();
        let fwd = tensor_eval(&y, &h1, &h2).unwrap();
        let bwd = tensor_eval(&y, &h2, &h1).unwrap();
        prop_assert!((fwd - bwd).abs() <= 1e-9 * (1.0 + fwd.abs()));
        let diag = tensor_eval(&y, &h1, &h1).unwrap();
        prop_assert!(diag > 0.0);
    }

    #[test]
    fn period_matrix_transforms_by_congruence(seed in 0u64..300) {
        let mut gen = Gen::new(seed);
        let (g, m) = gen.marked_graph(2, 3);
        let p = period_matrix_f64(&g, &m).unwrap();
        prop_assert!(p.is_symmetric(1e-12));

        let base = cycle_basis(&g).unwrap();
        let pb = period_matrix_f64(&g, &base).unwrap();
        // m = U * base for an integer U; the periods differ by congruence
        let u = solve_change(&base, &m);
        let moved = change_marking(&pb, &u).unwrap();
        prop_assert!(moved.sub(&p).max_abs() <= 1e-9);
    }

    #[test]
    fn c1_sets_partition_the_edges(seed in 0u64..200) {
        let mut gen = Gen::new(seed);
        let g = gen.graph(2, 4);
        let sets = c1_sets(&g).unwrap();
        let mut seen = vec![false; g.edge_count()];
        for s in &sets {
            for &e in &s.edges {
                prop_assert!(!seen[e], "edge {} in two C1-sets", e);
                seen[e] = true;
            }
        }
        prop_assert!(seen.iter().all(|&x| x));
    }

    #[test]
    fn connectivization_is_order_independent(seed in 0u64..100) {
        let mut gen = Gen::new(seed);
        let shape = gen.graph(2, 4);
        let g = gen.with_rat_lengths(&shape);
        let a = three_edge_connectivize_with(&g, gen.order_chooser()).unwrap();
        let b = three_edge_connectivize_with(&g, gen.order_chooser()).unwrap();
        prop_assert_eq!(a.quotient.genus().unwrap(), g.genus().unwrap());
        let equivalent =
            trop_core::connectivize::cyclically_equivalent(&a.quotient, &b.quotient)
                .unwrap()
                .is_some();
        prop_assert!(equivalent);
    }

    #[test]
    fn corner_locus_is_affine_invariant(seed in 0u64..200, dj in -3i64..4, dk in -3i64..4, shift in -5i64..6) {
        let mut gen = Gen::new(seed);
        let count = 3 + gen.index(3);
        let mut terms = Vec::new();
        for _ in 0..count {
            let j = gen.index(5) as i64 - 1;
            let k = gen.index(5) as i64 - 1;
            if terms.iter().any(|t: &Monomial| (t.j, t.k) == (j, k)) {
                continue;
            }
            let a = Rat::new((gen.index(11) as i64 - 5).into(), (gen.index(3) as i64 + 1).into());
            terms.push(Monomial { j, k, a });
        }
        prop_assume!(terms.len() >= 2);
        // multiply by the monomial x^dj y^dk (+ constant): the locus and
        // all weights are unchanged
        let shifted: Vec<Monomial> = terms
            .iter()
            .map(|t| Monomial {
                j: t.j + dj,
                k: t.k + dk,
                a: t.a.clone() + Rat::new(shift.into(), 1.into()),
            })
            .collect();
        let p = TropicalPolynomial2::new(terms).unwrap();
        let q = TropicalPolynomial2::new(shifted).unwrap();
        let lp = p.corner_locus();
        let lq = q.corner_locus();
        prop_assert_eq!(lp.edges.len(), lq.edges.len());
        for (ep, eq) in lp.edges.iter().zip(&lq.edges) {
            prop_assert_eq!(ep.direction, eq.direction);
            prop_assert_eq!(ep.weight, eq.weight);
        }
        for star in &lp.vertices {
            prop_assert!(check_balancing(star));
        }
    }
}

/// Integer change of basis between two markings of the same graph,
/// recovered by exact solving over the fundamental basis.
fn solve_change(
    base: &trop_core::homology::Marking,
    target: &trop_core::homology::Marking,
) -> Vec<Vec<i64>> {
    use num::ToPrimitive;
    use trop_core::snf::{int_mat, solve_left};
    let b = int_mat(&base.basis().iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    target
        .basis()
        .iter()
        .map(|row| {
            let target_row: Vec<num::BigInt> =
                row.iter().map(|&x| num::BigInt::from(x)).collect();
            let sol = solve_left(&b, &target_row).expect("marking rows lie in the lattice");
            sol.iter().map(|x| x.to_i64().expect("small change-of-basis entries")).collect()
        })
        .collect()
}
