//! Riemannian tensors on an open simplex of marked metric graphs.
//!
//! A combinatorial type with `m` edges spans the standard open simplex
//! `{x > 0, sum x = 1}` in `R^m`; intrinsic coordinates are the first
//! `m - 1` edge lengths, with basis directions `b_i = e_i - e_{m-1}`. The
//! flat part `ds_0^2` is the Euclidean metric of that embedding, so its
//! Gram matrix is `I + 1 1^T`. The pullback part evaluates the invariant
//! SPD tensor at the period matrix; since the period matrix is linear in
//! the edge lengths, its directional derivatives are constant matrices,
//! one per intrinsic direction. The pinching tensor `ds_eps^2` replaces
//! the pullback by logarithmic derivatives of smoothly cut-off cycle
//! lengths, which vanish identically once a cycle is longer than `2 eps`.

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::homology::{period_matrix_f64, Marking};
use crate::mat::Mat;
use crate::spd::{tensor_eval, SpdPoint};

/// Which tensor to evaluate. `Ds2Pullback` is the period-pullback summand
/// alone, exposed for lower-bound comparisons against the invariant
/// distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TensorKind {
    Ds0,
    Ds2,
    Ds2Pullback,
    Ds2Eps(f64),
}

/// Flat Gram matrix of the standard simplex in intrinsic coordinates:
/// `(I + 1 1^T)` of size `m - 1` for `m` edges.
pub fn flat_gram(edge_count: usize) -> Mat {
    let k = edge_count - 1;
    let mut g = Mat::identity(k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] += 1.0;
        }
    }
    g
}

/// Constant derivative matrices of the period map along the intrinsic
/// directions: `M_i = P(indicator of e_i) - P(indicator of e_last)`.
pub fn period_derivatives(g: &MetricGraph<f64>, marking: &Marking) -> Result<Vec<Mat>> {
    let m = g.edge_count();
    let indicator = |e: usize| {
        let mut lengths = vec![0.0; m];
        lengths[e] = 1.0;
        g.with_lengths(lengths)
            .and_then(|h| period_matrix_f64(&h, marking))
    };
    let last = indicator(m - 1)?;
    (0..m - 1).map(|i| Ok(indicator(i)?.sub(&last))).collect()
}

/// Smooth cutoff for cycle lengths: identity below `eps`, constant `eps`
/// above `2 eps`, the C1 cubic Hermite in between. Returns `(value,
/// derivative)`.
pub fn cutoff(x: f64, eps: f64) -> (f64, f64) {
    if x <= eps {
        (x, 1.0)
    } else if x >= 2.0 * eps {
        (eps, 0.0)
    } else {
        let s = (x - eps) / eps;
        (eps * (s.powi(3) - 2.0 * s.powi(2) + s + 1.0), 3.0 * s.powi(2) - 4.0 * s + 1.0)
    }
}

/// Upper limit for admissible `eps` at genus `n`.
pub fn eps_limit(genus: usize) -> f64 {
    1.0 / (6.0 * genus as f64)
}

/// Gram matrix of the chosen tensor at the graph's current edge lengths,
/// in intrinsic coordinates. The lengths may lie on the simplex closure;
/// the period matrix must stay positive definite there (every cycle keeps
/// positive length), otherwise the point sits on a missing face.
pub fn gram_at(g: &MetricGraph<f64>, marking: &Marking, kind: TensorKind) -> Result<Mat> {
    let m = g.edge_count();
    if m < 2 {
        return Err(Error::Degenerate("simplex needs at least two edges".into()));
    }
    match kind {
        TensorKind::Ds0 => Ok(flat_gram(m)),
        TensorKind::Ds2 => Ok(flat_gram(m).add(&pullback_gram(g, marking)?)),
        TensorKind::Ds2Pullback => pullback_gram(g, marking),
        TensorKind::Ds2Eps(eps) => {
            let n = marking.genus();
            if !(eps > 0.0 && eps < eps_limit(n)) {
                return Err(Error::EpsOutOfRange(eps));
            }
            let mut gram = flat_gram(m);
            let k = m - 1;
            for cycle in g.enumerate_cycles() {
                let (h, dh) = cutoff(cycle.total_length, eps);
                if dh == 0.0 {
                    continue; // cutoff saturated: no contribution
                }
                let coeff = (dh / h).powi(2);
                let on = |e: usize| cycle.edges.binary_search(&e).is_ok();
                let grad: Vec<f64> = (0..k)
                    .map(|i| (on(i) as i64 - on(m - 1) as i64) as f64)
                    .collect();
                for i in 0..k {
                    for j in 0..k {
                        gram[(i, j)] += coeff * grad[i] * grad[j];
                    }
                }
            }
            Ok(gram)
        }
    }
}

fn pullback_gram(g: &MetricGraph<f64>, marking: &Marking) -> Result<Mat> {
    let period = period_matrix_f64(g, marking)?;
    let base = SpdPoint::new(period).map_err(|_| {
        Error::MissingFace(
            g.enumerate_cycles()
                .iter()
                .find(|c| c.total_length <= 0.0)
                .map(|c| c.edges.clone())
                .unwrap_or_default(),
        )
    })?;
    let derivs = period_derivatives(g, marking)?;
    let k = derivs.len();
    let mut gram = Mat::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = tensor_eval(&base, &derivs[i], &derivs[j])?;
            gram[(i, j)] = v;
            gram[(j, i)] = v;
        }
    }
    Ok(gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;
    use approx::assert_relative_eq;

    fn theta_chart() -> (MetricGraph<f64>, Marking) {
        let g = shapes::theta(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
        let marking = Marking::new(&g, vec![vec![1, -1, 0], vec![0, -1, 1]]).unwrap();
        (g, marking)
    }

    #[test]
    fn flat_gram_is_simplex_gram() {
        let g = flat_gram(3);
        assert_eq!(g.to_rows(), vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        // squared length of a vertex-to-vertex direction is 2
        let d = vec![1.0, -1.0];
        let mut q = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                q += d[i] * g[(i, j)] * d[j];
            }
        }
        assert_relative_eq!(q, 2.0);
    }

    #[test]
    fn period_derivatives_match_hand_computation() {
        // theta with basis {e0 - e1, e2 - e1}: Q(a,b,c) = [[a+b, b], [b, b+c]]
        // with c = 1 - a - b, so dQ(b_0) = dQ/da - dQ/dc and so on
        let (g, marking) = theta_chart();
        let d = period_derivatives(&g, &marking).unwrap();
        assert_eq!(d[0].to_rows(), vec![vec![1.0, 0.0], vec![0.0, -1.0]]);
        assert_eq!(d[1].to_rows(), vec![vec![1.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn cutoff_clauses_and_interpolant() {
        let eps = 0.05;
        assert_eq!(cutoff(0.02, eps), (0.02, 1.0));
        assert_eq!(cutoff(0.2, eps), (0.05, 0.0));
        let (h, dh) = cutoff(0.075, eps);
        assert_relative_eq!(h, 0.05625);
        assert_relative_eq!(dh, 3.0 * 0.25 - 2.0 + 1.0);
        // C1 at the seams
        assert_relative_eq!(cutoff(eps, eps).0, eps);
        assert_relative_eq!(cutoff(eps, eps).1, 1.0);
        assert_relative_eq!(cutoff(2.0 * eps, eps).0, eps, epsilon = 1e-15);
        assert_relative_eq!(cutoff(2.0 * eps, eps).1, 0.0);
    }

    #[test]
    fn ds2_at_barycenter() {
        let (g, marking) = theta_chart();
        let gram = gram_at(&g, &marking, TensorKind::Ds2).unwrap();
        assert!(gram.is_symmetric(1e-12));
        assert!(gram.cholesky().is_some());
        // flat part + pullback part decompose
        let flat = gram_at(&g, &marking, TensorKind::Ds0).unwrap();
        let pull = gram_at(&g, &marking, TensorKind::Ds2Pullback).unwrap();
        assert!(gram.sub(&flat.add(&pull)).max_abs() < 1e-14);

        // hand value: Q = [[2/3, 1/3], [1/3, 2/3]], M_0 = [[1,0],[0,-1]]:
        // Q^-1 M_0 = [[2,1],[-1,-2]] squares to 3I, so the trace is 6
        assert_relative_eq!(pull[(0, 0)], 6.0, epsilon = 1e-12);
    }

    #[test]
    fn ds2_eps_saturates_to_flat_at_the_barycenter() {
        let (g, marking) = theta_chart();
        let gram = gram_at(&g, &marking, TensorKind::Ds2Eps(0.05)).unwrap();
        assert!(gram.sub(&flat_gram(3)).max_abs() < 1e-15);
    }

    #[test]
    fn ds2_eps_pinching_cycle_contributes_log_derivative() {
        let g = shapes::theta(0.01, 0.02, 0.97);
        let marking = Marking::new(&g, vec![vec![1, -1, 0], vec![0, -1, 1]]).unwrap();
        let gram = gram_at(&g, &marking, TensorKind::Ds2Eps(0.05)).unwrap();
        // only the cycle {e0, e1} with length 0.03 < eps contributes:
        // gradient (da + db) in intrinsic coordinates, coefficient 1/0.03^2
        let c = 1.0 / 0.03f64.powi(2);
        let expected = vec![vec![2.0 + c, 1.0 + c], vec![1.0 + c, 2.0 + c]];
        assert!(gram.sub(&Mat::from_rows(&expected)).max_abs() < 1e-9);
    }

    #[test]
    fn ds2_eps_is_continuous_at_the_saturation_threshold() {
        let eps = 0.05;
        let marking = |g: &MetricGraph<f64>| {
            Marking::new(g, vec![vec![1, -1, 0], vec![0, -1, 1]]).unwrap()
        };
        // cycle {e0, e1} crosses length 2*eps = 0.1 as a+b passes 0.1
        let below = shapes::theta(0.05 - 1e-8, 0.05, 0.9 + 1e-8);
        let above = shapes::theta(0.05 + 1e-8, 0.05, 0.9 - 1e-8);
        let gb = gram_at(&below, &marking(&below), TensorKind::Ds2Eps(eps)).unwrap();
        let ga = gram_at(&above, &marking(&above), TensorKind::Ds2Eps(eps)).unwrap();
        assert!(gb.sub(&ga).max_abs() < 1e-7);
    }

    #[test]
    fn eps_range_is_enforced() {
        let (g, marking) = theta_chart();
        assert!(matches!(
            gram_at(&g, &marking, TensorKind::Ds2Eps(0.0)),
            Err(Error::EpsOutOfRange(_))
        ));
        // genus 2: the bound is 1/12
        assert!(matches!(
            gram_at(&g, &marking, TensorKind::Ds2Eps(0.09)),
            Err(Error::EpsOutOfRange(_))
        ));
        assert!(gram_at(&g, &marking, TensorKind::Ds2Eps(0.08)).is_ok());
    }

    #[test]
    fn missing_face_is_reported() {
        let g = shapes::theta(0.0, 0.0, 1.0);
        let marking = Marking::new(&g, vec![vec![1, -1, 0], vec![0, -1, 1]]).unwrap();
        match gram_at(&g, &marking, TensorKind::Ds2) {
            Err(Error::MissingFace(cycle)) => assert_eq!(cycle, vec![0, 1]),
            other => panic!("expected missing face, got {other:?}"),
        }
    }
}
