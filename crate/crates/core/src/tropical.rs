//! Tropical plane curves at desk scale.
//!
//! A tropical polynomial in two variables is a maximum of finitely many
//! affine functions `jx + ky + a` with integer exponents. Its curve is the
//! corner locus: the points where the maximum is attained at least twice.
//! The locus is computed combinatorially over exact rationals (pairwise
//! equality lines clipped against dominance half-planes), never by floating
//! thresholds; the locus has measure zero, so sampling cannot define it.
//!
//! Edge weights follow the lattice convention: the gcd of the exponent
//! differences of the extreme achieving monomials. Each vertex star is
//! reported with primitive outgoing rays so that the balancing condition
//! `sum W(e) V(e) = 0` can be checked directly.

use std::collections::BTreeMap;

use num::integer::gcd;
use num::{BigInt, BigRational, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::Rat;

/// One term `a * x^j y^k`, read additively as `jx + ky + a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub j: i64,
    pub k: i64,
    pub a: Rat,
}

impl Monomial {
    pub fn new(j: i64, k: i64, a: Rat) -> Self {
        Monomial { j, k, a }
    }

    fn value_at(&self, x: &Rat, y: &Rat) -> Rat {
        int(self.j) * x + int(self.k) * y + &self.a
    }
}

/// A tropical polynomial: at least two monomials, distinct exponent pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalPolynomial2 {
    monomials: Vec<Monomial>,
}

/// An outgoing edge germ at a vertex: primitive integer direction and the
/// weight of the edge it points along.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub direction: (i64, i64),
    pub weight: u64,
}

/// A vertex of the curve with its outgoing rays.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexStar {
    pub vertex: (Rat, Rat),
    pub rays: Vec<Ray>,
}

/// A maximal straight piece of the corner locus: the points
/// `anchor + t * direction` for `t` in `[lo, hi]`, with `None` meaning
/// unbounded on that side. `achievers` are the monomials attaining the
/// maximum along the relative interior.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerEdge {
    pub anchor: (Rat, Rat),
    pub direction: (i64, i64),
    pub lo: Option<Rat>,
    pub hi: Option<Rat>,
    pub achievers: Vec<usize>,
    pub weight: u64,
}

impl CornerEdge {
    pub fn endpoint_lo(&self) -> Option<(Rat, Rat)> {
        self.lo.as_ref().map(|t| self.point_at(t))
    }

    pub fn endpoint_hi(&self) -> Option<(Rat, Rat)> {
        self.hi.as_ref().map(|t| self.point_at(t))
    }

    fn point_at(&self, t: &Rat) -> (Rat, Rat) {
        (
            &self.anchor.0 + t * int(self.direction.0),
            &self.anchor.1 + t * int(self.direction.1),
        )
    }

    /// Exact membership of a point in this edge.
    pub fn contains(&self, x: &Rat, y: &Rat) -> bool {
        let dx = x - &self.anchor.0;
        let dy = y - &self.anchor.1;
        // on the carrier line?
        if (&dx * int(self.direction.1) - &dy * int(self.direction.0)) != Rat::zero() {
            return false;
        }
        let t = if self.direction.0 != 0 {
            dx / int(self.direction.0)
        } else {
            dy / int(self.direction.1)
        };
        self.lo.as_ref().is_none_or(|lo| *lo <= t)
            && self.hi.as_ref().is_none_or(|hi| t <= *hi)
    }

    /// Scaling that gives the primitive direction length `1/W`, realizing
    /// the induced metric on the curve.
    pub fn induced_scale(&self) -> Rat {
        induced_edge_scale(self.weight)
    }
}

/// The corner locus as a polyhedral complex: vertex stars plus maximal
/// edges, both in deterministic sorted order.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerLocus {
    pub vertices: Vec<VertexStar>,
    pub edges: Vec<CornerEdge>,
}

impl CornerLocus {
    /// Exact membership of a rational point in the locus.
    pub fn contains(&self, x: &Rat, y: &Rat) -> bool {
        self.edges.iter().any(|e| e.contains(x, y))
    }
}

impl TropicalPolynomial2 {
    pub fn new(monomials: Vec<Monomial>) -> Result<Self> {
        if monomials.len() < 2 {
            return Err(Error::Degenerate("need at least two monomials".into()));
        }
        for (i, m) in monomials.iter().enumerate() {
            for other in &monomials[..i] {
                if (m.j, m.k) == (other.j, other.k) {
                    return Err(Error::Degenerate(format!(
                        "duplicate exponent pair ({}, {})",
                        m.j, m.k
                    )));
                }
            }
        }
        Ok(TropicalPolynomial2 { monomials })
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Max-plus evaluation over doubles.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.monomials
            .iter()
            .map(|m| m.j as f64 * x + m.k as f64 * y + rat_f64(&m.a))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Exact max-plus evaluation.
    pub fn eval_rat(&self, x: &Rat, y: &Rat) -> Rat {
        self.monomials
            .iter()
            .map(|m| m.value_at(x, y))
            .max()
            .expect("at least two monomials")
    }

    /// Indices of the monomials attaining the maximum at `(x, y)`.
    pub fn achievers_at(&self, x: &Rat, y: &Rat) -> Vec<usize> {
        let top = self.eval_rat(x, y);
        self.monomials
            .iter()
            .enumerate()
            .filter(|(_, m)| m.value_at(x, y) == top)
            .map(|(i, _)| i)
            .collect()
    }

    /// The corner locus, from exact pairwise equality lines clipped by the
    /// dominance constraints of the remaining monomials. Intended for
    /// small polynomials (at most 12 monomials).
    pub fn corner_locus(&self) -> CornerLocus {
        let n = self.monomials.len();
        assert!(n <= 12, "corner locus enumerates monomial pairs");

        // carrier line + clipped interval per pair, deduplicated: pairs of
        // monomials that tie along a common line produce identical pieces
        let mut pieces: BTreeMap<(i64, i64, Rat, Option<Rat>, Option<Rat>), ()> =
            BTreeMap::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if let Some(key) = self.clipped_pair_line(i, j) {
                    pieces.insert(key, ());
                }
            }
        }

        let mut edges: Vec<CornerEdge> = pieces
            .into_keys()
            .map(|(a, b, c, lo, hi)| self.annotate(a, b, c, lo, hi))
            .collect();
        edges.sort_by(|x, y| {
            (x.anchor.0.clone(), x.anchor.1.clone(), x.direction, x.lo.clone())
                .cmp(&(y.anchor.0.clone(), y.anchor.1.clone(), y.direction, y.lo.clone()))
        });

        // vertices: finite endpoints, each ray pointing into its edge
        let mut stars: BTreeMap<(Rat, Rat), Vec<Ray>> = BTreeMap::new();
        for e in &edges {
            if let Some(p) = e.endpoint_lo() {
                stars.entry(p).or_default().push(Ray {
                    direction: e.direction,
                    weight: e.weight,
                });
            }
            if let Some(p) = e.endpoint_hi() {
                stars.entry(p).or_default().push(Ray {
                    direction: (-e.direction.0, -e.direction.1),
                    weight: e.weight,
                });
            }
        }
        let vertices = stars
            .into_iter()
            .map(|(vertex, mut rays)| {
                rays.sort_by_key(|r| r.direction);
                VertexStar { vertex, rays }
            })
            .collect();

        CornerLocus { vertices, edges }
    }

    /// Canonical carrier line of the tie between monomials `i1` and `i2`,
    /// clipped to the parameter interval where the tie dominates every
    /// other monomial. `None` when the feasible set is empty or a point.
    fn clipped_pair_line(
        &self,
        i1: usize,
        i2: usize,
    ) -> Option<(i64, i64, Rat, Option<Rat>, Option<Rat>)> {
        let (m1, m2) = (&self.monomials[i1], &self.monomials[i2]);
        // line (j1-j2) x + (k1-k2) y = a2 - a1, normalized primitive
        let mut a = m1.j - m2.j;
        let mut b = m1.k - m2.k;
        let mut c = &m2.a - &m1.a;
        let g = gcd(a.abs(), b.abs());
        let sign = if a < 0 || (a == 0 && b < 0) { -g } else { g };
        a /= sign;
        b /= sign;
        c /= int(sign);

        let (anchor, dir) = line_frame(a, b, &c);
        let (x0, y0) = &anchor;

        // tie value along anchor + t*dir, as constant + slope * t
        let tie_const = m1.value_at(x0, y0);
        let tie_slope = int(m1.j * dir.0 + m1.k * dir.1);

        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for (idx, m) in self.monomials.iter().enumerate() {
            if idx == i1 || idx == i2 {
                continue;
            }
            let dc = m.value_at(x0, y0) - &tie_const;
            let ds = int(m.j * dir.0 + m.k * dir.1) - &tie_slope;
            if ds.is_zero() {
                if dc.is_positive() {
                    return None; // dominated along the whole line
                }
                continue; // ties everywhere or strictly below everywhere
            }
            let bound = -dc / &ds;
            if ds.is_positive() {
                hi = Some(hi.map_or(bound.clone(), |h: Rat| h.min(bound)));
            } else {
                lo = Some(lo.map_or(bound.clone(), |l: Rat| l.max(bound)));
            }
        }
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l >= h {
                return None; // empty or a single point, covered elsewhere
            }
        }
        Some((a, b, c, lo, hi))
    }

    /// Builds the edge record for a clipped line: achiever set at an
    /// interior point, weight from the extreme achiever exponents.
    fn annotate(&self, a: i64, b: i64, c: Rat, lo: Option<Rat>, hi: Option<Rat>) -> CornerEdge {
        let (anchor, direction) = line_frame(a, b, &c);
        let t_star = match (&lo, &hi) {
            (Some(l), Some(h)) => (l + h) / int(2),
            (Some(l), None) => l + int(1),
            (None, Some(h)) => h - int(1),
            (None, None) => Rat::zero(),
        };
        let x = &anchor.0 + &t_star * int(direction.0);
        let y = &anchor.1 + &t_star * int(direction.1);
        let achievers = self.achievers_at(&x, &y);
        debug_assert!(achievers.len() >= 2);
        let mut exps: Vec<(i64, i64)> =
            achievers.iter().map(|&i| (self.monomials[i].j, self.monomials[i].k)).collect();
        exps.sort_unstable();
        let (first, last) = (exps[0], exps[exps.len() - 1]);
        let weight = weight_between(first, last).expect("extreme achievers differ");
        CornerEdge { anchor, direction, lo, hi, achievers, weight }
    }
}

/// Canonical anchor point and primitive direction of `ax + by = c` for
/// primitive sign-normalized `(a, b)`.
fn line_frame(a: i64, b: i64, c: &Rat) -> ((Rat, Rat), (i64, i64)) {
    let anchor = if b != 0 {
        (Rat::zero(), c / int(b))
    } else {
        (c / int(a), Rat::zero())
    };
    let mut dir = (-b, a);
    if dir.0 < 0 || (dir.0 == 0 && dir.1 < 0) {
        dir = (-dir.0, -dir.1);
    }
    (anchor, dir)
}

/// Lattice weight of the tie between two exponent pairs:
/// `gcd(|j1-j2|, |k1-k2|)`.
pub fn weight_between(m1: (i64, i64), m2: (i64, i64)) -> Result<u64> {
    if m1 == m2 {
        return Err(Error::Degenerate("identical exponent pairs".into()));
    }
    Ok(gcd((m1.0 - m2.0).abs(), (m1.1 - m2.1).abs()) as u64)
}

/// `sum W(e) V(e) = 0` over the rays of a vertex star.
pub fn check_balancing(star: &VertexStar) -> bool {
    let (mut sx, mut sy) = (0i64, 0i64);
    for ray in &star.rays {
        sx += ray.weight as i64 * ray.direction.0;
        sy += ray.weight as i64 * ray.direction.1;
    }
    (sx, sy) == (0, 0)
}

/// The metric scaling factor that assigns a weight-`w` edge's primitive
/// vector the length `1/w`.
pub fn induced_edge_scale(weight: u64) -> Rat {
    Rat::new(BigInt::from(1), BigInt::from(weight))
}

/// Exact grid cross-check: on an `n x n` rational grid over
/// `[-span, span]^2`, a point has at least two achievers exactly when it
/// lies on a computed edge. Returns the number of disagreeing grid points.
pub fn grid_disagreements(p: &TropicalPolynomial2, locus: &CornerLocus, n: usize, span: i64) -> usize {
    let step = Rat::new(BigInt::from(2 * span), BigInt::from(n as i64 - 1));
    let base = -int(span);
    let mut bad = 0;
    for ix in 0..n {
        let x = &base + &step * int(ix as i64);
        for iy in 0..n {
            let y = &base + &step * int(iy as i64);
            let tied = p.achievers_at(&x, &y).len() >= 2;
            if tied != locus.contains(&x, &y) {
                bad += 1;
            }
        }
    }
    bad
}

fn int(v: i64) -> Rat {
    BigRational::from_integer(BigInt::from(v))
}

fn rat_f64(r: &Rat) -> f64 {
    crate::num::Length::to_f64(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::parse_rat;

    fn q(s: &str) -> Rat {
        parse_rat(s).unwrap()
    }

    fn poly(terms: &[(i64, i64, &str)]) -> TropicalPolynomial2 {
        TropicalPolynomial2::new(
            terms.iter().map(|&(j, k, a)| Monomial::new(j, k, q(a))).collect(),
        )
        .unwrap()
    }

    fn tropical_line() -> TropicalPolynomial2 {
        poly(&[(1, 0, "0"), (0, 1, "0"), (0, 0, "0")])
    }

    #[test]
    fn constructor_rejects_degenerate_input() {
        assert!(TropicalPolynomial2::new(vec![Monomial::new(1, 0, q("0"))]).is_err());
        assert!(TropicalPolynomial2::new(vec![
            Monomial::new(1, 0, q("0")),
            Monomial::new(1, 0, q("3")),
        ])
        .is_err());
    }

    #[test]
    fn eval_is_max_plus() {
        let p = tropical_line();
        assert_eq!(p.eval(0.0, 0.0), 0.0);
        assert_eq!(p.eval(2.0, 1.0), 2.0);
        let conic = poly(&[(2, 0, "0"), (1, 1, "0"), (0, 2, "0")]);
        assert_eq!(conic.eval(1.0, 3.0), 6.0);
        assert_eq!(conic.eval_rat(&q("1"), &q("3")), q("6"));
        assert_eq!(p.achievers_at(&q("0"), &q("0")), vec![0, 1, 2]);
    }

    #[test]
    fn weight_gcd_rule() {
        assert_eq!(weight_between((1, 0), (0, 1)).unwrap(), 1);
        assert_eq!(weight_between((2, 0), (0, 0)).unwrap(), 2);
        assert_eq!(weight_between((4, 2), (0, 0)).unwrap(), 2);
        assert!(weight_between((1, 1), (1, 1)).is_err());
    }

    #[test]
    fn line_star_at_origin() {
        let locus = tropical_line().corner_locus();
        assert_eq!(locus.edges.len(), 3);
        assert_eq!(locus.vertices.len(), 1);
        let star = &locus.vertices[0];
        assert_eq!(star.vertex, (q("0"), q("0")));
        let rays: Vec<_> = star.rays.iter().map(|r| (r.direction, r.weight)).collect();
        assert_eq!(rays, vec![((-1, 0), 1), ((0, -1), 1), ((1, 1), 1)]);
        assert!(check_balancing(star));
    }

    #[test]
    fn univariate_double_root_is_one_heavy_line() {
        // max(0, x, 2x + 2): the tie 0 = 2x + 2 at x = -1 dominates the
        // middle monomial, so the locus is the single vertical line there
        // with weight gcd(2, 0) = 2.
        let p = poly(&[(0, 0, "0"), (1, 0, "0"), (2, 0, "2")]);
        let locus = p.corner_locus();
        assert!(locus.vertices.is_empty());
        assert_eq!(locus.edges.len(), 1);
        let e = &locus.edges[0];
        assert_eq!(e.anchor, (q("-1"), q("0")));
        assert_eq!(e.direction, (0, 1));
        assert_eq!((e.lo.clone(), e.hi.clone()), (None, None));
        assert_eq!(e.achievers, vec![0, 2]);
        assert_eq!(e.weight, 2);
        assert_eq!(e.induced_scale(), q("1/2"));
    }

    #[test]
    fn degenerate_conic_is_a_double_diagonal() {
        let p = poly(&[(2, 0, "0"), (1, 1, "0"), (0, 2, "0")]);
        let locus = p.corner_locus();
        assert!(locus.vertices.is_empty());
        assert_eq!(locus.edges.len(), 1);
        let e = &locus.edges[0];
        assert_eq!(e.direction, (1, 1));
        assert_eq!(e.achievers, vec![0, 1, 2]);
        assert_eq!(e.weight, 2);
    }

    #[test]
    fn crossing_lines_make_a_four_valent_vertex() {
        // max(0, x, y, x+y) = (0 + x)(0 + y): coordinate axes crossing
        let p = poly(&[(0, 0, "0"), (1, 0, "0"), (0, 1, "0"), (1, 1, "0")]);
        let locus = p.corner_locus();
        assert_eq!(locus.edges.len(), 4);
        assert_eq!(locus.vertices.len(), 1);
        let star = &locus.vertices[0];
        assert_eq!(star.rays.len(), 4);
        assert!(check_balancing(star));
    }

    #[test]
    fn balancing_detects_imbalance() {
        let star = VertexStar {
            vertex: (q("0"), q("0")),
            rays: vec![
                Ray { direction: (1, 0), weight: 1 },
                Ray { direction: (0, 1), weight: 1 },
            ],
        };
        assert!(!check_balancing(&star));
        let even = VertexStar {
            vertex: (q("0"), q("0")),
            rays: vec![
                Ray { direction: (1, 0), weight: 1 },
                Ray { direction: (-1, 0), weight: 1 },
            ],
        };
        assert!(check_balancing(&even));
    }

    #[test]
    fn locus_shifts_with_affine_change_but_weights_do_not() {
        let p = tropical_line();
        let shifted = poly(&[(3, 1, "5"), (2, 2, "5"), (2, 1, "5")]);
        let a = p.corner_locus();
        let b = shifted.corner_locus();
        assert_eq!(a.edges.len(), b.edges.len());
        for (ea, eb) in a.edges.iter().zip(&b.edges) {
            assert_eq!(ea.direction, eb.direction);
            assert_eq!(ea.weight, eb.weight);
            assert_eq!(ea.achievers, eb.achievers);
        }
        assert_eq!(a.vertices[0].rays, b.vertices[0].rays);
    }

    #[test]
    fn grid_agrees_with_exact_locus() {
        for p in [
            tropical_line(),
            poly(&[(0, 0, "0"), (1, 0, "0"), (2, 0, "2")]),
            poly(&[(2, 0, "0"), (1, 1, "0"), (0, 2, "0")]),
            poly(&[(0, 0, "0"), (1, 0, "0"), (0, 1, "0"), (1, 1, "0")]),
            poly(&[(0, 0, "1"), (1, 0, "0"), (0, 1, "0"), (2, 0, "-1"), (0, 2, "-1")]),
        ] {
            let locus = p.corner_locus();
            for star in &locus.vertices {
                assert!(check_balancing(star), "unbalanced star in {:?}", star);
            }
            assert_eq!(grid_disagreements(&p, &locus, 200, 5), 0);
        }
    }
}
