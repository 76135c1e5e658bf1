//! Points, paths, distances, and volumes on the space of marked metric
//! graphs of fixed genus and total length one.
//!
//! A combinatorial type together with a marking spans one open simplex
//! (the chart); its coordinates are the edge lengths. The flat metric d0
//! treats each chart as a standard Euclidean simplex (vertex distance
//! sqrt 2). The complete metrics d1, d2, dinf combine d0 with the
//! invariant distance between period matrices; since the global d0 is an
//! infimum over an infinite complex, those are reported as intervals
//! (lower, upper) with the lower bound from the period side and the upper
//! bound from an explicit piecewise linear route.
//!
//! Riemannian lengths and areas integrate the tensors of [`crate::tensor`]
//! along polylines and over 2-dimensional charts.

use crate::error::{Error, Result};
use crate::graph::{EdgeIdMap, MetricGraph};
use crate::homology::{period_matrix_f64, Marking};
use crate::mat::Mat;
use crate::quad::{graded_triangle, integrate_segment, QuadResult, Tri};
use crate::spd::{d_inv, SpdPoint};
use crate::tensor::{gram_at, TensorKind};

/// Tolerance on the coordinate sum of a simplex point.
pub const COORD_SUM_TOL: f64 = 1e-12;

/// Edges at or below this length are treated as lying on a face.
pub const FACE_TOL: f64 = 1e-13;

/// Relative tolerance for path-leg integrals.
pub const PATH_TOL: f64 = 1e-6;

/// Default candidate budget for face routing.
pub const ROUTE_BUDGET: usize = 4096;

/// A point of one simplex chart: a valid combinatorial type, a marking,
/// and edge lengths summing to one. `new` demands an interior point (all
/// lengths positive); `on_closure` admits zero lengths as long as every
/// cycle keeps positive length (otherwise the point lies on a missing
/// face, which is outside the space).
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    graph: MetricGraph<f64>,
    marking: Marking,
    interior: bool,
}

impl SimplexPoint {
    pub fn new(graph: MetricGraph<f64>, marking: Marking) -> Result<Self> {
        let p = Self::on_closure(graph, marking)?;
        if let Some(i) = p.graph.lengths().iter().position(|&l| l <= 0.0) {
            return Err(Error::BoundaryPoint(i));
        }
        Ok(SimplexPoint { interior: true, ..p })
    }

    pub fn on_closure(graph: MetricGraph<f64>, marking: Marking) -> Result<Self> {
        let report = graph.validate_outer();
        if !report.is_outer_space_point {
            return Err(Error::Invalid(format!(
                "combinatorial type fails the validity conditions: {report:?}"
            )));
        }
        // re-validate the marking against this graph
        let marking = Marking::new(&graph, marking.basis().to_vec())?;
        let sum: f64 = graph.lengths().iter().sum();
        if (sum - 1.0).abs() > COORD_SUM_TOL {
            return Err(Error::NotOnSimplex(sum));
        }
        for cycle in graph.enumerate_cycles() {
            if cycle.total_length <= 0.0 {
                return Err(Error::MissingFace(cycle.edges));
            }
        }
        Ok(SimplexPoint { graph, marking, interior: false })
    }

    pub fn graph(&self) -> &MetricGraph<f64> {
        &self.graph
    }

    pub fn marking(&self) -> &Marking {
        &self.marking
    }

    pub fn coords(&self) -> &[f64] {
        self.graph.lengths()
    }

    pub fn is_interior(&self) -> bool {
        self.interior
    }

    /// Same chart: identical combinatorial type and identical marking.
    pub fn same_chart(&self, other: &SimplexPoint) -> bool {
        self.graph.same_shape(&other.graph) && self.marking == other.marking
    }

    pub fn with_coords(&self, coords: Vec<f64>) -> Result<SimplexPoint> {
        SimplexPoint::on_closure(self.graph.with_lengths(coords)?, self.marking.clone())
    }

    /// Period matrix of the underlying marked metric graph.
    pub fn period(&self) -> Result<Mat> {
        period_matrix_f64(&self.graph, &self.marking)
    }

    pub fn period_spd(&self) -> Result<SpdPoint> {
        SpdPoint::new(self.period()?).map_err(|_| {
            Error::MissingFace(
                self.graph
                    .enumerate_cycles()
                    .iter()
                    .find(|c| c.total_length <= 0.0)
                    .map(|c| c.edges.clone())
                    .unwrap_or_default(),
            )
        })
    }

    pub fn gram(&self, kind: TensorKind) -> Result<Mat> {
        gram_at(&self.graph, &self.marking, kind)
    }

    /// Contracts all face edges (length below [`FACE_TOL`]) and transports
    /// the marking; the identification used to decide whether two boundary
    /// points of different charts are the same point.
    pub fn boundary_reduction(&self) -> Result<(MetricGraph<f64>, Marking)> {
        let mut g = self.graph.clone();
        let mut marking = self.marking.clone();
        loop {
            let Some(e) = g.lengths().iter().position(|&l| l <= FACE_TOL) else {
                return Ok((g, marking));
            };
            let (next, map) = g.contract_edge(e)?;
            marking = marking.contracted(&map);
            g = next;
        }
    }
}

fn reductions_agree(a: &SimplexPoint, b: &SimplexPoint) -> Result<bool> {
    let (ga, ma) = a.boundary_reduction()?;
    let (gb, mb) = b.boundary_reduction()?;
    Ok(ga.same_shape(&gb)
        && ma == mb
        && ga
            .lengths()
            .iter()
            .zip(gb.lengths())
            .all(|(x, y)| (x - y).abs() <= 1e-12))
}

/// A piecewise linear path: one or more polyline legs, each inside a
/// single chart closure, consecutive legs agreeing at their junction after
/// boundary reduction.
#[derive(Debug, Clone)]
pub struct PlPath {
    legs: Vec<Vec<SimplexPoint>>,
}

impl PlPath {
    /// Single-chart polyline.
    pub fn single(nodes: Vec<SimplexPoint>) -> Result<Self> {
        PlPath::from_legs(vec![nodes])
    }

    pub fn from_legs(legs: Vec<Vec<SimplexPoint>>) -> Result<Self> {
        if legs.is_empty() {
            return Err(Error::Degenerate("path needs at least one leg".into()));
        }
        for leg in &legs {
            if leg.len() < 2 {
                return Err(Error::Degenerate("each leg needs at least two nodes".into()));
            }
            if leg.iter().skip(1).any(|n| !n.same_chart(&leg[0])) {
                return Err(Error::SimplexMismatch(
                    "leg nodes lie in different charts".into(),
                ));
            }
        }
        for pair in legs.windows(2) {
            let end = pair[0].last().expect("nonempty leg");
            let start = &pair[1][0];
            if !reductions_agree(end, start)? {
                return Err(Error::SimplexMismatch(
                    "consecutive legs do not meet on a shared face".into(),
                ));
            }
        }
        Ok(PlPath { legs })
    }

    pub fn legs(&self) -> &[Vec<SimplexPoint>] {
        &self.legs
    }

    pub fn start(&self) -> &SimplexPoint {
        &self.legs[0][0]
    }

    pub fn end(&self) -> &SimplexPoint {
        self.legs.last().and_then(|l| l.last()).expect("nonempty path")
    }

    /// Euclidean polyline length in the simplex embedding; an upper bound
    /// for the flat metric between the endpoints.
    pub fn d0_length(&self) -> f64 {
        self.legs
            .iter()
            .flat_map(|leg| leg.windows(2))
            .map(|w| euclid(w[0].coords(), w[1].coords()))
            .sum()
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Flat (simplicial) distance inside one shared chart: the Euclidean
/// distance of the coordinate vectors in the standard-simplex embedding.
pub fn d0_simplex(p: &SimplexPoint, q: &SimplexPoint) -> Result<f64> {
    if !p.same_chart(q) {
        return Err(Error::SimplexMismatch(
            "d0 is evaluated within a single chart".into(),
        ));
    }
    Ok(euclid(p.coords(), q.coords()))
}

/// The period map on a chart point.
pub fn period_map(p: &SimplexPoint) -> Result<Mat> {
    p.period()
}

/// A distance known only up to an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceInterval {
    pub lower: f64,
    pub upper: f64,
}

fn d0_bound_and_dinv(p: &SimplexPoint, q: &SimplexPoint, route: Option<&PlPath>) -> Result<(f64, f64)> {
    let dinv = d_inv(&p.period_spd()?, &q.period_spd()?)?;
    let d0b = if p.same_chart(q) {
        euclid(p.coords(), q.coords())
    } else {
        let owned;
        let route = match route {
            Some(r) => r,
            None => {
                owned = route_between(p, q, ROUTE_BUDGET)?;
                &owned
            }
        };
        check_route_endpoints(route, p, q)?;
        route.d0_length()
    };
    Ok((d0b, dinv))
}

fn check_route_endpoints(route: &PlPath, p: &SimplexPoint, q: &SimplexPoint) -> Result<()> {
    let matches = |node: &SimplexPoint, target: &SimplexPoint| {
        node.same_chart(target) && euclid(node.coords(), target.coords()) <= 1e-12
    };
    if matches(route.start(), p) && matches(route.end(), q) {
        Ok(())
    } else {
        Err(Error::SimplexMismatch("route does not connect the two points".into()))
    }
}

/// `d1 = d0 + d_inv`: lower bound from the period side alone, upper bound
/// from an explicit route (exact d0 within one chart). Charts may differ;
/// a route is searched automatically unless supplied.
pub fn d1(p: &SimplexPoint, q: &SimplexPoint) -> Result<DistanceInterval> {
    d1_with_route(p, q, None)
}

pub fn d1_with_route(p: &SimplexPoint, q: &SimplexPoint, route: Option<&PlPath>) -> Result<DistanceInterval> {
    let (d0b, dinv) = d0_bound_and_dinv(p, q, route)?;
    Ok(DistanceInterval { lower: dinv, upper: d0b + dinv })
}

/// `d2 = sqrt(d0^2 + d_inv^2)`.
pub fn d2(p: &SimplexPoint, q: &SimplexPoint) -> Result<DistanceInterval> {
    d2_with_route(p, q, None)
}

pub fn d2_with_route(p: &SimplexPoint, q: &SimplexPoint, route: Option<&PlPath>) -> Result<DistanceInterval> {
    let (d0b, dinv) = d0_bound_and_dinv(p, q, route)?;
    Ok(DistanceInterval { lower: dinv, upper: d0b.hypot(dinv) })
}

/// `dinf = max(d0, d_inv)`.
pub fn dinf(p: &SimplexPoint, q: &SimplexPoint) -> Result<DistanceInterval> {
    dinf_with_route(p, q, None)
}

pub fn dinf_with_route(p: &SimplexPoint, q: &SimplexPoint, route: Option<&PlPath>) -> Result<DistanceInterval> {
    let (d0b, dinv) = d0_bound_and_dinv(p, q, route)?;
    Ok(DistanceInterval { lower: dinv, upper: d0b.max(dinv) })
}

/// Riemannian length of a piecewise linear path under the chosen tensor:
/// adaptive Gauss-Legendre on `sqrt(v^T G v)` per straight segment. The
/// trace lists the per-segment values in path order.
pub fn path_length(path: &PlPath, kind: TensorKind) -> Result<QuadResult> {
    let mut value = 0.0;
    let mut est_error = 0.0;
    let mut trace = Vec::new();
    for leg in path.legs() {
        for w in leg.windows(2) {
            let r = segment_length(&w[0], w[1].coords(), kind)?;
            value += r.value;
            est_error += r.est_error;
            trace.push(r.value);
        }
    }
    Ok(QuadResult { value, est_error, trace })
}

fn segment_length(from: &SimplexPoint, to: &[f64], kind: TensorKind) -> Result<QuadResult> {
    let m = from.coords().len();
    let p = from.coords().to_vec();
    let v: Vec<f64> = (0..m).map(|i| to[i] - p[i]).collect();
    if v.iter().all(|&x| x.abs() < 1e-15) {
        return Ok(QuadResult { value: 0.0, est_error: 0.0, trace: vec![0.0] });
    }
    let graph = from.graph().clone();
    let marking = from.marking().clone();
    let mut f = |t: f64| -> Result<f64> {
        let x: Vec<f64> = (0..m).map(|i| p[i] + t * v[i]).collect();
        let g = gram_at(&graph.with_lengths(x)?, &marking, kind)?;
        let mut q = 0.0;
        for i in 0..m - 1 {
            for j in 0..m - 1 {
                q += v[i] * g[(i, j)] * v[j];
            }
        }
        Ok(q.max(0.0).sqrt())
    };
    integrate_segment(&mut f, 0.0, 1.0, PATH_TOL, 40)
}

/// Upper bound for the length-metric distance: coordinate descent over the
/// interior nodes of a polyline from `p` to `q` (junctions held fixed on
/// multi-chart routes). The straight polyline through the route is always
/// measured; `budget` counts the segment integrations spent on refining
/// it, so the bound only improves as the budget grows.
pub fn distance_upper_bound(
    p: &SimplexPoint,
    q: &SimplexPoint,
    kind: TensorKind,
    budget: usize,
) -> Result<f64> {
    if p.same_chart(q) {
        if euclid(p.coords(), q.coords()) <= 1e-15 {
            return Ok(0.0);
        }
        let mut budget = budget;
        return optimize_polyline(p, q, kind, &mut budget);
    }
    let route = route_between(p, q, ROUTE_BUDGET)?;
    let mut total = 0.0;
    for leg in route.legs() {
        let mut share = budget / route.legs().len();
        total += optimize_polyline(&leg[0], leg.last().expect("nonempty"), kind, &mut share)?;
    }
    Ok(total)
}

fn polyline_value(
    nodes: &[SimplexPoint],
    kind: TensorKind,
    budget: &mut usize,
) -> Result<Vec<f64>> {
    let segs = nodes.len() - 1;
    *budget = budget.saturating_sub(segs);
    let mut vals = Vec::with_capacity(segs);
    for w in nodes.windows(2) {
        vals.push(segment_length(&w[0], w[1].coords(), kind)?.value);
    }
    Ok(vals)
}

fn optimize_polyline(
    p: &SimplexPoint,
    q: &SimplexPoint,
    kind: TensorKind,
    budget: &mut usize,
) -> Result<f64> {
    let m = p.coords().len();
    let midpoint = |a: &[f64], b: &[f64]| -> Vec<f64> {
        (0..m).map(|i| 0.5 * (a[i] + b[i])).collect()
    };
    let mut nodes: Vec<SimplexPoint> = vec![
        p.clone(),
        p.with_coords(midpoint(p.coords(), q.coords()))?,
        q.clone(),
    ];
    let mut seg_vals = polyline_value(&nodes, kind, budget)?;
    let mut step = 0.125;
    loop {
        let mut improved = false;
        'sweep: for k in 1..nodes.len() - 1 {
            for i in 0..m {
                for j in 0..m {
                    if i == j {
                        continue;
                    }
                    if *budget < 2 {
                        break 'sweep;
                    }
                    let mut coords = nodes[k].coords().to_vec();
                    coords[i] += step;
                    coords[j] -= step;
                    if coords[j] < 0.0 {
                        continue;
                    }
                    let Ok(candidate) = nodes[k].with_coords(coords) else {
                        continue;
                    };
                    *budget -= 2;
                    let before = segment_length(&nodes[k - 1], candidate.coords(), kind)?.value;
                    let after = segment_length(&candidate, nodes[k + 1].coords(), kind)?.value;
                    if before + after < seg_vals[k - 1] + seg_vals[k] - 1e-12 {
                        seg_vals[k - 1] = before;
                        seg_vals[k] = after;
                        nodes[k] = candidate;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-4 {
                if nodes.len() >= 17 || *budget < 2 * nodes.len() {
                    break;
                }
                // double the nodes: same polyline, same value, finer moves
                let mut refined = Vec::with_capacity(nodes.len() * 2 - 1);
                for w in 0..nodes.len() - 1 {
                    refined.push(nodes[w].clone());
                    refined
                        .push(nodes[w].with_coords(midpoint(nodes[w].coords(), nodes[w + 1].coords()))?);
                }
                refined.push(nodes.last().expect("nonempty").clone());
                nodes = refined;
                seg_vals = polyline_value(&nodes, kind, budget)?;
                step = 0.0625;
            }
        }
        if *budget < 2 {
            break;
        }
    }
    Ok(seg_vals.iter().sum())
}

/// Searches for a two-leg route between points of different charts through
/// a shared face: a pair of edge forests, one per chart, whose
/// contractions produce identical marked types. Candidate pairs are tried
/// in increasing subset order until `budget` pairs are exhausted.
pub fn route_between(p: &SimplexPoint, q: &SimplexPoint, budget: usize) -> Result<PlPath> {
    if p.same_chart(q) {
        return PlPath::single(vec![p.clone(), q.clone()]);
    }
    let faces_p = chart_faces(p)?;
    let faces_q = chart_faces(q)?;
    let mut tried = 0usize;
    for fp in &faces_p {
        for fq in &faces_q {
            tried += 1;
            if tried > budget {
                return Err(Error::NoRoute(budget));
            }
            if !fp.graph.same_shape(&fq.graph) || fp.marking != fq.marking {
                continue;
            }
            return build_route(p, q, fp, fq);
        }
    }
    Err(Error::NoRoute(budget))
}

struct Face {
    contracted: Vec<usize>,
    map: EdgeIdMap,
    graph: MetricGraph<f64>,
    marking: Marking,
}

/// All proper faces of a chart: contractions of nonempty edge forests
/// (subsets containing a cycle would kill it and leave the space).
fn chart_faces(p: &SimplexPoint) -> Result<Vec<Face>> {
    let g = p.graph();
    let m = g.edge_count();
    assert!(m < 32, "face enumeration is a subset search");
    let mut out = Vec::new();
    let mut masks: Vec<u32> = (1..(1u32 << m)).collect();
    masks.sort_by_key(|x| (x.count_ones(), *x));
    'mask: for mask in masks {
        let subset: Vec<usize> = (0..m).filter(|&e| mask & (1 << e) != 0).collect();
        if subset.len() >= g.vertex_count() {
            continue; // a forest has fewer edges than vertices
        }
        // forest test: no cycle inside the subset
        let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
        fn find(parent: &mut Vec<usize>, v: usize) -> usize {
            if parent[v] != v {
                let root = find(parent, parent[v]);
                parent[v] = root;
            }
            parent[v]
        }
        for &e in &subset {
            let edge = g.edge(e);
            let (a, b) = (find(&mut parent, edge.src), find(&mut parent, edge.dst));
            if a == b {
                continue 'mask;
            }
            parent[a] = b;
        }
        let mut h = g.clone();
        let mut map: EdgeIdMap = (0..m).map(Some).collect();
        // contract in descending id order so earlier ids stay valid
        for &e in subset.iter().rev() {
            let cur = map[e].expect("forest edges are distinct");
            let (next, step) = h.contract_edge(cur)?;
            for slot in map.iter_mut() {
                *slot = slot.and_then(|mid| step[mid]);
            }
            h = next;
        }
        let marking = p.marking().contracted(&map);
        out.push(Face { contracted: subset, map, graph: h, marking });
    }
    Ok(out)
}

fn build_route(p: &SimplexPoint, q: &SimplexPoint, fp: &Face, fq: &Face) -> Result<PlPath> {
    let k = fp.graph.edge_count();
    // midpoint of the two renormalized shadows on the shared face
    let shadow = |point: &SimplexPoint, face: &Face| -> Vec<f64> {
        let mut r = vec![0.0; k];
        for (orig, slot) in face.map.iter().enumerate() {
            if let Some(new) = slot {
                r[*new] = point.coords()[orig];
            }
        }
        let s: f64 = r.iter().sum();
        r.iter().map(|x| x / s).collect()
    };
    let rp = shadow(p, fp);
    let rq = shadow(q, fq);
    let mut r: Vec<f64> = rp.iter().zip(&rq).map(|(a, b)| 0.5 * (a + b)).collect();
    let s: f64 = r.iter().sum();
    for x in &mut r {
        *x /= s;
    }
    let lift = |face: &Face, base: &SimplexPoint| -> Result<SimplexPoint> {
        let mut coords = vec![0.0; base.coords().len()];
        for (orig, slot) in face.map.iter().enumerate() {
            if let Some(new) = slot {
                coords[orig] = r[*new];
            }
        }
        base.with_coords(coords)
    };
    let junction_p = lift(fp, p)?;
    let junction_q = lift(fq, q)?;
    debug_assert!(!fp.contracted.is_empty() && !fq.contracted.is_empty());
    PlPath::from_legs(vec![vec![p.clone(), junction_p], vec![junction_q, q.clone()]])
}

/// Riemannian area of a 2-dimensional chart (a 3-edge genus-2 type) under
/// the chosen tensor, by graded corner quadrature over the coordinate
/// triangle `{a, b > 0, a + b < 1}`.
pub fn area_n2(
    g: &MetricGraph<f64>,
    marking: &Marking,
    kind: TensorKind,
    rel_tol: f64,
) -> Result<QuadResult> {
    check_n2_chart(g, marking)?;
    let t = Tri { v: [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]] };
    let singular = match kind {
        TensorKind::Ds0 => [false; 3],
        _ => [true; 3],
    };
    let mut f = |a: f64, b: f64| area_integrand(g, marking, kind, a, b);
    graded_triangle(&mut f, &t, singular, rel_tol, 12)
}

/// Area of the corner region `{a + b <= eps}` of a 2-dimensional chart.
pub fn corner_area(
    g: &MetricGraph<f64>,
    marking: &Marking,
    kind: TensorKind,
    eps: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    check_n2_chart(g, marking)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Invalid(format!("corner size {eps} not in (0, 1)")));
    }
    let t = Tri { v: [[0.0, 0.0], [eps, 0.0], [0.0, eps]] };
    let mut f = |a: f64, b: f64| area_integrand(g, marking, kind, a, b);
    graded_triangle(&mut f, &t, [true, false, false], rel_tol, 12)
}

/// The area element `sqrt(det G)` at intrinsic coordinates `(a, b)`.
pub fn area_integrand(
    g: &MetricGraph<f64>,
    marking: &Marking,
    kind: TensorKind,
    a: f64,
    b: f64,
) -> Result<f64> {
    let gram = gram_at(&g.with_lengths(vec![a, b, 1.0 - a - b])?, marking, kind)?;
    Ok(gram.det().max(0.0).sqrt())
}

fn check_n2_chart(g: &MetricGraph<f64>, marking: &Marking) -> Result<()> {
    if g.edge_count() != 3 || marking.genus() != 2 {
        return Err(Error::DimMismatch(
            "area is computed on 2-dimensional genus-2 charts (three edges)".into(),
        ));
    }
    if !g.validate_outer().is_outer_space_point {
        return Err(Error::Invalid("combinatorial type fails the validity conditions".into()));
    }
    Ok(())
}
