//! One-chains, one-forms, markings, and period matrices.
//!
//! A 1-chain assigns a real coefficient to every oriented edge (orientation
//! = the stored `src -> dst` direction). Its boundary at a vertex is the sum
//! of incoming minus outgoing coefficients; cycles are chains with zero
//! boundary. Harmonic one-forms on a metric graph are the same data under
//! the balancing condition, which is the identical linear constraint, so
//! the pairing between cycles and forms is concrete:
//! `<w, c> = sum_e w_e c_e len(e)`.
//!
//! The quadratic form `Q(c, c') = sum_e c_e c'_e len(e)` is positive
//! definite on the cycle space; evaluating it on an integer basis of the
//! cycle lattice gives the period matrix of the graph's Jacobian.

use num::bigint::BigInt;
use num::{One, Signed};

use crate::error::{Error, Result};
use crate::graph::{EdgeIdMap, MetricGraph};
use crate::mat::Mat;
use crate::num::Length;
use crate::snf::{self, IntMat};

/// Tolerance for the boundary of real-coefficient chains; integer-valued
/// chains evaluate exactly.
pub const CHAIN_TOL: f64 = 1e-9;

/// Boundary vector of a real 1-chain: at each vertex, incoming minus
/// outgoing coefficients. Loops contribute zero.
pub fn boundary(g: &MetricGraph<f64>, chain: &[f64]) -> Result<Vec<f64>> {
    check_chain_len(g, chain.len())?;
    let mut b = vec![0.0; g.vertex_count()];
    for (id, e) in g.edges().iter().enumerate() {
        b[e.dst] += chain[id];
        b[e.src] -= chain[id];
    }
    Ok(b)
}

pub fn is_cycle(g: &MetricGraph<f64>, chain: &[f64]) -> Result<bool> {
    Ok(boundary(g, chain)?.iter().all(|v| v.abs() <= CHAIN_TOL))
}

/// Balancing check for a one-form: outgoing minus incoming coefficients
/// vanish at every vertex. The zero set coincides with [`is_cycle`].
pub fn is_one_form(g: &MetricGraph<f64>, coeffs: &[f64]) -> Result<bool> {
    is_cycle(g, coeffs)
}

/// Exact boundary of an integer chain.
pub fn boundary_int(g: &MetricGraph<impl Length>, chain: &[i64]) -> Result<Vec<i64>> {
    check_chain_len(g, chain.len())?;
    let mut b = vec![0i64; g.vertex_count()];
    for (id, e) in g.edges().iter().enumerate() {
        b[e.dst] += chain[id];
        b[e.src] -= chain[id];
    }
    Ok(b)
}

pub fn is_cycle_int(g: &MetricGraph<impl Length>, chain: &[i64]) -> Result<bool> {
    Ok(boundary_int(g, chain)?.iter().all(|&v| v == 0))
}

/// The quadratic form on 1-chains: diagonal in the edge basis with the
/// edge lengths as weights.
pub fn q_pairing(g: &MetricGraph<f64>, c1: &[f64], c2: &[f64]) -> Result<f64> {
    check_chain_len(g, c1.len())?;
    check_chain_len(g, c2.len())?;
    Ok(g.lengths()
        .iter()
        .zip(c1.iter().zip(c2))
        .map(|(len, (a, b))| len * a * b)
        .sum())
}

/// A cycle, reinterpreted as the harmonic one-form with the same edge
/// coefficients. Identity on coefficients; the cycle condition is exactly
/// the balancing condition.
pub fn cycle_to_form(g: &MetricGraph<f64>, cycle: &[f64]) -> Result<Vec<f64>> {
    match boundary(g, cycle)?.iter().position(|v| v.abs() > CHAIN_TOL) {
        Some(v) => Err(Error::NotACycle(v)),
        None => Ok(cycle.to_vec()),
    }
}

/// Integral of a one-form over a cycle: `sum_e w_e c_e len(e)`.
pub fn integrate(g: &MetricGraph<f64>, form: &[f64], cycle: &[f64]) -> Result<f64> {
    if let Some(v) = boundary(g, form)?.iter().position(|x| x.abs() > CHAIN_TOL) {
        return Err(Error::NotAOneForm(v));
    }
    if let Some(v) = boundary(g, cycle)?.iter().position(|x| x.abs() > CHAIN_TOL) {
        return Err(Error::NotACycle(v));
    }
    q_pairing(g, form, cycle)
}

/// An integer basis of cycles. Construction validates that rows are cycles
/// of the right count (the genus) and independent over the integers;
/// whether they span the full cycle lattice is a separate, stronger check
/// ([`Marking::is_cycle_lattice_basis`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marking {
    basis: Vec<Vec<i64>>,
}

impl Marking {
    pub fn new(g: &MetricGraph<impl Length>, basis: Vec<Vec<i64>>) -> Result<Self> {
        let genus = g.genus()?;
        if basis.len() != genus {
            return Err(Error::InvalidMarking(format!(
                "expected {genus} basis rows (the genus), got {}",
                basis.len()
            )));
        }
        for row in &basis {
            if !is_cycle_int(g, row)? {
                return Err(Error::InvalidMarking(format!("row {row:?} is not a cycle")));
            }
        }
        let m = Marking { basis };
        if m.rank() != genus {
            return Err(Error::InvalidMarking("rows are dependent over the integers".into()));
        }
        Ok(m)
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn genus(&self) -> usize {
        self.basis.len()
    }

    fn to_int_mat(&self) -> IntMat {
        snf::int_mat(&self.basis)
    }

    fn rank(&self) -> usize {
        if self.basis.is_empty() {
            return 0;
        }
        snf::smith(&self.to_int_mat()).rank()
    }

    /// True when the rows span the whole integer cycle lattice: the Smith
    /// normal form of the basis matrix has all invariant factors equal to 1
    /// (the rows then generate a saturated sublattice of full rank, which
    /// must be the lattice itself).
    pub fn is_cycle_lattice_basis(&self) -> bool {
        if self.basis.is_empty() {
            return true;
        }
        let s = snf::smith(&self.to_int_mat());
        let divs = s.divisors();
        divs.len() == self.basis.len() && divs.iter().all(|d| d == &BigInt::one())
    }

    /// Transports the marking through an edge contraction: the contracted
    /// edge's coefficient is dropped, the rest keep their positions.
    pub fn contracted(&self, id_map: &EdgeIdMap) -> Marking {
        let new_len = id_map.iter().filter(|m| m.is_some()).count();
        let basis = self
            .basis
            .iter()
            .map(|row| {
                let mut out = vec![0i64; new_len];
                for (old, m) in id_map.iter().enumerate() {
                    if let Some(new) = m {
                        out[*new] = row[old];
                    }
                }
                out
            })
            .collect();
        Marking { basis }
    }
}

/// The deterministic fundamental-cycle basis: spanning tree from edges in
/// ascending id order, one cycle per non-tree edge (that edge with
/// coefficient +1, closed up through the tree). The result is always a
/// basis of the full cycle lattice.
pub fn cycle_basis(g: &MetricGraph<impl Length>) -> Result<Marking> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let e = g.edge_count();

    // Kruskal over ascending edge ids.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut in_tree = vec![false; e];
    for (id, edge) in g.edges().iter().enumerate() {
        if edge.src == edge.dst {
            continue;
        }
        let (a, b) = (find(&mut parent, edge.src), find(&mut parent, edge.dst));
        if a != b {
            parent[a] = b;
            in_tree[id] = true;
        }
    }

    // Parent pointers in the tree, rooted at vertex 0.
    let mut tree_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, edge) in g.edges().iter().enumerate() {
        if in_tree[id] {
            tree_adj[edge.src].push((edge.dst, id));
            tree_adj[edge.dst].push((edge.src, id));
        }
    }
    let mut up: Vec<Option<(usize, usize)>> = vec![None; n]; // (parent vertex, edge id)
    let mut depth = vec![0usize; n];
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut qi = 0;
    while qi < order.len() {
        let v = order[qi];
        qi += 1;
        for &(w, id) in &tree_adj[v] {
            if !seen[w] {
                seen[w] = true;
                up[w] = Some((v, id));
                depth[w] = depth[v] + 1;
                order.push(w);
            }
        }
    }

    // Signed tree path from `from` to `to`.
    let path_coeffs = |from: usize, to: usize, row: &mut [i64]| {
        let (mut x, mut y) = (from, to);
        let mut x_steps: Vec<(usize, usize)> = Vec::new(); // (edge, from-vertex)
        let mut y_steps: Vec<(usize, usize)> = Vec::new();
        while depth[x] > depth[y] {
            let (p, id) = up[x].expect("non-root has a parent");
            x_steps.push((id, x));
            x = p;
        }
        while depth[y] > depth[x] {
            let (p, id) = up[y].expect("non-root has a parent");
            y_steps.push((id, y));
            y = p;
        }
        while x != y {
            let (px, idx) = up[x].expect("non-root has a parent");
            let (py, idy) = up[y].expect("non-root has a parent");
            x_steps.push((idx, x));
            y_steps.push((idy, y));
            x = px;
            y = py;
        }
        // walk from `from` up to the meeting point: traversing child -> parent
        for &(id, child) in &x_steps {
            let edge = g.edge(id);
            // moving child -> parent; +1 if that matches src -> dst
            row[id] += if edge.src == child { 1 } else { -1 };
        }
        // then down from the meeting point to `to`: parent -> child
        for &(id, child) in y_steps.iter().rev() {
            let edge = g.edge(id);
            row[id] += if edge.dst == child { 1 } else { -1 };
        }
    };

    let mut basis = Vec::with_capacity(e + 1 - n);
    for (id, edge) in g.edges().iter().enumerate() {
        if in_tree[id] {
            continue;
        }
        let mut row = vec![0i64; e];
        row[id] = 1;
        if edge.src != edge.dst {
            path_coeffs(edge.dst, edge.src, &mut row);
        }
        basis.push(row);
    }
    Marking::new(g, basis)
}

/// Period matrix `P[i][j] = Q(b_i, b_j)` of a marking, over any length
/// scalar (exact when lengths are rational).
pub fn period_matrix<L: Length>(g: &MetricGraph<L>, m: &Marking) -> Result<Vec<Vec<L>>> {
    let genus = g.genus()?;
    if m.genus() != genus {
        return Err(Error::InvalidMarking(format!(
            "marking has {} rows, graph has genus {genus}",
            m.genus()
        )));
    }
    for row in m.basis() {
        check_chain_len(g, row.len())?;
    }
    let n = m.genus();
    let mut p = vec![vec![L::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let mut acc = L::zero();
            for (e, len) in g.lengths().iter().enumerate() {
                let c = m.basis[i][e] * m.basis[j][e];
                if c != 0 {
                    acc = acc + L::from_int(c) * len.clone();
                }
            }
            p[i][j] = acc.clone();
            p[j][i] = acc;
        }
    }
    Ok(p)
}

/// Period matrix as a dense float matrix.
pub fn period_matrix_f64<L: Length>(g: &MetricGraph<L>, m: &Marking) -> Result<Mat> {
    let p = period_matrix(g, m)?;
    Ok(Mat::from_rows(
        &p.iter().map(|row| row.iter().map(Length::to_f64).collect()).collect::<Vec<_>>(),
    ))
}

/// Basis change `u p u^T` for an integer matrix `u` with `|det u| = 1`.
pub fn change_marking(p: &Mat, u: &[Vec<i64>]) -> Result<Mat> {
    let n = p.nrows();
    if !p.is_square() || u.len() != n || u.iter().any(|r| r.len() != n) {
        return Err(Error::DimMismatch("change of marking needs square matrices".into()));
    }
    let d = snf::det_int(&snf::int_mat(u));
    if d.clone().abs() != BigInt::one() {
        return Err(Error::NotUnimodular(d.to_string()));
    }
    let um = Mat::from_rows(
        &u.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect::<Vec<_>>(),
    );
    Ok(um.mul(p).mul(&um.transpose()))
}

/// Whether every integer vector in the cycle space lies in the integer
/// span of the marking rows; decided by solving the integer linear system
/// for each fundamental cycle via Smith normal form.
pub fn principality_check(g: &MetricGraph<impl Length>, m: &Marking) -> Result<bool> {
    let fundamental = cycle_basis(g)?;
    let mat = m.to_int_mat();
    for row in fundamental.basis() {
        let target: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
        if snf::solve_left(&mat, &target).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_chain_len(g: &MetricGraph<impl Length>, got: usize) -> Result<()> {
    if got != g.edge_count() {
        return Err(Error::ChainSize { got, want: g.edge_count() });
    }
    Ok(())
}
