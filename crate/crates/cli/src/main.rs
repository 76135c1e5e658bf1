//! `trop`: JSON in, JSON out, deterministic.
//!
//! Every subcommand reads JSON files, writes one JSON document to standard
//! output, and exits 0 on success, 2 on validation errors (malformed
//! input, precondition failures), 3 on numeric non-convergence. Floats are
//! rendered with 15 significant digits, so identical inputs give byte
//! identical outputs.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use trop_core::connectivize::{
    c1_sets, cyclically_equivalent, three_edge_connectivize, tropical_torelli_equal,
    EdgeBijection,
};
use trop_core::error::{Error, Result};
use trop_core::homology::{cycle_basis, period_matrix, period_matrix_f64};
use trop_core::io;
use trop_core::num::{parse_rat, rat_from_f64, rat_to_string, Length, Rat};
use trop_core::outer::{
    area_n2, corner_area, d0_simplex, d1, d2, dinf, path_length, SimplexPoint,
};
use trop_core::report;
use trop_core::shapes;
use trop_core::spd::{d_inv, glnz_equivalent, shortest_vector, SpdPoint};
use trop_core::tensor::TensorKind;
use trop_core::tropical::{check_balancing, CornerLocus};
use trop_core::MetricGraph;

#[derive(Parser)]
#[command(name = "trop", version, about = "Metric graphs, tropical Jacobians, and outer-space metrics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Ds0,
    Ds2,
    Ds2pullback,
    Ds2eps,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    D0,
    D1,
    D2,
    Dinf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the validity conditions on a graph
    Validate { graph: PathBuf },
    /// First Betti number of a graph
    Genus { graph: PathBuf },
    /// Period matrix of a marked graph
    Period {
        graph: PathBuf,
        #[arg(long)]
        marking: PathBuf,
        /// Rational arithmetic: lengths must be strings or integers
        #[arg(long)]
        exact: bool,
    },
    /// Invariant distance between the Jacobians of two marked graphs
    JacobianDist {
        g1: PathBuf,
        g2: PathBuf,
        /// Marking for the first graph (default: fundamental cycle basis)
        #[arg(long)]
        marking1: Option<PathBuf>,
        /// Marking for the second graph (default: fundamental cycle basis)
        #[arg(long)]
        marking2: Option<PathBuf>,
    },
    /// Shortest nonzero lattice vector of a positive definite form
    ShortestVector { matrix: PathBuf },
    /// Integer congruence search between two positive definite matrices
    Glnz {
        m1: PathBuf,
        m2: PathBuf,
        /// Maximum absolute entry of candidate transforms
        #[arg(long, default_value_t = 3)]
        radius: i64,
    },
    /// C1-sets of a bridgeless graph
    C1sets { graph: PathBuf },
    /// 3-edge connectivization with the C1-set correspondence
    Connectivize {
        graph: PathBuf,
        #[arg(long)]
        exact: bool,
    },
    /// Cyclic equivalence of two graphs
    CyclicEq {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long)]
        exact: bool,
    },
    /// Whether two graphs have isomorphic tropical Jacobians
    Torelli {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long)]
        exact: bool,
    },
    /// Metric tensor at a point, in intrinsic chart coordinates
    Tensor {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Cutoff scale, required with --kind ds2eps
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        point: PathBuf,
    },
    /// Riemannian length of a piecewise linear path
    Pathlen {
        path: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Distance between two points (d0 exact in-chart; d1/d2/dinf as intervals)
    Dist {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, value_enum)]
        metric: MetricArg,
    },
    /// Chart volume at genus 2 (the 2-dimensional theta chart)
    Volume {
        #[arg(long)]
        genus: usize,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        eps: Option<f64>,
        /// Relative tolerance of the refinement loop
        #[arg(long, default_value_t = 0.005)]
        tol: f64,
        /// Integrate only the corner region {a + b <= CORNER}
        #[arg(long)]
        corner: Option<f64>,
        /// Override the default chart (barycentric theta graph)
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Marking for --graph (default: the documented theta basis)
        #[arg(long)]
        marking: Option<PathBuf>,
    },
    /// Evaluate a tropical polynomial at an exact rational point
    TropicalEval {
        poly: PathBuf,
        /// Point as `x,y` with rational coordinates, e.g. `1/2,-3`
        #[arg(long)]
        at: String,
    },
    /// Corner locus of a tropical polynomial: edges, vertices, weights
    TropicalCorners { poly: PathBuf },
    /// Run the acceptance criteria and emit the report
    Report {
        /// Run a single criterion (1..=10) instead of all ten
        #[arg(long)]
        criterion: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let is_report = matches!(cli.cmd, Cmd::Report { .. });
    match run(cli.cmd) {
        Ok(v) => {
            println!("{}", render::to_string(&v));
            if is_report && v["all_passed"] != json!(true) {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("{}", render::to_string(&json!({ "error": e.to_string() })));
            ExitCode::from(if e.is_numeric() { 3 } else { 2 })
        }
    }
}

fn load(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    io::parse_json(&text)
}

fn load_graph(path: &Path) -> Result<MetricGraph<f64>> {
    io::graph_from_json(&load(path)?)
}

fn load_exact_graph(path: &Path, exact: bool) -> Result<MetricGraph<Rat>> {
    let v = load(path)?;
    if exact {
        io::exact_graph_from_json(&v)
    } else {
        // float lengths convert exactly; decisions stay rational
        let g = io::graph_from_json(&v)?;
        let triples: Vec<(usize, usize, Rat)> = (0..g.edge_count())
            .map(|e| {
                let edge = g.edge(e);
                Ok((edge.src, edge.dst, rat_from_f64(g.lengths()[e])?))
            })
            .collect::<Result<_>>()?;
        MetricGraph::new(g.vertex_count(), triples)
    }
}

fn load_point(path: &Path) -> Result<SimplexPoint> {
    io::point_from_json(&load(path)?)
}

fn tensor_kind(kind: KindArg, eps: Option<f64>) -> Result<TensorKind> {
    Ok(match kind {
        KindArg::Ds0 => TensorKind::Ds0,
        KindArg::Ds2 => TensorKind::Ds2,
        KindArg::Ds2pullback => TensorKind::Ds2Pullback,
        KindArg::Ds2eps => TensorKind::Ds2Eps(
            eps.ok_or_else(|| Error::Invalid("--kind ds2eps requires --eps".into()))?,
        ),
    })
}

fn rat_graph_json(g: &MetricGraph<Rat>, exact: bool) -> Value {
    if exact {
        io::exact_graph_to_json(g)
    } else {
        let floats: Vec<(usize, usize, f64)> = (0..g.edge_count())
            .map(|e| {
                let edge = g.edge(e);
                (edge.src, edge.dst, g.lengths()[e].to_f64())
            })
            .collect();
        io::graph_to_json(&MetricGraph::new(g.vertex_count(), floats).expect("same shape"))
    }
}

fn bijection_json(b: &Option<EdgeBijection>) -> Value {
    match b {
        Some(w) => json!(w.as_slice()),
        None => Value::Null,
    }
}

fn rat_pair(v: &(Rat, Rat)) -> Value {
    json!([rat_to_string(&v.0), rat_to_string(&v.1)])
}

fn opt_rat(v: &Option<Rat>) -> Value {
    v.as_ref().map_or(Value::Null, |x| json!(rat_to_string(x)))
}

fn locus_json(locus: &CornerLocus) -> Value {
    let vertices: Vec<Value> = locus
        .vertices
        .iter()
        .map(|star| {
            json!({
                "point": rat_pair(&star.vertex),
                "rays": star.rays.iter().map(|r| json!({
                    "direction": [r.direction.0, r.direction.1],
                    "weight": r.weight,
                })).collect::<Vec<_>>(),
                "balanced": check_balancing(star),
            })
        })
        .collect();
    let edges: Vec<Value> = locus
        .edges
        .iter()
        .map(|e| {
            json!({
                "anchor": rat_pair(&e.anchor),
                "direction": [e.direction.0, e.direction.1],
                "lo": opt_rat(&e.lo),
                "hi": opt_rat(&e.hi),
                "weight": e.weight,
                "achievers": e.achievers,
            })
        })
        .collect();
    json!({"vertices": vertices, "edges": edges})
}

fn run(cmd: Cmd) -> Result<Value> {
    match cmd {
        Cmd::Validate { graph } => {
            let g = load_graph(&graph)?;
            let r = g.validate_outer();
            Ok(json!({
                "is_connected": r.is_connected,
                "min_valence": r.min_valence,
                "separating_edges": r.separating_edges,
                "is_outer_space_point": r.is_outer_space_point,
            }))
        }
        Cmd::Genus { graph } => {
            let g = load_graph(&graph)?;
            Ok(json!({"genus": g.genus()?}))
        }
        Cmd::Period { graph, marking, exact } => {
            if exact {
                let g = load_exact_graph(&graph, true)?;
                let m = io::marking_from_json(&g, &load(&marking)?)?;
                let p = period_matrix(&g, &m)?;
                let rows: Vec<Vec<String>> = p
                    .iter()
                    .map(|row| row.iter().map(rat_to_string).collect())
                    .collect();
                Ok(json!(rows))
            } else {
                let g = load_graph(&graph)?;
                let m = io::marking_from_json(&g, &load(&marking)?)?;
                Ok(io::mat_to_json(&period_matrix_f64(&g, &m)?))
            }
        }
        Cmd::JacobianDist { g1, g2, marking1, marking2 } => {
            let a = load_graph(&g1)?;
            let b = load_graph(&g2)?;
            let ma = match marking1 {
                Some(p) => io::marking_from_json(&a, &load(&p)?)?,
                None => cycle_basis(&a)?,
            };
            let mb = match marking2 {
                Some(p) => io::marking_from_json(&b, &load(&p)?)?,
                None => cycle_basis(&b)?,
            };
            let pa = SpdPoint::new(period_matrix_f64(&a, &ma)?)?;
            let pb = SpdPoint::new(period_matrix_f64(&b, &mb)?)?;
            Ok(json!({"d_inv": d_inv(&pa, &pb)?}))
        }
        Cmd::ShortestVector { matrix } => {
            let q = SpdPoint::new(io::mat_from_json(&load(&matrix)?)?)?;
            let (value, vector) = shortest_vector(&q)?;
            Ok(json!({"value": value, "vector": vector}))
        }
        Cmd::Glnz { m1, m2, radius } => {
            let a = SpdPoint::new(io::mat_from_json(&load(&m1)?)?)?;
            let b = SpdPoint::new(io::mat_from_json(&load(&m2)?)?)?;
            let witness = glnz_equivalent(&a, &b, radius)?;
            Ok(json!({
                "equivalent": witness.is_some(),
                "witness": witness.map_or(Value::Null, |u| json!(u)),
            }))
        }
        Cmd::C1sets { graph } => {
            let g = load_graph(&graph)?;
            let sets: Vec<Vec<usize>> = c1_sets(&g)?.into_iter().map(|s| s.edges).collect();
            Ok(json!({"sets": sets}))
        }
        Cmd::Connectivize { graph, exact } => {
            let g = load_exact_graph(&graph, exact)?;
            let conn = three_edge_connectivize(&g)?;
            Ok(json!({
                "quotient": rat_graph_json(&conn.quotient, exact),
                "classes": conn.classes.iter().map(|c| &c.edges).collect::<Vec<_>>(),
                "class_to_quotient": conn.class_to_quotient,
                "genus": conn.quotient.genus()?,
            }))
        }
        Cmd::CyclicEq { g1, g2, exact } => {
            let a = load_exact_graph(&g1, exact)?;
            let b = load_exact_graph(&g2, exact)?;
            let witness = cyclically_equivalent(&a, &b)?;
            Ok(json!({
                "equivalent": witness.is_some(),
                "witness": bijection_json(&witness),
            }))
        }
        Cmd::Torelli { g1, g2, exact } => {
            let a = load_exact_graph(&g1, exact)?;
            let b = load_exact_graph(&g2, exact)?;
            let out = tropical_torelli_equal(&a, &b)?;
            Ok(json!({
                "equal": out.equal,
                "witness": bijection_json(&out.witness),
                "quotients": [
                    rat_graph_json(&out.quotients.0, exact),
                    rat_graph_json(&out.quotients.1, exact),
                ],
            }))
        }
        Cmd::Tensor { kind, eps, point } => {
            let p = load_point(&point)?;
            let k = tensor_kind(kind, eps)?;
            Ok(json!({"gram": io::mat_to_json(&p.gram(k)?)}))
        }
        Cmd::Pathlen { path, kind, eps } => {
            let p = io::path_from_json(&load(&path)?)?;
            let k = tensor_kind(kind, eps)?;
            let r = path_length(&p, k)?;
            Ok(json!({"value": r.value, "est_error": r.est_error, "trace": r.trace}))
        }
        Cmd::Dist { p, q, metric } => {
            let a = load_point(&p)?;
            let b = load_point(&q)?;
            match metric {
                MetricArg::D0 => Ok(json!({"value": d0_simplex(&a, &b)?})),
                MetricArg::D1 => interval_json(d1(&a, &b)?),
                MetricArg::D2 => interval_json(d2(&a, &b)?),
                MetricArg::Dinf => interval_json(dinf(&a, &b)?),
            }
        }
        Cmd::Volume { genus, kind, eps, tol, corner, graph, marking } => {
            if genus != 2 {
                return Err(Error::Invalid(format!(
                    "volume is implemented for genus 2 only, got {genus}"
                )));
            }
            let k = tensor_kind(kind, eps)?;
            let (g, m) = match graph {
                Some(path) => {
                    let g = load_graph(&path)?;
                    let m = match marking {
                        Some(mp) => io::marking_from_json(&g, &load(&mp)?)?,
                        None => report::theta_marking(&g)?,
                    };
                    (g, m)
                }
                None => {
                    let g = shapes::theta(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
                    let m = report::theta_marking(&g)?;
                    (g, m)
                }
            };
            let r = match corner {
                Some(c) => corner_area(&g, &m, k, c, tol)?,
                None => area_n2(&g, &m, k, tol)?,
            };
            Ok(json!({"value": r.value, "est_error": r.est_error, "trace": r.trace}))
        }
        Cmd::TropicalEval { poly, at } => {
            let p = io::polynomial_from_json(&load(&poly)?)?;
            let (xs, ys) = at
                .split_once(',')
                .ok_or_else(|| Error::Invalid("--at expects `x,y`".into()))?;
            let (x, y) = (parse_rat(xs)?, parse_rat(ys)?);
            Ok(json!({
                "value": rat_to_string(&p.eval_rat(&x, &y)),
                "achievers": p.achievers_at(&x, &y),
            }))
        }
        Cmd::TropicalCorners { poly } => {
            let p = io::polynomial_from_json(&load(&poly)?)?;
            Ok(locus_json(&p.corner_locus()))
        }
        Cmd::Report { criterion } => {
            let results = match criterion {
                Some(i) => {
                    if !(1..=10).contains(&i) {
                        return Err(Error::Invalid("criteria are numbered 1..=10".into()));
                    }
                    vec![report::run_criterion(i)]
                }
                None => report::run_all(),
            };
            for r in &results {
                eprintln!("{}", r.line());
            }
            Ok(report::report_to_json(&results))
        }
    }
}

fn interval_json(i: trop_core::outer::DistanceInterval) -> Result<Value> {
    Ok(json!({"lower": i.lower, "upper": i.upper}))
}
