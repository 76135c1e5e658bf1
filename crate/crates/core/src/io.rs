//! JSON encoding of graphs, markings, points, paths, and polynomials.
//!
//! Formats:
//!   graph       {"vertices": N, "edges": [{"id": 0, "src": 0, "dst": 1, "length": 0.5}, ...]}
//!   marking     {"basis": [[1, -1, 0], [0, -1, 1]]}
//!   point       {"graph": ..., "marking": ...}
//!   path        {"legs": [{"graph": ..., "marking": ..., "coords": [[...], ...]}, ...]}
//!   polynomial  {"monomials": [{"j": 1, "k": 0, "a": "1/2"}, ...]}
//!
//! Edge ids must be the dense range `0..E` (any order). Lengths are JSON
//! numbers or decimal/fraction strings; exact mode rejects floats, since a
//! float has already lost the value it abbreviates. Coefficients of
//! tropical polynomials are always exact strings.
//!
//! Output uses plain `serde_json::Value` trees; the canonical 15-digit
//! float rendering is applied by the printer, not here.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::homology::Marking;
use crate::mat::Mat;
use crate::num::{parse_rat, rat_to_string, Length, Rat};
use crate::outer::{PlPath, SimplexPoint};
use crate::tropical::{Monomial, TropicalPolynomial2};

/// Parses JSON text; the error carries serde's line and column.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("malformed JSON: {e}")))
}

fn obj<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Invalid(format!("{what}: expected a JSON object")))
}

fn field<'v>(m: &'v Map<String, Value>, name: &str, what: &str) -> Result<&'v Value> {
    m.get(name)
        .ok_or_else(|| Error::Invalid(format!("{what}: missing field `{name}`")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Invalid(format!("{what}: expected a nonnegative integer")))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| Error::Invalid(format!("{what}: expected an integer")))
}

fn as_array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Invalid(format!("{what}: expected a JSON array")))
}

fn float_length(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Invalid(format!("length {n} is not a finite number"))),
        Value::String(s) => Ok(parse_rat(s)?.to_f64()),
        other => Err(Error::Invalid(format!("length: expected number or string, got {other}"))),
    }
}

fn exact_length(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(Rat::from_int(n.as_i64().expect("checked"))),
        Value::Number(n) => Err(Error::Invalid(format!(
            "exact mode: length {n} must be an integer or a string such as \"0.3\" or \"3/10\""
        ))),
        Value::String(s) => parse_rat(s),
        other => Err(Error::Invalid(format!("length: expected integer or string, got {other}"))),
    }
}

fn graph_from_value<L: Length>(
    v: &Value,
    len: impl Fn(&Value) -> Result<L>,
) -> Result<MetricGraph<L>> {
    let m = obj(v, "graph")?;
    let vertices = as_usize(field(m, "vertices", "graph")?, "graph.vertices")?;
    let edges = as_array(field(m, "edges", "graph")?, "graph.edges")?;
    let mut slots: Vec<Option<(usize, usize, L)>> = vec![None; edges.len()];
    for e in edges {
        let em = obj(e, "edge")?;
        let id = as_usize(field(em, "id", "edge")?, "edge.id")?;
        let src = as_usize(field(em, "src", "edge")?, "edge.src")?;
        let dst = as_usize(field(em, "dst", "edge")?, "edge.dst")?;
        let length = len(field(em, "length", "edge")?)?;
        let slot = slots
            .get_mut(id)
            .ok_or_else(|| Error::Invalid(format!("edge id {id} outside 0..{}", edges.len())))?;
        if slot.is_some() {
            return Err(Error::Invalid(format!("duplicate edge id {id}")));
        }
        *slot = Some((src, dst, length));
    }
    let triples: Vec<(usize, usize, L)> = slots
        .into_iter()
        .map(|s| s.ok_or_else(|| Error::Invalid("edge ids are not the dense range 0..E".into())))
        .collect::<Result<_>>()?;
    MetricGraph::new(vertices, triples)
}

pub fn graph_from_json(v: &Value) -> Result<MetricGraph<f64>> {
    graph_from_value(v, float_length)
}

pub fn exact_graph_from_json(v: &Value) -> Result<MetricGraph<Rat>> {
    graph_from_value(v, exact_length)
}

fn graph_to_value<L: Length>(g: &MetricGraph<L>, len: impl Fn(&L) -> Value) -> Value {
    let edges: Vec<Value> = (0..g.edge_count())
        .map(|id| {
            let e = g.edge(id);
            json!({"id": id, "src": e.src, "dst": e.dst, "length": len(&g.lengths()[id])})
        })
        .collect();
    json!({"vertices": g.vertex_count(), "edges": edges})
}

pub fn graph_to_json(g: &MetricGraph<f64>) -> Value {
    graph_to_value(g, |l| json!(l))
}

pub fn exact_graph_to_json(g: &MetricGraph<Rat>) -> Value {
    graph_to_value(g, |l| json!(rat_to_string(l)))
}

pub fn marking_from_json(g: &MetricGraph<impl Length>, v: &Value) -> Result<Marking> {
    let m = obj(v, "marking")?;
    let rows = as_array(field(m, "basis", "marking")?, "marking.basis")?;
    let basis: Vec<Vec<i64>> = rows
        .iter()
        .map(|row| {
            as_array(row, "marking row")?
                .iter()
                .map(|x| as_i64(x, "marking entry"))
                .collect()
        })
        .collect::<Result<_>>()?;
    Marking::new(g, basis)
}

pub fn marking_to_json(m: &Marking) -> Value {
    json!({"basis": m.basis()})
}

/// Row-major matrix of floats.
pub fn mat_to_json(m: &Mat) -> Value {
    json!(m.to_rows())
}

/// Parses a row-major matrix: a JSON array of equal-length number rows.
pub fn mat_from_json(v: &Value) -> Result<Mat> {
    let rows = as_array(v, "matrix")?;
    let parsed: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| as_array(row, "matrix row")?.iter().map(float_length).collect())
        .collect::<Result<_>>()?;
    if parsed.is_empty() || parsed.iter().any(|r| r.len() != parsed[0].len()) {
        return Err(Error::Invalid("matrix rows must be nonempty and equal length".into()));
    }
    Ok(Mat::from_rows(&parsed))
}

pub fn point_from_json(v: &Value) -> Result<SimplexPoint> {
    let m = obj(v, "point")?;
    let graph = graph_from_json(field(m, "graph", "point")?)?;
    let marking = marking_from_json(&graph, field(m, "marking", "point")?)?;
    SimplexPoint::on_closure(graph, marking)
}

pub fn point_to_json(p: &SimplexPoint) -> Value {
    json!({"graph": graph_to_json(p.graph()), "marking": marking_to_json(p.marking())})
}

pub fn path_from_json(v: &Value) -> Result<PlPath> {
    let m = obj(v, "path")?;
    let legs = as_array(field(m, "legs", "path")?, "path.legs")?;
    let mut out = Vec::with_capacity(legs.len());
    for leg in legs {
        let lm = obj(leg, "leg")?;
        let graph = graph_from_json(field(lm, "graph", "leg")?)?;
        let marking = marking_from_json(&graph, field(lm, "marking", "leg")?)?;
        let coords = as_array(field(lm, "coords", "leg")?, "leg.coords")?;
        let mut nodes = Vec::with_capacity(coords.len());
        for c in coords {
            let lengths: Vec<f64> = as_array(c, "node coords")?
                .iter()
                .map(float_length)
                .collect::<Result<_>>()?;
            nodes.push(SimplexPoint::on_closure(
                graph.with_lengths(lengths)?,
                marking.clone(),
            )?);
        }
        out.push(nodes);
    }
    PlPath::from_legs(out)
}

pub fn path_to_json(p: &PlPath) -> Value {
    let legs: Vec<Value> = p
        .legs()
        .iter()
        .map(|leg| {
            let coords: Vec<&[f64]> = leg.iter().map(|n| n.coords()).collect();
            json!({
                "graph": graph_to_json(leg[0].graph()),
                "marking": marking_to_json(leg[0].marking()),
                "coords": coords,
            })
        })
        .collect();
    json!({ "legs": legs })
}

pub fn polynomial_from_json(v: &Value) -> Result<TropicalPolynomial2> {
    let m = obj(v, "polynomial")?;
    let monomials = as_array(field(m, "monomials", "polynomial")?, "polynomial.monomials")?;
    let terms: Vec<Monomial> = monomials
        .iter()
        .map(|t| {
            let tm = obj(t, "monomial")?;
            let j = as_i64(field(tm, "j", "monomial")?, "monomial.j")?;
            let k = as_i64(field(tm, "k", "monomial")?, "monomial.k")?;
            let a = exact_length(field(tm, "a", "monomial")?)?;
            Ok(Monomial { j, k, a })
        })
        .collect::<Result<_>>()?;
    TropicalPolynomial2::new(terms)
}

pub fn polynomial_to_json(p: &TropicalPolynomial2) -> Value {
    let monomials: Vec<Value> = p
        .monomials()
        .iter()
        .map(|t| json!({"j": t.j, "k": t.k, "a": rat_to_string(&t.a)}))
        .collect();
    json!({ "monomials": monomials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn graph_round_trip() {
        let g = shapes::theta(0.5, 0.3, 0.2);
        let v = graph_to_json(&g);
        assert_eq!(graph_from_json(&v).unwrap(), g);

        let exact = shapes::theta(
            parse_rat("1/3").unwrap(),
            parse_rat("1/3").unwrap(),
            parse_rat("1/3").unwrap(),
        );
        let v = exact_graph_to_json(&exact);
        assert_eq!(exact_graph_from_json(&v).unwrap(), exact);
        assert_eq!(v["edges"][0]["length"], json!("1/3"));
    }

    #[test]
    fn edge_ids_must_be_dense() {
        let v = json!({"vertices": 2, "edges": [
            {"id": 0, "src": 0, "dst": 1, "length": 0.5},
            {"id": 2, "src": 0, "dst": 1, "length": 0.5},
        ]});
        assert!(graph_from_json(&v).is_err());
        let v = json!({"vertices": 2, "edges": [
            {"id": 0, "src": 0, "dst": 1, "length": 0.5},
            {"id": 0, "src": 0, "dst": 1, "length": 0.5},
        ]});
        assert!(matches!(graph_from_json(&v), Err(Error::Invalid(m)) if m.contains("duplicate")));
    }

    #[test]
    fn exact_mode_rejects_floats() {
        let v = json!({"vertices": 2, "edges": [
            {"id": 0, "src": 0, "dst": 1, "length": 0.5},
        ]});
        assert!(graph_from_json(&v).is_ok());
        assert!(exact_graph_from_json(&v).is_err());

        // strings and integers are fine
        let v = json!({"vertices": 1, "edges": [
            {"id": 0, "src": 0, "dst": 0, "length": "0.5"},
            {"id": 1, "src": 0, "dst": 0, "length": 2},
        ]});
        let g = exact_graph_from_json(&v).unwrap();
        assert_eq!(g.lengths()[0], parse_rat("1/2").unwrap());
        assert_eq!(g.lengths()[1], parse_rat("2").unwrap());
    }

    #[test]
    fn marking_and_point_round_trip() {
        let g = shapes::theta(0.5, 0.3, 0.2);
        let m = Marking::new(&g, vec![vec![1, -1, 0], vec![0, -1, 1]]).unwrap();
        let back = marking_from_json(&g, &marking_to_json(&m)).unwrap();
        assert_eq!(back, m);

        let p = SimplexPoint::new(g, m).unwrap();
        let back = point_from_json(&point_to_json(&p)).unwrap();
        assert_eq!(back.coords(), p.coords());
        assert!(back.same_chart(&p));
    }

    #[test]
    fn path_round_trip() {
        let g = shapes::theta(0.5, 0.3, 0.2);
        let m = Marking::new(&g, vec![vec![1, -1, 0], vec![0, -1, 1]]).unwrap();
        let a = SimplexPoint::new(g.clone(), m.clone()).unwrap();
        let b = SimplexPoint::new(g.with_lengths(vec![0.2, 0.3, 0.5]).unwrap(), m).unwrap();
        let path = PlPath::single(vec![a, b]).unwrap();
        let back = path_from_json(&path_to_json(&path)).unwrap();
        assert_eq!(back.legs().len(), 1);
        assert_eq!(back.legs()[0][1].coords(), path.legs()[0][1].coords());
    }

    #[test]
    fn polynomial_round_trip_and_exact_coefficients() {
        let v = json!({"monomials": [
            {"j": 0, "k": 0, "a": "0"},
            {"j": 1, "k": 0, "a": "-1/3"},
            {"j": 0, "k": 1, "a": 2},
        ]});
        let p = polynomial_from_json(&v).unwrap();
        assert_eq!(p.monomials().len(), 3);
        assert_eq!(p.monomials()[1].a, parse_rat("-1/3").unwrap());
        let back = polynomial_from_json(&polynomial_to_json(&p)).unwrap();
        assert_eq!(back.monomials(), p.monomials());
    }

    #[test]
    fn malformed_json_reports_location() {
        let err = parse_json("{\"vertices\": 2,\n  \"edges\": [}").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("line 2"), "{msg}");
    }
}
