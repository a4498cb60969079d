//! JSON geometry and flow files.
//!
//! A geometry file is an object with keys `vertices`, `edges`, `inputs` and
//! `outputs`, all in terms of string labels:
//!
//! ```json
//! {
//!   "vertices": ["a", "b"],
//!   "edges": [["a", "b"]],
//!   "inputs": ["a"],
//!   "outputs": ["b"]
//! }
//! ```
//!
//! Labels are mapped to ids in the order they appear in `vertices`. Written
//! files list every label set sorted, so output is byte-stable.
//!
//! A flow file has `successor` (label to label), `ranks` (label to integer)
//! and `paths` (the successor orbits as label lists).

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{CausalFlow, FlowError, SuccessorFunction};
use crate::graph::{Geometry, Graph, Vertex};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

impl LoadError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        LoadError::Field {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for LoadError {
    fn from(e: serde_json::Error) -> Self {
        LoadError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryFile {
    vertices: Vec<String>,
    edges: Vec<Vec<String>>,
    inputs: Vec<String>,
    outputs: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlowFile {
    successor: BTreeMap<String, String>,
    ranks: BTreeMap<String, usize>,
    #[serde(default)]
    paths: Vec<Vec<String>>,
}

fn lookup(
    index: &HashMap<&str, Vertex>,
    label: &str,
    field: impl Into<String>,
) -> Result<Vertex, LoadError> {
    index
        .get(label)
        .copied()
        .ok_or_else(|| LoadError::field(field, format!("unknown vertex {label:?}")))
}

pub fn load_geometry(text: &str) -> Result<Geometry, LoadError> {
    let file: GeometryFile = serde_json::from_str(text)?;
    let mut index: HashMap<&str, Vertex> = HashMap::with_capacity(file.vertices.len());
    for (v, label) in file.vertices.iter().enumerate() {
        if index.insert(label.as_str(), v).is_some() {
            return Err(LoadError::field(
                format!("vertices[{v}]"),
                format!("duplicate vertex {label:?}"),
            ));
        }
    }

    let mut seen = HashSet::with_capacity(file.edges.len());
    let mut edges = Vec::with_capacity(file.edges.len());
    for (e, pair) in file.edges.iter().enumerate() {
        let field = format!("edges[{e}]");
        let [a, b] = pair.as_slice() else {
            return Err(LoadError::field(
                field,
                format!("expected 2 vertex labels, got {}", pair.len()),
            ));
        };
        let u = lookup(&index, a, field.clone())?;
        let v = lookup(&index, b, field.clone())?;
        if u == v {
            return Err(LoadError::field(field, format!("self-loop on {a:?}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(LoadError::field(field, format!("duplicate edge {a:?}-{b:?}")));
        }
        edges.push((u, v));
    }

    let vertex_set = |labels: &[String], name: &str| -> Result<Vec<Vertex>, LoadError> {
        let mut set = HashSet::new();
        labels
            .iter()
            .enumerate()
            .map(|(i, label)| {
                let field = format!("{name}[{i}]");
                let v = lookup(&index, label, field.clone())?;
                if !set.insert(v) {
                    return Err(LoadError::field(field, format!("{label:?} listed twice")));
                }
                Ok(v)
            })
            .collect()
    };
    let inputs = vertex_set(&file.inputs, "inputs")?;
    let outputs = vertex_set(&file.outputs, "outputs")?;

    let graph = Graph::from_edges(file.vertices.len(), edges)
        .map_err(|e| LoadError::field("edges", e.to_string()))?;
    Geometry::with_labels(graph, inputs, outputs, file.vertices.clone())
        .map_err(|e| LoadError::field("vertices", e.to_string()))
}

fn sorted_labels(geom: &Geometry, vertices: impl Iterator<Item = Vertex>) -> Vec<String> {
    let mut labels: Vec<String> = vertices.map(|v| geom.label(v).to_string()).collect();
    labels.sort();
    labels
}

pub fn serialize_geometry(geom: &Geometry) -> String {
    let mut edges: Vec<Vec<String>> = geom
        .graph()
        .edges()
        .map(|(u, v)| {
            let (a, b) = (geom.label(u), geom.label(v));
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            vec![a.to_string(), b.to_string()]
        })
        .collect();
    edges.sort();
    let file = GeometryFile {
        vertices: sorted_labels(geom, geom.graph().vertices()),
        edges,
        inputs: sorted_labels(geom, geom.inputs().iter().copied()),
        outputs: sorted_labels(geom, geom.outputs().iter().copied()),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("geometry serializes");
    text.push('\n');
    text
}

pub fn load_flow(geom: &Geometry, text: &str) -> Result<CausalFlow, LoadError> {
    let file: FlowFile = serde_json::from_str(text)?;
    let index = geom.label_index();
    let mut pairs = Vec::with_capacity(file.successor.len());
    for (from, to) in &file.successor {
        let field = format!("successor.{from}");
        pairs.push((lookup(&index, from, field.clone())?, lookup(&index, to, field)?));
    }
    let successor = SuccessorFunction::candidate(geom, pairs).map_err(|e| {
        let message = describe_flow_error(geom, &e);
        LoadError::field("successor", message)
    })?;

    let mut ranks = vec![None; geom.vertex_count()];
    for (label, &rank) in &file.ranks {
        ranks[lookup(&index, label, format!("ranks.{label}"))?] = Some(rank);
    }
    let ranks = ranks
        .into_iter()
        .enumerate()
        .map(|(v, r)| {
            r.ok_or_else(|| LoadError::field("ranks", format!("no rank for {:?}", geom.label(v))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    for (p, path) in file.paths.iter().enumerate() {
        for (a, label) in path.iter().enumerate() {
            lookup(&index, label, format!("paths[{p}][{a}]"))?;
        }
    }
    Ok(CausalFlow::new(successor, ranks).expect("one rank per vertex"))
}

fn describe_flow_error(geom: &Geometry, e: &FlowError) -> String {
    let l = |v: Vertex| format!("{:?}", geom.label(v));
    match *e {
        FlowError::MissingSuccessor(v) => format!("no successor for non-output vertex {}", l(v)),
        FlowError::SuccessorOnOutput(v) => format!("successor given for output vertex {}", l(v)),
        FlowError::SuccessorIsInput { from, to } => {
            format!("successor {} of {} is an input", l(to), l(from))
        }
        ref other => other.to_string(),
    }
}

pub fn serialize_flow(geom: &Geometry, flow: &CausalFlow) -> String {
    let label = |v: Vertex| geom.label(v).to_string();
    let file = FlowFile {
        successor: flow
            .successor()
            .pairs()
            .map(|(x, fx)| (label(x), label(fx)))
            .collect(),
        ranks: flow
            .ranks()
            .iter()
            .enumerate()
            .map(|(v, &r)| (label(v), r))
            .collect(),
        paths: flow
            .path_cover(geom)
            .map(|cover| {
                cover
                    .paths()
                    .iter()
                    .map(|p| p.iter().map(|&v| label(v)).collect())
                    .collect()
            })
            .unwrap_or_default(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("flow serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{"vertices": ["a", "b"], "edges": [["a", "b"]], "inputs": ["a"], "outputs": ["b"]}"#;

    fn field_of(e: LoadError) -> String {
        match e {
            LoadError::Field { field, .. } => field,
            other => panic!("expected a field error, got {other}"),
        }
    }

    #[test]
    fn smallest_geometry() {
        let geom = load_geometry(SMALL).unwrap();
        assert_eq!((geom.vertex_count(), geom.edge_count()), (2, 1));
        assert_eq!(geom.inputs(), &[0]);
        assert_eq!(geom.outputs(), &[1]);
        assert_eq!(geom.label(1), "b");
    }

    #[test]
    fn self_loop_is_rejected() {
        let text = r#"{"vertices": ["a"], "edges": [["a", "a"]], "inputs": [], "outputs": ["a"]}"#;
        let e = load_geometry(text).unwrap_err();
        assert!(e.to_string().contains("self-loop"), "{e}");
        assert_eq!(field_of(e), "edges[0]");
    }

    #[test]
    fn field_errors_carry_context() {
        let dup = r#"{"vertices": ["a", "b"], "edges": [["a", "b"], ["b", "a"]], "inputs": [], "outputs": []}"#;
        assert_eq!(field_of(load_geometry(dup).unwrap_err()), "edges[1]");
        let unknown = r#"{"vertices": ["a"], "edges": [], "inputs": ["z"], "outputs": []}"#;
        assert_eq!(field_of(load_geometry(unknown).unwrap_err()), "inputs[0]");
        let short = r#"{"vertices": ["a"], "edges": [["a"]], "inputs": [], "outputs": []}"#;
        assert_eq!(field_of(load_geometry(short).unwrap_err()), "edges[0]");
        let twice = r#"{"vertices": ["a", "a"], "edges": [], "inputs": [], "outputs": []}"#;
        assert_eq!(field_of(load_geometry(twice).unwrap_err()), "vertices[1]");
    }

    #[test]
    fn syntax_errors_carry_line() {
        let text = "{\n  \"vertices\": [\"a\",\n  ]\n}";
        match load_geometry(text).unwrap_err() {
            LoadError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn serialization_is_sorted() {
        let text = r#"{"vertices": ["c", "a", "b"], "edges": [["c", "a"], ["b", "a"]], "inputs": ["c"], "outputs": ["b", "a"]}"#;
        let geom = load_geometry(text).unwrap();
        let out = serialize_geometry(&geom);
        let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(parsed["vertices"], serde_json::json!(["a", "b", "c"]));
        assert_eq!(parsed["edges"], serde_json::json!([["a", "b"], ["a", "c"]]));
        assert_eq!(parsed["outputs"], serde_json::json!(["a", "b"]));
        let keys: Vec<usize> = ["vertices", "edges", "inputs", "outputs"]
            .iter()
            .map(|k| out.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(serialize_geometry(&load_geometry(&out).unwrap()), out);
    }

    #[test]
    fn flow_file_round_trip() {
        let geom = load_geometry(SMALL).unwrap();
        let f = SuccessorFunction::new(&geom, [(0, 1)]).unwrap();
        let flow = CausalFlow::new(f, vec![0, 1]).unwrap();
        let text = serialize_flow(&geom, &flow);
        assert!(text.contains("\"paths\""));
        assert_eq!(load_flow(&geom, &text).unwrap(), flow);
    }

    #[test]
    fn flow_file_domain_mismatch() {
        let geom = load_geometry(SMALL).unwrap();
        let text = r#"{"successor": {}, "ranks": {"a": 0, "b": 1}, "paths": []}"#;
        let e = load_flow(&geom, text).unwrap_err();
        assert!(e.to_string().contains("no successor"), "{e}");
    }
}
