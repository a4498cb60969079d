//! Graphs, geometries and digraphs.
//!
//! Vertices are dense integer identifiers `0..n`. External string labels are
//! carried by [`Geometry`] and only matter at the file boundary.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

/// Dense vertex identifier.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: Vertex, vertex_count: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// An undirected simple graph.
///
/// Adjacency lists are kept sorted, so iteration order is always ascending by
/// vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl Graph {
    /// The edgeless graph on `vertex_count` vertices.
    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); vertex_count],
            edge_count: 0,
        }
    }

    /// Builds a simple graph, rejecting self-loops and parallel edges.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut seen = HashSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            adjacency,
            edge_count: seen.len(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adjacency.len()
    }

    /// Neighbours of `v` in ascending order. Never contains `v`.
    pub fn neighbors(&self, v: Vertex) -> Result<&[Vertex], GraphError> {
        self.adjacency
            .get(v)
            .map(Vec::as_slice)
            .ok_or(GraphError::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count(),
            })
    }

    /// Panicking variant of [`Graph::neighbors`] for callers that already hold
    /// a valid vertex.
    pub(crate) fn adj(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// A copy of this graph with one more edge.
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Self, GraphError> {
        Graph::from_edges(self.vertex_count(), self.edges().chain([(u, v)]))
    }
}

/// A graph together with designated input and output vertex sets.
///
/// Inputs and outputs may overlap. Every vertex carries a string label, by
/// default its decimal id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geometry {
    graph: Graph,
    inputs: Vec<Vertex>,
    outputs: Vec<Vertex>,
    is_input: Vec<bool>,
    is_output: Vec<bool>,
    labels: Vec<String>,
}

impl Geometry {
    pub fn new<I, O>(graph: Graph, inputs: I, outputs: O) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Vertex>,
        O: IntoIterator<Item = Vertex>,
    {
        let labels = graph.vertices().map(|v| v.to_string()).collect();
        Geometry::with_labels(graph, inputs, outputs, labels)
    }

    pub fn with_labels<I, O>(
        graph: Graph,
        inputs: I,
        outputs: O,
        labels: Vec<String>,
    ) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Vertex>,
        O: IntoIterator<Item = Vertex>,
    {
        let n = graph.vertex_count();
        if labels.len() != n {
            return Err(GraphError::LabelCount {
                expected: n,
                got: labels.len(),
            });
        }
        let mut unique = HashSet::with_capacity(n);
        for label in &labels {
            if !unique.insert(label.as_str()) {
                return Err(GraphError::DuplicateLabel(label.clone()));
            }
        }
        let mask = |set: &mut dyn Iterator<Item = Vertex>| -> Result<Vec<bool>, GraphError> {
            let mut mask = vec![false; n];
            for v in set {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: v,
                        vertex_count: n,
                    });
                }
                mask[v] = true;
            }
            Ok(mask)
        };
        let is_input = mask(&mut inputs.into_iter())?;
        let is_output = mask(&mut outputs.into_iter())?;
        let collect = |mask: &[bool]| (0..n).filter(|&v| mask[v]).collect();
        Ok(Geometry {
            inputs: collect(&is_input),
            outputs: collect(&is_output),
            graph,
            is_input,
            is_output,
            labels,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// The input set I, ascending.
    pub fn inputs(&self) -> &[Vertex] {
        &self.inputs
    }

    /// The output set O, ascending.
    pub fn outputs(&self) -> &[Vertex] {
        &self.outputs
    }

    /// Number of outputs, `k = |O|`.
    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_input(&self, v: Vertex) -> bool {
        self.is_input[v]
    }

    pub fn is_output(&self, v: Vertex) -> bool {
        self.is_output[v]
    }

    /// Iᶜ, ascending.
    pub fn non_inputs(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.graph.vertices().filter(|&v| !self.is_input[v])
    }

    /// Oᶜ, the measured vertices, ascending.
    pub fn non_outputs(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.graph.vertices().filter(|&v| !self.is_output[v])
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Label to id lookup table.
    pub fn label_index(&self) -> HashMap<&str, Vertex> {
        self.labels
            .iter()
            .enumerate()
            .map(|(v, l)| (l.as_str(), v))
            .collect()
    }

    /// Same inputs, outputs and labels over a different graph on the same
    /// vertex set.
    pub fn with_graph(&self, graph: Graph) -> Result<Self, GraphError> {
        Geometry::with_labels(
            graph,
            self.inputs.iter().copied(),
            self.outputs.iter().copied(),
            self.labels.clone(),
        )
    }

    /// Same graph and outputs with a different input set.
    pub fn with_inputs<I: IntoIterator<Item = Vertex>>(&self, inputs: I) -> Result<Self, GraphError> {
        Geometry::with_labels(
            self.graph.clone(),
            inputs,
            self.outputs.iter().copied(),
            self.labels.clone(),
        )
    }
}

/// A directed multigraph; loops and parallel arcs are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Digraph {
    successors: Vec<Vec<Vertex>>,
    arc_count: usize,
}

impl Digraph {
    pub fn empty(vertex_count: usize) -> Self {
        Digraph {
            successors: vec![Vec::new(); vertex_count],
            arc_count: 0,
        }
    }

    pub fn from_arcs<I>(vertex_count: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut d = Digraph::empty(vertex_count);
        for (u, v) in arcs {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }

    pub fn add_arc(&mut self, from: Vertex, to: Vertex) -> Result<(), GraphError> {
        let n = self.vertex_count();
        for w in [from, to] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: w,
                    vertex_count: n,
                });
            }
        }
        self.successors[from].push(to);
        self.arc_count += 1;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.successors.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Out-neighbours of `v` in insertion order (with multiplicity).
    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        &self.successors[v]
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    pub fn has_arc(&self, from: Vertex, to: Vertex) -> bool {
        self.successors
            .get(from)
            .is_some_and(|list| list.contains(&to))
    }

    /// Predecessor lists, each ascending.
    pub fn predecessors(&self) -> Vec<Vec<Vertex>> {
        let mut preds = vec![Vec::new(); self.vertex_count()];
        for (u, v) in self.arcs() {
            preds[v].push(u);
        }
        for list in &mut preds {
            list.sort_unstable();
        }
        preds
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn neighbors_of_path_middle() {
        let g = path3();
        assert_eq!(g.neighbors(1).unwrap(), &[0, 2]);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn isolated_vertex_has_no_neighbors() {
        let g = Graph::empty(2);
        assert!(g.neighbors(0).unwrap().is_empty());
        assert!(matches!(
            g.neighbors(5),
            Err(GraphError::VertexOutOfRange { vertex: 5, .. })
        ));
    }

    #[test]
    fn rejects_loops_and_parallel_edges() {
        assert_eq!(
            Graph::from_edges(2, [(1, 1)]),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            Graph::from_edges(2, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(1, 0))
        );
    }

    #[test]
    fn edges_are_listed_once() {
        let g = Graph::from_edges(4, [(2, 0), (3, 1), (0, 1)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 3)]);
        let degree_sum: usize = g.vertices().map(|v| g.degree(v)).sum();
        assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn geometry_complements() {
        let geom = Geometry::new(path3(), [0], [2]).unwrap();
        assert_eq!(geom.non_inputs().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(geom.non_outputs().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(geom.output_count(), 1);
    }

    #[test]
    fn inputs_may_equal_outputs() {
        let geom = Geometry::new(Graph::empty(2), [0, 1], [1, 0]).unwrap();
        assert_eq!(geom.inputs(), geom.outputs());
        assert_eq!(geom.non_outputs().count(), 0);
    }

    #[test]
    fn empty_geometry_is_valid() {
        let geom = Geometry::new(Graph::empty(0), [], []).unwrap();
        assert_eq!(geom.vertex_count(), 0);
        assert_eq!(geom.edge_count(), 0);
    }

    #[test]
    fn digraph_keeps_loops_and_multiarcs() {
        let d = Digraph::from_arcs(2, [(0, 0), (0, 1), (0, 1)]).unwrap();
        assert_eq!(d.arc_count(), 3);
        assert_eq!(d.predecessors()[1], vec![0, 0]);
    }
}
