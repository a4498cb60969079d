use std::collections::VecDeque;

use crate::graph::{Digraph, Geometry, Vertex};
use crate::topo::{topological_ranks, DirectedCycle};

use super::SuccessorFunction;

/// The loop-free influencing digraph of a successor function.
///
/// `x -> y` is an arc iff `x != y` and either `y = f(x)` or `y ~ f(x)`.
/// Arcs leave only measured vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfluencingDigraph {
    digraph: Digraph,
}

impl InfluencingDigraph {
    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn vertex_count(&self) -> usize {
        self.digraph.vertex_count()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.digraph.arcs()
    }

    pub fn has_arc(&self, from: Vertex, to: Vertex) -> bool {
        self.digraph.has_arc(from, to)
    }
}

/// Targets of the arcs leaving `x` when `f(x) = fx`, ascending.
pub(crate) fn arc_targets(geom: &Geometry, x: Vertex, fx: Vertex) -> Vec<Vertex> {
    let mut targets: Vec<Vertex> = geom
        .graph()
        .adj(fx)
        .iter()
        .copied()
        .chain([fx])
        .filter(|&y| y != x)
        .collect();
    targets.sort_unstable();
    targets
}

pub fn build_influencing_digraph(geom: &Geometry, f: &SuccessorFunction) -> InfluencingDigraph {
    let mut digraph = Digraph::empty(geom.vertex_count());
    for (x, fx) in f.pairs() {
        for y in arc_targets(geom, x, fx) {
            digraph
                .add_arc(x, y)
                .expect("successor function stays within the geometry");
        }
    }
    InfluencingDigraph { digraph }
}

/// Topological ranks of `d`, or a directed cycle when there is none.
pub fn acyclic_order(d: &InfluencingDigraph) -> Result<Vec<usize>, DirectedCycle> {
    topological_ranks(&d.digraph)
}

/// The natural pre-order of a successor function, answered by reachability
/// in its influencing digraph.
///
/// Nothing is materialised up front; each query is a breadth-first search.
#[derive(Debug, Clone)]
pub struct NaturalPreorder {
    digraph: InfluencingDigraph,
}

impl NaturalPreorder {
    pub fn new(geom: &Geometry, f: &SuccessorFunction) -> Self {
        NaturalPreorder {
            digraph: build_influencing_digraph(geom, f),
        }
    }

    pub fn digraph(&self) -> &InfluencingDigraph {
        &self.digraph
    }

    /// `x ⪯ y`.
    pub fn precedes(&self, x: Vertex, y: Vertex) -> bool {
        x == y || self.reachable_from(x)[y]
    }

    /// Every `y` with `x ⪯ y`.
    pub fn reachable_from(&self, x: Vertex) -> Vec<bool> {
        let d = self.digraph.digraph();
        let mut seen = vec![false; d.vertex_count()];
        seen[x] = true;
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            for &v in d.successors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Antisymmetry, which holds exactly when the digraph is acyclic.
    pub fn is_partial_order(&self) -> bool {
        acyclic_order(&self.digraph).is_ok()
    }
}
