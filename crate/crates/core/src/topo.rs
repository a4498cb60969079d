//! Layered topological sort with cycle certificates.

use std::collections::VecDeque;
use std::fmt;

use crate::graph::{Digraph, Vertex};

/// A directed cycle `v0 -> v1 -> ... -> v0`, rotated to start at its
/// smallest vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedCycle(pub Vec<Vertex>);

impl DirectedCycle {
    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    fn normalized(mut cycle: Vec<Vertex>) -> Self {
        if let Some(start) = (0..cycle.len()).min_by_key(|&i| cycle[i]) {
            cycle.rotate_left(start);
        }
        DirectedCycle(cycle)
    }

    /// Checks that every consecutive pair (wrapping around) is an arc of `d`.
    pub fn is_cycle_of(&self, d: &Digraph) -> bool {
        let c = &self.0;
        !c.is_empty() && (0..c.len()).all(|i| d.has_arc(c[i], c[(i + 1) % c.len()]))
    }
}

impl fmt::Display for DirectedCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            write!(f, "{v} -> ")?;
        }
        match self.0.first() {
            Some(v) => write!(f, "{v}"),
            None => Ok(()),
        }
    }
}

/// Longest-path layering of `d`.
///
/// Sources get rank 0 and every arc `u -> v` satisfies `rank[u] < rank[v]`.
/// If `d` has a cycle (a loop counts), one is returned instead.
pub fn topological_ranks(d: &Digraph) -> Result<Vec<usize>, DirectedCycle> {
    let n = d.vertex_count();
    let mut indegree = vec![0usize; n];
    for (_, v) in d.arcs() {
        indegree[v] += 1;
    }
    let mut rank = vec![0usize; n];
    let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut done = 0;
    while let Some(u) = queue.pop_front() {
        done += 1;
        for &v in d.successors(u) {
            rank[v] = rank[v].max(rank[u] + 1);
            indegree[v] -= 1;
            if indegree[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    if done == n {
        return Ok(rank);
    }

    // Every leftover vertex has a leftover predecessor, so walking backwards
    // from any of them must revisit a vertex.
    let preds = d.predecessors();
    let leftover = |v: Vertex| indegree[v] > 0;
    let start = (0..n).find(|&v| leftover(v)).expect("leftover vertex");
    let mut position = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut v = start;
    while position[v] == usize::MAX {
        position[v] = walk.len();
        walk.push(v);
        v = *preds[v]
            .iter()
            .find(|&&p| leftover(p))
            .expect("leftover predecessor");
    }
    let mut cycle = walk.split_off(position[v]);
    cycle.reverse();
    Err(DirectedCycle::normalized(cycle))
}

/// True iff the digraph has no directed cycle.
pub fn is_acyclic(d: &Digraph) -> bool {
    topological_ranks(d).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_arc_dag() {
        let d = Digraph::from_arcs(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(topological_ranks(&d).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn triangle_cycle_certificate() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let cycle = topological_ranks(&d).unwrap_err();
        assert_eq!(cycle.vertices(), &[0, 1, 2]);
        assert!(cycle.is_cycle_of(&d));
    }

    #[test]
    fn loop_is_a_cycle() {
        let d = Digraph::from_arcs(2, [(0, 1), (1, 1)]).unwrap();
        assert_eq!(topological_ranks(&d).unwrap_err().vertices(), &[1]);
    }

    #[test]
    fn cycle_reachable_from_acyclic_part() {
        // 0 -> 1 -> 2 -> 3 -> 1, plus 3 -> 4
        let d = Digraph::from_arcs(5, [(0, 1), (1, 2), (2, 3), (3, 1), (3, 4)]).unwrap();
        let cycle = topological_ranks(&d).unwrap_err();
        assert_eq!(cycle.vertices(), &[1, 2, 3]);
    }

    #[test]
    fn no_arcs_all_rank_zero() {
        assert_eq!(topological_ranks(&Digraph::empty(4)).unwrap(), vec![0; 4]);
    }
}
