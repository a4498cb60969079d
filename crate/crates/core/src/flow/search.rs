//! Flow search over saturating matchings `Oᶜ -> Iᶜ`.
//!
//! The pipeline is: reject by the edge bound, find a maximum matching of the
//! measured vertices into the non-inputs, and test its influencing digraph.
//! If that digraph has a cycle, a depth-first search fixes successors one
//! vertex at a time. A saturating completion of the fixed part is maintained
//! by augmenting paths, a partial digraph is kept alongside, and any choice
//! that closes a cycle in the partial digraph is rejected. The number of
//! rejected choices is capped by [`SearchConfig::budget`]; when the cap is hit
//! the answer is [`FlowOutcome::Undecided`] unless the instance is small
//! enough for the exhaustive oracle.

use crate::extremal::gamma;
use crate::graph::{Geometry, Vertex};
use crate::topo::{topological_ranks, DirectedCycle};

use super::digraph::{acyclic_order, arc_targets, build_influencing_digraph};
use super::matching::hopcroft_karp;
use super::oracle::brute_force_flow;
use super::{CausalFlow, PathCover, SuccessorFunction};

pub const DEFAULT_BUDGET: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of rejected partial matchings before giving up.
    pub budget: usize,
    /// Largest vertex count handed to the exhaustive oracle.
    pub oracle_bound: usize,
    /// Whether an exhausted budget falls back to the oracle when allowed.
    pub oracle_fallback: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            oracle_bound: super::DEFAULT_ORACLE_BOUND,
            oracle_fallback: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoFlowReason {
    /// `|E| > Γ(n, |O|)`.
    EdgeBound,
    /// No matching of `Oᶜ` into `Iᶜ` covers every measured vertex.
    NoCover,
    /// Every saturating matching yields a cyclic influencing digraph.
    CyclicDigraph,
    /// Decided by the exhaustive oracle after the search budget ran out.
    Oracle,
}

impl NoFlowReason {
    pub fn tag(&self) -> &'static str {
        match self {
            NoFlowReason::EdgeBound => "edge-bound",
            NoFlowReason::NoCover => "no-cover",
            NoFlowReason::CyclicDigraph => "cyclic-D",
            NoFlowReason::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowOutcome {
    Found {
        flow: CausalFlow,
        by_oracle: bool,
    },
    NoFlow {
        reason: NoFlowReason,
        /// A cycle in the digraph of the first matching tried, when one was
        /// built.
        cycle: Option<DirectedCycle>,
    },
    Undecided {
        rejected: usize,
    },
}

impl FlowOutcome {
    pub fn flow(&self) -> Option<&CausalFlow> {
        match self {
            FlowOutcome::Found { flow, .. } => Some(flow),
            _ => None,
        }
    }

    pub fn is_decided(&self) -> bool {
        !matches!(self, FlowOutcome::Undecided { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverOutcome {
    Found(PathCover),
    NoCover,
    Undecided,
}

impl CoverOutcome {
    pub fn cover(&self) -> Option<&PathCover> {
        match self {
            CoverOutcome::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// Finds a path cover whose successor function maps `Oᶜ` into `Iᶜ` along
/// edges, or proves none exists. Matchings whose orbits close into cycles are
/// skipped.
pub fn find_path_cover(geom: &Geometry, budget: usize) -> CoverOutcome {
    let Some(root) = saturating_matching(geom) else {
        return CoverOutcome::NoCover;
    };
    let mut search = Search::new(geom, Mode::Cover, root, budget);
    match search.run() {
        SearchResult::Accepted(image) => CoverOutcome::Found(
            SuccessorFunction::from_image_unchecked(image)
                .orbits(geom)
                .expect("accepted matchings have acyclic orbits"),
        ),
        SearchResult::Exhausted => CoverOutcome::NoCover,
        SearchResult::OverBudget => CoverOutcome::Undecided,
    }
}

/// Decides whether `geom` has a causal flow and builds one if so.
pub fn find_causal_flow(geom: &Geometry, config: &SearchConfig) -> FlowOutcome {
    let n = geom.vertex_count();
    let k = geom.output_count();
    if k >= 1 {
        let bound = gamma(n as u64, k as u64).expect("k <= n holds for any output set");
        if geom.edge_count() as u64 > bound {
            return FlowOutcome::NoFlow {
                reason: NoFlowReason::EdgeBound,
                cycle: None,
            };
        }
    }
    let Some(root) = saturating_matching(geom) else {
        return FlowOutcome::NoFlow {
            reason: NoFlowReason::NoCover,
            cycle: None,
        };
    };
    let root_f = SuccessorFunction::from_image_unchecked(root.clone());
    let first_cycle = acyclic_order(&build_influencing_digraph(geom, &root_f)).err();

    let mut search = Search::new(geom, Mode::Flow, root, config.budget);
    match search.run() {
        SearchResult::Accepted(image) => FlowOutcome::Found {
            flow: flow_from_image(geom, image),
            by_oracle: false,
        },
        SearchResult::Exhausted => FlowOutcome::NoFlow {
            reason: NoFlowReason::CyclicDigraph,
            cycle: first_cycle,
        },
        SearchResult::OverBudget => {
            if config.oracle_fallback && n <= config.oracle_bound {
                match brute_force_flow(geom, config.oracle_bound) {
                    Ok(Some(flow)) => FlowOutcome::Found {
                        flow,
                        by_oracle: true,
                    },
                    Ok(None) => FlowOutcome::NoFlow {
                        reason: NoFlowReason::Oracle,
                        cycle: first_cycle,
                    },
                    Err(_) => unreachable!("instance is within the oracle bound"),
                }
            } else {
                FlowOutcome::Undecided {
                    rejected: search.rejected,
                }
            }
        }
    }
}

pub(crate) fn flow_from_image(geom: &Geometry, image: Vec<Option<Vertex>>) -> CausalFlow {
    let f = SuccessorFunction::from_image_unchecked(image);
    let ranks = topological_ranks(build_influencing_digraph(geom, &f).digraph())
        .expect("accepted successor function has an acyclic digraph");
    CausalFlow::new(f, ranks).expect("rank map covers every vertex")
}

/// Maximum matching from `Oᶜ` into `Iᶜ` along edges, indexed by vertex, or
/// `None` if it leaves a measured vertex unmatched.
fn saturating_matching(geom: &Geometry) -> Option<Vec<Option<Vertex>>> {
    let n = geom.vertex_count();
    let left: Vec<Vertex> = geom.non_outputs().collect();
    let adj: Vec<Vec<Vertex>> = left
        .iter()
        .map(|&x| {
            geom.graph()
                .adj(x)
                .iter()
                .copied()
                .filter(|&y| !geom.is_input(y))
                .collect()
        })
        .collect();
    let m = hopcroft_karp(n, &adj);
    if !m.saturates_left() {
        return None;
    }
    let mut image = vec![None; n];
    for (i, &x) in left.iter().enumerate() {
        image[x] = m.mate_left[i];
    }
    Some(image)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Accept matchings whose orbits are paths.
    Cover,
    /// Accept matchings whose influencing digraph is acyclic.
    Flow,
}

enum SearchResult {
    Accepted(Vec<Option<Vertex>>),
    Exhausted,
    OverBudget,
}

enum Undo {
    Mate(Vertex, Option<Vertex>),
    MateOf(Vertex, Option<Vertex>),
}

struct Frame {
    vertex: Vertex,
    candidates: Vec<Vertex>,
    next: usize,
    /// Undo-log length before the current candidate was fixed, if one is.
    fixed_at: Option<usize>,
}

struct Search<'a> {
    geom: &'a Geometry,
    mode: Mode,
    measured: Vec<Vertex>,
    candidates: Vec<Vec<Vertex>>,
    /// Fixed successor per vertex.
    fixed: Vec<Option<Vertex>>,
    /// Fixed preimage per vertex.
    owner: Vec<Option<Vertex>>,
    /// Saturating completion of `fixed`.
    mate: Vec<Option<Vertex>>,
    mate_of: Vec<Option<Vertex>>,
    log: Vec<Undo>,
    /// Arcs of the influencing digraph leaving fixed vertices.
    partial_arcs: Vec<Vec<Vertex>>,
    budget: usize,
    rejected: usize,
    mark: Vec<usize>,
    epoch: usize,
}

impl<'a> Search<'a> {
    fn new(geom: &'a Geometry, mode: Mode, root: Vec<Option<Vertex>>, budget: usize) -> Self {
        let n = geom.vertex_count();
        let mut candidates = vec![Vec::new(); n];
        let measured: Vec<Vertex> = geom.non_outputs().collect();
        for &x in &measured {
            candidates[x] = geom
                .graph()
                .adj(x)
                .iter()
                .copied()
                .filter(|&y| !geom.is_input(y))
                .collect();
        }
        let mut mate_of = vec![None; n];
        for (x, t) in root.iter().enumerate() {
            if let Some(t) = *t {
                mate_of[t] = Some(x);
            }
        }
        Search {
            geom,
            mode,
            measured,
            candidates,
            fixed: vec![None; n],
            owner: vec![None; n],
            mate: root,
            mate_of,
            log: Vec::new(),
            partial_arcs: vec![Vec::new(); n],
            budget,
            rejected: 0,
            mark: vec![0; n],
            epoch: 0,
        }
    }

    fn run(&mut self) -> SearchResult {
        if self.accepts_completion() {
            return SearchResult::Accepted(self.mate.clone());
        }
        let mut stack: Vec<Frame> = Vec::new();
        let mut descend = true;
        loop {
            if descend {
                let Some(x) = self.most_constrained() else {
                    // Every vertex fixed without closing a cycle.
                    return SearchResult::Accepted(self.mate.clone());
                };
                let candidates = self.candidates[x]
                    .iter()
                    .copied()
                    .filter(|&t| self.owner[t].is_none())
                    .collect();
                stack.push(Frame {
                    vertex: x,
                    candidates,
                    next: 0,
                    fixed_at: None,
                });
            }
            descend = false;

            let Some(frame) = stack.last_mut() else {
                return SearchResult::Exhausted;
            };
            let x = frame.vertex;
            if let Some(at) = frame.fixed_at.take() {
                let t = self.fixed[x].expect("frame vertex is fixed");
                self.unfix(x, t, at);
            }
            if frame.next == frame.candidates.len() {
                stack.pop();
                if !stack.is_empty() && self.reject() {
                    return SearchResult::OverBudget;
                }
                continue;
            }
            let t = frame.candidates[frame.next];
            frame.next += 1;
            let at = self.log.len();
            let changed = self.mate[x] != Some(t);
            if self.try_fix(x, t) {
                stack.last_mut().unwrap().fixed_at = Some(at);
                if changed && self.accepts_completion() {
                    return SearchResult::Accepted(self.mate.clone());
                }
                descend = true;
            } else if self.reject() {
                return SearchResult::OverBudget;
            }
        }
    }

    /// Counts one rejection; true once the budget is exceeded.
    fn reject(&mut self) -> bool {
        self.rejected += 1;
        self.rejected > self.budget
    }

    fn accepts_completion(&mut self) -> bool {
        let f = SuccessorFunction::from_image_unchecked(self.mate.clone());
        match self.mode {
            Mode::Cover => f.orbits(self.geom).is_ok(),
            Mode::Flow => acyclic_order(&build_influencing_digraph(self.geom, &f)).is_ok(),
        }
    }

    /// Unfixed measured vertex with the fewest free candidates; ties go to
    /// the smallest id.
    fn most_constrained(&self) -> Option<Vertex> {
        self.measured
            .iter()
            .copied()
            .filter(|&x| self.fixed[x].is_none())
            .min_by_key(|&x| {
                let free = self.candidates[x]
                    .iter()
                    .filter(|&&t| self.owner[t].is_none())
                    .count();
                (free, x)
            })
    }

    fn try_fix(&mut self, x: Vertex, t: Vertex) -> bool {
        let targets = match self.mode {
            Mode::Flow => {
                let targets = arc_targets(self.geom, x, t);
                if self.reaches(&targets, x) {
                    return false;
                }
                targets
            }
            Mode::Cover => {
                let mut v = t;
                while let Some(next) = self.fixed[v] {
                    if next == x {
                        return false;
                    }
                    v = next;
                }
                if t == x {
                    return false;
                }
                Vec::new()
            }
        };

        let checkpoint = self.log.len();
        self.fixed[x] = Some(t);
        self.owner[t] = Some(x);
        if self.mate[x] != Some(t) {
            let displaced = self.mate_of[t];
            if let Some(old) = self.mate[x] {
                self.set_mate_of(old, None);
            }
            self.set_mate(x, Some(t));
            self.set_mate_of(t, Some(x));
            if let Some(d) = displaced {
                self.set_mate(d, None);
                if !self.augment(d) {
                    self.rollback(checkpoint);
                    self.fixed[x] = None;
                    self.owner[t] = None;
                    return false;
                }
            }
        }
        self.partial_arcs[x] = targets;
        true
    }

    fn unfix(&mut self, x: Vertex, t: Vertex, checkpoint: usize) {
        self.partial_arcs[x].clear();
        self.fixed[x] = None;
        self.owner[t] = None;
        self.rollback(checkpoint);
    }

    /// Whether `goal` is reachable from any of `sources` along partial arcs.
    fn reaches(&mut self, sources: &[Vertex], goal: Vertex) -> bool {
        self.epoch += 1;
        let epoch = self.epoch;
        let mut stack: Vec<Vertex> = Vec::new();
        for &s in sources {
            if self.mark[s] != epoch {
                self.mark[s] = epoch;
                stack.push(s);
            }
        }
        while let Some(u) = stack.pop() {
            if u == goal {
                return true;
            }
            for &v in &self.partial_arcs[u] {
                if self.mark[v] != epoch {
                    self.mark[v] = epoch;
                    stack.push(v);
                }
            }
        }
        false
    }

    /// Re-matches the unmatched vertex `root` by an augmenting path through
    /// unfixed vertices and unowned targets.
    fn augment(&mut self, root: Vertex) -> bool {
        self.epoch += 1;
        let epoch = self.epoch;
        let mut stack = vec![(root, 0usize)];
        let mut via: Vec<Vertex> = Vec::new();
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            let Some(&t) = self.candidates[u].get(*next) else {
                stack.pop();
                via.pop();
                continue;
            };
            *next += 1;
            if self.owner[t].is_some() || self.mark[t] == epoch {
                continue;
            }
            self.mark[t] = epoch;
            via.push(t);
            match self.mate_of[t] {
                None => {
                    let path: Vec<(Vertex, Vertex)> = stack
                        .iter()
                        .map(|&(l, _)| l)
                        .zip(via.iter().copied())
                        .collect();
                    for (l, r) in path {
                        self.set_mate(l, Some(r));
                        self.set_mate_of(r, Some(l));
                    }
                    return true;
                }
                Some(w) => stack.push((w, 0)),
            }
        }
        false
    }

    fn set_mate(&mut self, x: Vertex, t: Option<Vertex>) {
        self.log.push(Undo::Mate(x, self.mate[x]));
        self.mate[x] = t;
    }

    fn set_mate_of(&mut self, t: Vertex, x: Option<Vertex>) {
        self.log.push(Undo::MateOf(t, self.mate_of[t]));
        self.mate_of[t] = x;
    }

    fn rollback(&mut self, checkpoint: usize) {
        while self.log.len() > checkpoint {
            match self.log.pop().unwrap() {
                Undo::Mate(x, old) => self.mate[x] = old,
                Undo::MateOf(t, old) => self.mate_of[t] = old,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{verify_flow, FlowCheck};
    use crate::graph::Graph;

    fn cycle_geometry(half: usize) -> Geometry {
        // a_i = 2i, b_i = 2i + 1; cycle a0 b0 a1 b1 ...
        let n = 2 * half;
        let edges = (0..n).map(|v| (v, (v + 1) % n));
        let g = Graph::from_edges(n, edges).unwrap();
        Geometry::new(g, (0..half).map(|i| 2 * i), (0..half).map(|i| 2 * i + 1)).unwrap()
    }

    #[test]
    fn path_graph_flow() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let geom = Geometry::new(g, [0], [3]).unwrap();
        let out = find_causal_flow(&geom, &SearchConfig::default());
        let flow = out.flow().expect("path has a flow");
        assert_eq!(verify_flow(&geom, flow), Ok(FlowCheck::Valid));
        assert_eq!(flow.ranks(), &[0, 1, 2, 3]);
    }

    #[test]
    fn alternating_cycle_has_no_flow() {
        let out = find_causal_flow(&cycle_geometry(3), &SearchConfig::default());
        match out {
            FlowOutcome::NoFlow {
                reason: NoFlowReason::CyclicDigraph,
                cycle: Some(cycle),
            } => assert_eq!(cycle.vertices(), &[0, 2, 4]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_budget_on_large_cycle_is_undecided() {
        let config = SearchConfig {
            budget: 0,
            ..SearchConfig::default()
        };
        assert!(matches!(
            find_causal_flow(&cycle_geometry(6), &config),
            FlowOutcome::Undecided { .. }
        ));
        // with a budget the search proves there is none
        assert!(matches!(
            find_causal_flow(&cycle_geometry(6), &SearchConfig::default()),
            FlowOutcome::NoFlow {
                reason: NoFlowReason::CyclicDigraph,
                ..
            }
        ));
    }

    #[test]
    fn small_instance_falls_back_to_oracle() {
        let config = SearchConfig {
            budget: 0,
            ..SearchConfig::default()
        };
        assert!(matches!(
            find_causal_flow(&cycle_geometry(3), &config),
            FlowOutcome::NoFlow {
                reason: NoFlowReason::Oracle,
                ..
            }
        ));
    }

    #[test]
    fn complete_graph_rejected_by_edge_bound() {
        let edges = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v)));
        let geom = Geometry::new(Graph::from_edges(5, edges).unwrap(), [0], [4]).unwrap();
        assert!(matches!(
            find_causal_flow(&geom, &SearchConfig::default()),
            FlowOutcome::NoFlow {
                reason: NoFlowReason::EdgeBound,
                ..
            }
        ));
    }

    #[test]
    fn unmatched_vertex_means_no_cover() {
        // star with three leaves, centre measured, leaves all inputs
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let geom = Geometry::new(g, [0, 1, 2, 3], [1, 2, 3]).unwrap();
        assert_eq!(find_path_cover(&geom, DEFAULT_BUDGET), CoverOutcome::NoCover);
        assert!(matches!(
            find_causal_flow(&geom, &SearchConfig::default()),
            FlowOutcome::NoFlow {
                reason: NoFlowReason::NoCover,
                ..
            }
        ));
    }

    #[test]
    fn cover_search_skips_orbit_cycles() {
        // triangle 0-1-2 plus pendant 2-3; O = {3}, I = {}.
        // Matchings like 0->1, 1->0 close a cycle; a path cover must exist.
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let geom = Geometry::new(g, [], [3]).unwrap();
        let cover = find_path_cover(&geom, DEFAULT_BUDGET);
        let cover = cover.cover().expect("hamiltonian path ends at 3");
        assert_eq!(cover.path_count(), 1);
        assert_eq!(cover.paths()[0].last(), Some(&3));
    }

    #[test]
    fn trivial_paths_when_inputs_equal_outputs() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let geom = Geometry::new(g, [0, 1, 2], [0, 1, 2]).unwrap();
        let cover = find_path_cover(&geom, DEFAULT_BUDGET);
        assert_eq!(
            cover.cover().unwrap().paths(),
            &[vec![0], vec![1], vec![2]]
        );
    }
}
