//! Causal flows: successor functions, path covers, the influencing digraph
//! and flow search.
//!
//! A causal flow on a geometry `(G, I, O)` is a map `f: Oᶜ -> Iᶜ` together
//! with a partial order `⪯` such that for every measured vertex `x`:
//!
//! - `x ~ f(x)`,
//! - `x ⪯ f(x)`,
//! - `y ~ f(x)` implies `x ⪯ y`.
//!
//! The orbits of `f` form a vertex-disjoint path cover of `G`, and `f`
//! extends to a flow exactly when the influencing digraph built from it is
//! acyclic. [`find_causal_flow`] searches saturating matchings `Oᶜ -> Iᶜ` for
//! one whose digraph is acyclic; [`brute_force_flow`] enumerates every
//! candidate map and is used as a correctness oracle.

mod digraph;
pub(crate) mod matching;
mod oracle;
mod search;

use std::fmt;

use thiserror::Error;

use crate::graph::{Geometry, Vertex};

pub use digraph::{acyclic_order, build_influencing_digraph, InfluencingDigraph, NaturalPreorder};
pub use oracle::{brute_force_flow, OracleError, DEFAULT_ORACLE_BOUND};
pub use search::{
    find_causal_flow, find_path_cover, CoverOutcome, FlowOutcome, NoFlowReason, SearchConfig,
    DEFAULT_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("successor is undefined on non-output vertex {0}")]
    MissingSuccessor(Vertex),
    #[error("successor is defined on output vertex {0}")]
    SuccessorOnOutput(Vertex),
    #[error("vertex {0} has two successors")]
    RepeatedSource(Vertex),
    #[error("successor {to} of {from} is an input vertex")]
    SuccessorIsInput { from: Vertex, to: Vertex },
    #[error("successor {to} of {from} is not adjacent to it")]
    NotAdjacent { from: Vertex, to: Vertex },
    #[error("vertices {first} and {second} share the successor {to}")]
    NotInjective {
        first: Vertex,
        second: Vertex,
        to: Vertex,
    },
    #[error("successor orbits contain a cycle through {0:?}")]
    Cycle(Vec<Vertex>),
    #[error("rank map covers {got} vertices, geometry has {expected}")]
    RankCount { expected: usize, got: usize },
}

/// A map `f: Oᶜ -> Iᶜ`.
///
/// [`SuccessorFunction::new`] enforces adjacency and injectivity as well as
/// the domain and codomain; [`SuccessorFunction::candidate`] checks only the
/// domain and codomain, so that an arbitrary proposed map can be handed to
/// [`verify_flow`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessorFunction {
    image: Vec<Option<Vertex>>,
}

impl SuccessorFunction {
    pub fn new<I>(geom: &Geometry, pairs: I) -> Result<Self, FlowError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let f = SuccessorFunction::candidate(geom, pairs)?;
        let mut preimage: Vec<Option<Vertex>> = vec![None; geom.vertex_count()];
        for (x, fx) in f.pairs() {
            if !geom.graph().is_adjacent(x, fx) {
                return Err(FlowError::NotAdjacent { from: x, to: fx });
            }
            if let Some(first) = preimage[fx].replace(x) {
                return Err(FlowError::NotInjective {
                    first,
                    second: x,
                    to: fx,
                });
            }
        }
        Ok(f)
    }

    /// Checks only that the map is defined on exactly `Oᶜ` and lands in `Iᶜ`.
    pub fn candidate<I>(geom: &Geometry, pairs: I) -> Result<Self, FlowError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let n = geom.vertex_count();
        let mut image = vec![None; n];
        for (x, fx) in pairs {
            if x >= n {
                return Err(FlowError::VertexOutOfRange(x));
            }
            if fx >= n {
                return Err(FlowError::VertexOutOfRange(fx));
            }
            if geom.is_output(x) {
                return Err(FlowError::SuccessorOnOutput(x));
            }
            if geom.is_input(fx) {
                return Err(FlowError::SuccessorIsInput { from: x, to: fx });
            }
            if image[x].replace(fx).is_some() {
                return Err(FlowError::RepeatedSource(x));
            }
        }
        if let Some(x) = geom.non_outputs().find(|&x| image[x].is_none()) {
            return Err(FlowError::MissingSuccessor(x));
        }
        Ok(SuccessorFunction { image })
    }

    pub(crate) fn from_image_unchecked(image: Vec<Option<Vertex>>) -> Self {
        SuccessorFunction { image }
    }

    pub fn get(&self, x: Vertex) -> Option<Vertex> {
        self.image.get(x).copied().flatten()
    }

    pub fn vertex_count(&self) -> usize {
        self.image.len()
    }

    /// `(x, f(x))` for every `x` in the domain, ascending by `x`.
    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.image
            .iter()
            .enumerate()
            .filter_map(|(x, fx)| fx.map(|fx| (x, fx)))
    }

    /// Splits the orbits of `f` into paths.
    pub fn orbits(&self, geom: &Geometry) -> Result<PathCover, FlowError> {
        let n = self.image.len();
        let mut has_preimage = vec![false; n];
        for (_, fx) in self.pairs() {
            has_preimage[fx] = true;
        }
        let mut seen = vec![false; n];
        let mut paths = Vec::new();
        for start in (0..n).filter(|&v| !has_preimage[v]) {
            let mut path = vec![start];
            seen[start] = true;
            let mut v = start;
            while let Some(next) = self.get(v) {
                if seen[next] {
                    break;
                }
                seen[next] = true;
                path.push(next);
                v = next;
            }
            paths.push(path);
        }
        if let Some(v) = (0..n).find(|&v| !seen[v]) {
            let mut cycle = vec![v];
            let mut w = self.get(v).expect("vertex on a cycle has a successor");
            while w != v {
                cycle.push(w);
                w = self.get(w).expect("vertex on a cycle has a successor");
            }
            return Err(FlowError::Cycle(cycle));
        }
        paths.sort_by_key(|p| *p.last().expect("paths are non-empty"));
        PathCover::new(geom, paths).map_err(|e| match e {
            CoverError::Flow(e) => e,
            other => unreachable!("orbits of a successor function violate {other}"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("vertex {0} lies on more than one path")]
    Repeated(Vertex),
    #[error("vertex {0} lies on no path")]
    Uncovered(Vertex),
    #[error("empty path")]
    EmptyPath,
    #[error("consecutive path vertices {0} and {1} are not adjacent")]
    NotAdjacent(Vertex, Vertex),
    #[error("input vertex {0} is not the start of its path")]
    InteriorInput(Vertex),
    #[error("output vertex {0} is not the end of its path")]
    InteriorOutput(Vertex),
    #[error("path ends at non-output vertex {0}")]
    EndsOutsideOutputs(Vertex),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// Vertex-disjoint directed paths covering `V(G)`, one per output vertex.
///
/// Each path meets `I` at most at its first vertex and meets `O` exactly at
/// its last vertex. Successive vertices give the successor function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCover {
    paths: Vec<Vec<Vertex>>,
    location: Vec<(usize, usize)>,
}

impl PathCover {
    pub fn new(geom: &Geometry, paths: Vec<Vec<Vertex>>) -> Result<Self, CoverError> {
        let n = geom.vertex_count();
        let mut location = vec![(usize::MAX, usize::MAX); n];
        for (i, path) in paths.iter().enumerate() {
            if path.is_empty() {
                return Err(CoverError::EmptyPath);
            }
            for (a, &v) in path.iter().enumerate() {
                if v >= n {
                    return Err(FlowError::VertexOutOfRange(v).into());
                }
                if location[v].0 != usize::MAX {
                    return Err(CoverError::Repeated(v));
                }
                location[v] = (i, a);
                if a > 0 {
                    if !geom.graph().is_adjacent(path[a - 1], v) {
                        return Err(CoverError::NotAdjacent(path[a - 1], v));
                    }
                    if geom.is_input(v) {
                        return Err(CoverError::InteriorInput(v));
                    }
                }
                if a + 1 < path.len() && geom.is_output(v) {
                    return Err(CoverError::InteriorOutput(v));
                }
            }
            let last = *path.last().unwrap();
            if !geom.is_output(last) {
                return Err(CoverError::EndsOutsideOutputs(last));
            }
        }
        if let Some(v) = (0..n).find(|&v| location[v].0 == usize::MAX) {
            return Err(CoverError::Uncovered(v));
        }
        Ok(PathCover { paths, location })
    }

    pub fn paths(&self) -> &[Vec<Vertex>] {
        &self.paths
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    /// `(path index, position)` of `v`, both zero-based.
    pub fn locate(&self, v: Vertex) -> (usize, usize) {
        self.location[v]
    }

    pub fn is_final(&self, v: Vertex) -> bool {
        let (i, a) = self.location[v];
        a + 1 == self.paths[i].len()
    }

    pub fn successor_function(&self) -> SuccessorFunction {
        let mut image = vec![None; self.location.len()];
        for path in &self.paths {
            for pair in path.windows(2) {
                image[pair[0]] = Some(pair[1]);
            }
        }
        SuccessorFunction { image }
    }
}

/// A successor function with a rank map witnessing the partial order:
/// `x ⪯ y` is realised as `rank[x] < rank[y]` (or `x = y`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalFlow {
    successor: SuccessorFunction,
    ranks: Vec<usize>,
}

impl CausalFlow {
    pub fn new(successor: SuccessorFunction, ranks: Vec<usize>) -> Result<Self, FlowError> {
        if ranks.len() != successor.vertex_count() {
            return Err(FlowError::RankCount {
                expected: successor.vertex_count(),
                got: ranks.len(),
            });
        }
        Ok(CausalFlow { successor, ranks })
    }

    pub fn successor(&self) -> &SuccessorFunction {
        &self.successor
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, v: Vertex) -> usize {
        self.ranks[v]
    }

    pub fn path_cover(&self, geom: &Geometry) -> Result<PathCover, FlowError> {
        self.successor.orbits(geom)
    }
}

/// The first flow condition that fails, with witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `x ~ f(x)` fails.
    NotAdjacent { x: Vertex, fx: Vertex },
    /// `x ⪯ f(x)` fails.
    SuccessorNotAfter { x: Vertex, fx: Vertex },
    /// `y ~ f(x)` holds but `x ⪯ y` fails.
    NeighborNotAfter { x: Vertex, fx: Vertex, y: Vertex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NotAdjacent { x, fx } => write!(f, "{x} is not adjacent to f({x}) = {fx}"),
            Violation::SuccessorNotAfter { x, fx } => {
                write!(f, "rank of {x} is not below rank of f({x}) = {fx}")
            }
            Violation::NeighborNotAfter { x, fx, y } => write!(
                f,
                "{y} is adjacent to f({x}) = {fx} but rank of {x} is not below rank of {y}"
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowCheck {
    Valid,
    Violated(Violation),
}

impl FlowCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, FlowCheck::Valid)
    }
}

/// Checks the three flow conditions against `geom`.
///
/// Shape problems (a successor missing on a measured vertex, a rank map of
/// the wrong size) are errors; failing conditions are reported as
/// [`FlowCheck::Violated`].
pub fn verify_flow(geom: &Geometry, flow: &CausalFlow) -> Result<FlowCheck, FlowError> {
    let n = geom.vertex_count();
    if flow.ranks.len() != n {
        return Err(FlowError::RankCount {
            expected: n,
            got: flow.ranks.len(),
        });
    }
    if flow.successor.vertex_count() != n {
        return Err(FlowError::VertexOutOfRange(flow.successor.vertex_count()));
    }
    for x in 0..n {
        match (geom.is_output(x), flow.successor.get(x)) {
            (false, None) => return Err(FlowError::MissingSuccessor(x)),
            (true, Some(_)) => return Err(FlowError::SuccessorOnOutput(x)),
            (_, Some(fx)) if geom.is_input(fx) => {
                return Err(FlowError::SuccessorIsInput { from: x, to: fx })
            }
            _ => {}
        }
    }

    let rank = &flow.ranks;
    for (x, fx) in flow.successor.pairs() {
        if !geom.graph().is_adjacent(x, fx) {
            return Ok(FlowCheck::Violated(Violation::NotAdjacent { x, fx }));
        }
        if rank[x] >= rank[fx] {
            return Ok(FlowCheck::Violated(Violation::SuccessorNotAfter { x, fx }));
        }
        for &y in geom.graph().adj(fx) {
            if y != x && rank[x] >= rank[y] {
                return Ok(FlowCheck::Violated(Violation::NeighborNotAfter { x, fx, y }));
            }
        }
    }
    Ok(FlowCheck::Valid)
}
