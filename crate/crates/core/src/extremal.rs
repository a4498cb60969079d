//! The edge bound `Γ(n, k) = kn - k(k+1)/2` and the graphs that meet it.
//!
//! For a sorted partition `n_1 <= ... <= n_k` of `n`, [`generate_extremal`]
//! builds paths `P_i = v_{i,1} ... v_{i,n_i}` and joins every pair `i < j`
//! with `n_i + n_j - 1` connecting edges:
//!
//! 1. `v_{i,a} v_{j,a}` for `1 <= a < n_i`;
//! 2. `v_{i,a+1} v_{j,a}` for `1 <= a < n_i`;
//! 3. `v_{i,n_i} v_{j,a}` for `n_i <= a <= n_j`.
//!
//! With inputs `v_{i,1}` and outputs `v_{i,n_i}` the resulting geometry has
//! a causal flow and exactly `Γ(n, k)` edges.
//!
//! Path indices and positions in this module's public API are 1-based, as in
//! the vertex labels `v{i}_{a}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::flow::{build_influencing_digraph, PathCover};
use crate::graph::{Geometry, Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtremalError {
    #[error("Γ(n, k) needs n >= k >= 1, got n = {n}, k = {k}")]
    GammaDomain { n: u64, k: u64 },
    #[error("partition is empty")]
    EmptyPartition,
    #[error("partition part {0} is zero")]
    ZeroPart(usize),
    #[error("partition is not sorted non-decreasingly at position {0}")]
    Unsorted(usize),
    #[error("invalid partition syntax {0:?}")]
    Syntax(String),
    #[error("path pair ({i}, {j}) is invalid for {k} paths")]
    PathPair { i: usize, j: usize, k: usize },
    #[error("arc {from} -> {to} matches no construction rule")]
    UnclassifiedArc { from: Vertex, to: Vertex },
}

/// `Γ(n, k) = kn - k(k+1)/2`.
pub fn gamma(n: u64, k: u64) -> Result<u64, ExtremalError> {
    if k < 1 || n < k {
        return Err(ExtremalError::GammaDomain { n, k });
    }
    Ok(k * n - k * (k + 1) / 2)
}

/// A sorted integer partition `n_1 <= ... <= n_k` with every part positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtremalPartition {
    parts: Vec<usize>,
}

impl ExtremalPartition {
    /// Rejects unsorted input rather than sorting it.
    pub fn new(parts: Vec<usize>) -> Result<Self, ExtremalError> {
        if parts.is_empty() {
            return Err(ExtremalError::EmptyPartition);
        }
        if let Some(i) = parts.iter().position(|&p| p == 0) {
            return Err(ExtremalError::ZeroPart(i + 1));
        }
        if let Some(i) = parts.windows(2).position(|w| w[0] > w[1]) {
            return Err(ExtremalError::Unsorted(i + 2));
        }
        Ok(ExtremalPartition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `n`, the sum of the parts.
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `k`, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Length of path `i` (1-based).
    pub fn part(&self, i: usize) -> usize {
        self.parts[i - 1]
    }

    /// Every sorted partition of `n`, in lexicographic order.
    pub fn all_of(n: usize) -> Vec<ExtremalPartition> {
        fn go(rest: usize, min: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest == 0 {
                out.push(current.clone());
                return;
            }
            for part in min..=rest {
                current.push(part);
                go(rest - part, part, current, out);
                current.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            go(n, 1, &mut Vec::new(), &mut out);
        }
        out.into_iter()
            .map(|parts| ExtremalPartition { parts })
            .collect()
    }

    fn offset(&self, i: usize) -> usize {
        self.parts[..i - 1].iter().sum()
    }

    /// Dense id of `v_{i,a}`.
    pub fn vertex(&self, i: usize, a: usize) -> Vertex {
        self.offset(i) + a - 1
    }
}

impl FromStr for ExtremalPartition {
    type Err = ExtremalError;

    /// Comma-separated positive integers, e.g. `6,8,9`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ExtremalError::Syntax(s.to_string()))?;
        ExtremalPartition::new(parts)
    }
}

impl fmt::Display for ExtremalPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Builds `G(n_1, ..., n_k)` with its defining path cover.
///
/// Vertex ids run path by path; `v_{i,a}` is labelled `v{i}_{a}`.
pub fn generate_extremal(p: &ExtremalPartition) -> (Geometry, PathCover) {
    let n = p.total();
    let k = p.len();
    let mut edges = BTreeSet::new();
    let mut add = |u: Vertex, v: Vertex| {
        edges.insert((u.min(v), u.max(v)));
    };
    for i in 1..=k {
        for a in 1..p.part(i) {
            add(p.vertex(i, a), p.vertex(i, a + 1));
        }
    }
    for i in 1..=k {
        let ni = p.part(i);
        for j in i + 1..=k {
            let nj = p.part(j);
            for a in 1..ni {
                add(p.vertex(i, a), p.vertex(j, a));
                add(p.vertex(i, a + 1), p.vertex(j, a));
            }
            for a in ni..=nj {
                add(p.vertex(i, ni), p.vertex(j, a));
            }
        }
    }
    let graph = Graph::from_edges(n, edges).expect("generated edges are simple");
    let labels = (1..=k)
        .flat_map(|i| (1..=p.part(i)).map(move |a| format!("v{i}_{a}")))
        .collect();
    let inputs = (1..=k).map(|i| p.vertex(i, 1));
    let outputs = (1..=k).map(|i| p.vertex(i, p.part(i)));
    let geom = Geometry::with_labels(graph, inputs, outputs, labels)
        .expect("generated labels are unique");
    let paths = (1..=k)
        .map(|i| (1..=p.part(i)).map(|a| p.vertex(i, a)).collect())
        .collect();
    let cover = PathCover::new(&geom, paths).expect("generated paths form a cover");
    (geom, cover)
}

/// Connecting edges between paths `i < j` (1-based) in `G(n_1, ..., n_k)`:
/// `n_i + n_j - 1`.
pub fn count_connecting_edges(
    p: &ExtremalPartition,
    i: usize,
    j: usize,
) -> Result<usize, ExtremalError> {
    if i < 1 || i >= j || j > p.len() {
        return Err(ExtremalError::PathPair { i, j, k: p.len() });
    }
    Ok(p.part(i) + p.part(j) - 1)
}

/// Classification of the arcs of the influencing digraph of
/// `G(n_1, ..., n_k)`.
///
/// For paths `i < j`, with `a` ranging as shown:
///
/// | tag | arc | range |
/// |-----|-----|-------|
/// | (a) | `v_{i,a-1} -> v_{j,a}` | `1 < a <= n_i` |
/// | (b) | `v_{j,a-1} -> v_{i,a}` | `1 < a <= n_i` |
/// | (c) | `v_{i,a} -> v_{j,a}` | `1 <= a <= n_i - 1` |
/// | (d) | `v_{j,a-1} -> v_{i,a+1}` | `1 < a <= n_i - 1` |
/// | (e) | `v_{i,n_i-1} -> v_{j,a}` | `n_i <= a <= n_j` |
/// | (f) | `v_{j,a-1} -> v_{i,n_i}` | `max(n_i, 2) <= a <= n_j` |
///
/// At `a = n_i` the ranges of (a) and (e), and of (b) and (f), share an arc;
/// the earlier letter wins. [`ArcType::Path`] marks arcs between two vertices
/// of one path: the successor arc `v_{i,a} -> v_{i,a+1}` and the arc
/// `v_{i,a} -> v_{i,a+2}` induced by the path edge after it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcType {
    Path,
    A,
    B,
    C,
    D,
    E,
    F,
}

impl fmt::Display for ArcType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArcType::Path => "path",
            ArcType::A => "a",
            ArcType::B => "b",
            ArcType::C => "c",
            ArcType::D => "d",
            ArcType::E => "e",
            ArcType::F => "f",
        };
        f.write_str(s)
    }
}

/// Which construction rule an edge between paths `i < j` belongs to, from
/// its 1-based positions `a` on `P_i` and `b` on `P_j`.
fn connecting_rule(a: usize, b: usize, ni: usize) -> Option<u8> {
    if a == b && a < ni {
        Some(1)
    } else if a == b + 1 && b < ni {
        Some(2)
    } else if a == ni && b >= ni {
        Some(3)
    } else {
        None
    }
}

/// Tag of an arc between paths `i < j`, from 1-based source and target
/// positions; `from_lower` says the arc leaves `P_i`.
fn arc_tag(from_lower: bool, s: usize, t: usize, ni: usize, nj: usize) -> Option<ArcType> {
    if from_lower {
        if t == s + 1 && 1 < t && t <= ni {
            Some(ArcType::A)
        } else if t == s && s < ni {
            Some(ArcType::C)
        } else if s + 1 == ni && ni <= t && t <= nj {
            Some(ArcType::E)
        } else {
            None
        }
    } else {
        let a = s + 1;
        if t == a && 1 < a && a <= ni {
            Some(ArcType::B)
        } else if t == a + 1 && 1 < a && a < ni {
            Some(ArcType::D)
        } else if t == ni && ni.max(2) <= a && a <= nj {
            Some(ArcType::F)
        } else {
            None
        }
    }
}

/// Tags every arc of `D(G, P_1, ..., P_k)`.
///
/// The arc `x -> y` with `y != f(x)` is induced by the edge `f(x) y`, which
/// must be a path edge or one of the three kinds of connecting edge;
/// anything else is an error.
pub fn classify_arcs(
    geom: &Geometry,
    cover: &PathCover,
) -> Result<BTreeMap<(Vertex, Vertex), ArcType>, ExtremalError> {
    let f = cover.successor_function();
    let d = build_influencing_digraph(geom, &f);
    let len = |i: usize| cover.paths()[i].len();
    let mut tags = BTreeMap::new();
    for (x, y) in d.arcs() {
        let fx = f.get(x).expect("arcs leave measured vertices");
        let unclassified = ExtremalError::UnclassifiedArc { from: x, to: y };
        let (p, a) = cover.locate(fx);
        let (q, b) = cover.locate(y);
        let tag = if p == q {
            if y != fx && a.abs_diff(b) != 1 {
                return Err(unclassified);
            }
            ArcType::Path
        } else {
            let (lower, upper) = (p.min(q), p.max(q));
            let (ni, nj) = (len(lower), len(upper));
            let (on_lower, on_upper) = if p < q { (a + 1, b + 1) } else { (b + 1, a + 1) };
            if connecting_rule(on_lower, on_upper, ni).is_none() {
                return Err(unclassified);
            }
            let s = cover.locate(x).1 + 1;
            arc_tag(p < q, s, b + 1, ni, nj).ok_or(unclassified)?
        };
        tags.insert((x, y), tag);
    }
    Ok(tags)
}

/// The lexicographic certificate behind acyclicity of the generated digraph.
///
/// Writing `v_{i,a}` for the vertex at position `a` of path `i`, every arc
/// `v_{i,a} -> v_{j,b}` must either increase `(a, i)` lexicographically or
/// end at the final vertex of its path, and no arc may leave a final vertex.
/// Any digraph passing this check is acyclic.
pub fn lex_acyclicity_certificate(geom: &Geometry, cover: &PathCover) -> bool {
    let d = build_influencing_digraph(geom, &cover.successor_function());
    let certified = d.arcs().all(|(x, y)| {
        let (i, a) = cover.locate(x);
        let (j, b) = cover.locate(y);
        !cover.is_final(x) && ((a, i) < (b, j) || cover.is_final(y))
    });
    certified
}

/// A witness that the cover's digraph must contain a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservationViolation {
    /// Edge between positions `a` and `b > a + 1` of one path (1-based).
    Chord { path: usize, a: usize, b: usize },
    /// Edges `v_a w_b` and `v_c w_d` between paths `first` and `second` with
    /// `a < c` and `b > d`.
    Crossing {
        first: usize,
        second: usize,
        ab: (usize, usize),
        cd: (usize, usize),
    },
}

/// First chord or crossing pair of connecting edges, if any.
pub fn observation_violation(geom: &Geometry, cover: &PathCover) -> Option<ObservationViolation> {
    let mut between: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (u, v) in geom.graph().edges() {
        let (p, a) = cover.locate(u);
        let (q, b) = cover.locate(v);
        if p == q {
            if a.abs_diff(b) > 1 {
                return Some(ObservationViolation::Chord {
                    path: p + 1,
                    a: a.min(b) + 1,
                    b: a.max(b) + 1,
                });
            }
        } else if p < q {
            between.entry((p, q)).or_default().push((a + 1, b + 1));
        } else {
            between.entry((q, p)).or_default().push((b + 1, a + 1));
        }
    }
    for ((p, q), mut edges) in between {
        edges.sort_unstable();
        // highest b among edges with strictly smaller a
        let mut best: Option<(usize, usize)> = None;
        let mut group_best: Option<(usize, usize)> = None;
        let mut group_a = 0;
        for &(a, b) in &edges {
            if a != group_a {
                best = higher_b(best, group_best);
                group_best = None;
                group_a = a;
            }
            if let Some(prev) = best {
                if prev.1 > b {
                    return Some(ObservationViolation::Crossing {
                        first: p + 1,
                        second: q + 1,
                        ab: prev,
                        cd: (a, b),
                    });
                }
            }
            group_best = higher_b(group_best, Some((a, b)));
        }
    }
    None
}

fn higher_b(x: Option<(usize, usize)>, y: Option<(usize, usize)>) -> Option<(usize, usize)> {
    match (x, y) {
        (Some(x), Some(y)) => Some(if y.1 > x.1 { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// No chords within a path and no crossing connecting edges between any
/// two paths. Both are necessary for the cover's digraph to be acyclic.
pub fn observation_checks(geom: &Geometry, cover: &PathCover) -> bool {
    observation_violation(geom, cover).is_none()
}

/// `λ(v_{i,a} w_{j,b}) = a + b` for each connecting edge between paths
/// `i` and `j` (1-based), in order of `(a, b)`.
pub fn lambda_labels(
    geom: &Geometry,
    cover: &PathCover,
    i: usize,
    j: usize,
) -> Result<Vec<usize>, ExtremalError> {
    let k = cover.path_count();
    if i < 1 || j < 1 || i > k || j > k || i == j {
        return Err(ExtremalError::PathPair { i, j, k });
    }
    let mut positions: Vec<(usize, usize)> = Vec::new();
    let on_path: HashMap<Vertex, usize> = cover.paths()[j - 1]
        .iter()
        .enumerate()
        .map(|(b, &w)| (w, b + 1))
        .collect();
    for (a, &v) in cover.paths()[i - 1].iter().enumerate() {
        for w in geom.graph().adj(v) {
            if let Some(&b) = on_path.get(w) {
                positions.push((a + 1, b));
            }
        }
    }
    positions.sort_unstable();
    Ok(positions.into_iter().map(|(a, b)| a + b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> ExtremalPartition {
        s.parse().unwrap()
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(23, 3), Ok(63));
        assert_eq!(gamma(10, 1), Ok(9));
        assert_eq!(gamma(5, 5), Ok(10));
        assert!(gamma(2, 3).is_err());
        assert!(gamma(2, 0).is_err());
    }

    #[test]
    fn partition_validation() {
        assert_eq!(
            ExtremalPartition::new(vec![3, 2]),
            Err(ExtremalError::Unsorted(2))
        );
        assert_eq!(
            ExtremalPartition::new(vec![0, 2]),
            Err(ExtremalError::ZeroPart(1))
        );
        assert_eq!(ExtremalPartition::new(vec![]), Err(ExtremalError::EmptyPartition));
        assert!(matches!("6,x".parse::<ExtremalPartition>(), Err(ExtremalError::Syntax(_))));
        assert_eq!(part("6, 8,9").to_string(), "6,8,9");
    }

    #[test]
    fn partitions_of_small_n() {
        // p(1..=7) = 1, 2, 3, 5, 7, 11, 15
        let counts: Vec<usize> = (1..=7).map(|n| ExtremalPartition::all_of(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15]);
    }

    #[test]
    fn six_eight_nine_size() {
        let (geom, cover) = generate_extremal(&part("6,8,9"));
        assert_eq!(geom.vertex_count(), 23);
        assert_eq!(geom.edge_count(), 63);
        assert_eq!(cover.path_count(), 3);
        assert_eq!(geom.label(part("6,8,9").vertex(2, 3)), "v2_3");
    }

    #[test]
    fn two_singletons() {
        let (geom, _) = generate_extremal(&part("1,1"));
        assert_eq!(geom.graph().edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn two_by_two_edges() {
        let p = part("2,2");
        let (geom, _) = generate_extremal(&p);
        let v = |i, a| p.vertex(i, a);
        let mut expected = vec![
            (v(1, 1), v(1, 2)),
            (v(2, 1), v(2, 2)),
            (v(1, 1), v(2, 1)),
            (v(1, 2), v(2, 1)),
            (v(1, 2), v(2, 2)),
        ];
        expected.iter_mut().for_each(|e| *e = (e.0.min(e.1), e.0.max(e.1)));
        expected.sort_unstable();
        assert_eq!(geom.graph().edges().collect::<Vec<_>>(), expected);
        assert_eq!(geom.edge_count() as u64, gamma(4, 2).unwrap());
    }

    #[test]
    fn connecting_edge_counts() {
        assert_eq!(count_connecting_edges(&part("6,8,9"), 1, 2), Ok(13));
        assert_eq!(count_connecting_edges(&part("1,1"), 1, 2), Ok(1));
        assert_eq!(count_connecting_edges(&part("2,3"), 1, 2), Ok(4));
        assert!(count_connecting_edges(&part("2,3"), 2, 1).is_err());
        assert!(count_connecting_edges(&part("2,3"), 1, 3).is_err());
    }

    #[test]
    fn arc_tags_for_two_three() {
        let p = part("2,3");
        let (geom, cover) = generate_extremal(&p);
        let tags = classify_arcs(&geom, &cover).unwrap();
        assert_eq!(tags[&(p.vertex(1, 1), p.vertex(2, 2))], ArcType::A);
    }

    #[test]
    fn singletons_have_no_arcs() {
        let (geom, cover) = generate_extremal(&part("1,1"));
        assert!(classify_arcs(&geom, &cover).unwrap().is_empty());
    }

    #[test]
    fn lambda_for_two_by_two() {
        let (geom, cover) = generate_extremal(&part("2,2"));
        assert_eq!(lambda_labels(&geom, &cover, 1, 2), Ok(vec![2, 3, 4]));
        assert_eq!(lambda_labels(&geom, &cover, 2, 1), Ok(vec![2, 3, 4]));
        assert!(lambda_labels(&geom, &cover, 1, 1).is_err());
    }

    #[test]
    fn chord_is_caught() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let geom = Geometry::new(g, [0], [2]).unwrap();
        let cover = PathCover::new(&geom, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(
            observation_violation(&geom, &cover),
            Some(ObservationViolation::Chord { path: 1, a: 1, b: 3 })
        );
        assert!(!lex_acyclicity_certificate(&geom, &cover));
    }

    #[test]
    fn crossing_is_caught() {
        // paths v1 v2 (0, 1) and w1 w2 (2, 3); edges v1w2 and v2w1
        let g = Graph::from_edges(4, [(0, 1), (2, 3), (0, 3), (1, 2)]).unwrap();
        let geom = Geometry::new(g, [0, 2], [1, 3]).unwrap();
        let cover = PathCover::new(&geom, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(
            observation_violation(&geom, &cover),
            Some(ObservationViolation::Crossing {
                first: 1,
                second: 2,
                ab: (1, 2),
                cd: (2, 1)
            })
        );
        assert_eq!(lambda_labels(&geom, &cover, 1, 2), Ok(vec![3, 3]));
    }
}
