#![allow(dead_code)]

use flowscope::{Geometry, Graph, Vertex};

/// The alternating six-cycle `a0 b0 a1 b1 a2 b2` with `I = {a_i}` and
/// `O = {b_i}`. Ids: `a_i = 2i`, `b_i = 2i + 1`.
pub fn six_cycle() -> Geometry {
    let labels = ["a0", "b0", "a1", "b1", "a2", "b2"].map(String::from).to_vec();
    let edges = (0..6).map(|v| (v, (v + 1) % 6));
    let graph = Graph::from_edges(6, edges).unwrap();
    Geometry::with_labels(graph, [0, 2, 4], [1, 3, 5], labels).unwrap()
}

pub const SIX_CYCLE_JSON: &str = r#"{
  "vertices": ["a0", "b0", "a1", "b1", "a2", "b2"],
  "edges": [["a0", "b0"], ["b0", "a1"], ["a1", "b1"], ["b1", "a2"], ["a2", "b2"], ["b2", "a0"]],
  "inputs": ["a0", "a1", "a2"],
  "outputs": ["b0", "b1", "b2"]
}
"#;

/// Path `0 - 1 - ... - (n-1)` with input 0 and output `n - 1`.
pub fn path(n: usize) -> Geometry {
    let graph = Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap();
    Geometry::new(graph, [0], [n - 1]).unwrap()
}

/// Cycle of length `n` made of alternating input and output vertices.
pub fn alternating_cycle(n: usize) -> Geometry {
    let graph = Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap();
    Geometry::new(graph, (0..n).step_by(2), (1..n).step_by(2)).unwrap()
}

pub fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let edges = pairs(n)
        .into_iter()
        .enumerate()
        .filter(|(e, _)| mask >> e & 1 == 1)
        .map(|(_, pair)| pair);
    Graph::from_edges(n, edges).unwrap()
}

fn pairs(n: usize) -> Vec<(Vertex, Vertex)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One edge mask per isomorphism class of simple graphs on `n` vertices,
/// each the minimum mask of its class.
pub fn graphs_up_to_isomorphism(n: usize) -> Vec<u32> {
    let pairs = pairs(n);
    let mut index = vec![vec![0usize; n]; n];
    for (e, &(u, v)) in pairs.iter().enumerate() {
        index[u][v] = e;
        index[v][u] = e;
    }
    let perms = permutations(n);
    let mut reps = Vec::new();
    'mask: for mask in 0u32..1 << pairs.len() {
        for perm in &perms {
            let mut image = 0u32;
            for (e, &(u, v)) in pairs.iter().enumerate() {
                if mask >> e & 1 == 1 {
                    image |= 1 << index[perm[u]][perm[v]];
                }
            }
            if image < mask {
                continue 'mask;
            }
        }
        reps.push(mask);
    }
    reps
}

pub fn subsets(n: usize) -> impl Iterator<Item = Vec<Vertex>> {
    (0u32..1 << n).map(move |s| (0..n).filter(|&v| s >> v & 1 == 1).collect())
}
