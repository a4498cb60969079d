use thiserror::Error;

use crate::graph::{Geometry, Vertex};
use crate::topo::is_acyclic;

use super::digraph::build_influencing_digraph;
use super::search::flow_from_image;
use super::{CausalFlow, SuccessorFunction};

pub const DEFAULT_ORACLE_BOUND: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("geometry has {vertex_count} vertices, oracle bound is {bound}")]
pub struct OracleError {
    pub vertex_count: usize,
    pub bound: usize,
}

/// Exhaustive flow search.
///
/// Enumerates every injective `f: Oᶜ -> Iᶜ` with `x ~ f(x)` in lexicographic
/// order of `(f(x_1), f(x_2), ...)` over measured vertices ascending, and
/// returns the first whose influencing digraph is acyclic.
pub fn brute_force_flow(geom: &Geometry, bound: usize) -> Result<Option<CausalFlow>, OracleError> {
    let n = geom.vertex_count();
    if n > bound {
        return Err(OracleError {
            vertex_count: n,
            bound,
        });
    }
    let measured: Vec<Vertex> = geom.non_outputs().collect();
    let options: Vec<Vec<Vertex>> = measured
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

    let mut image = vec![None; n];
    let mut used = vec![false; n];
    let found = enumerate(geom, &measured, &options, 0, &mut image, &mut used);
    Ok(found.then(|| flow_from_image(geom, image)))
}

fn enumerate(
    geom: &Geometry,
    measured: &[Vertex],
    options: &[Vec<Vertex>],
    depth: usize,
    image: &mut Vec<Option<Vertex>>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == measured.len() {
        let f = SuccessorFunction::from_image_unchecked(image.clone());
        return is_acyclic(build_influencing_digraph(geom, &f).digraph());
    }
    let x = measured[depth];
    for &t in &options[depth] {
        if used[t] {
            continue;
        }
        used[t] = true;
        image[x] = Some(t);
        if enumerate(geom, measured, options, depth + 1, image, used) {
            return true;
        }
        image[x] = None;
        used[t] = false;
    }
    false
}
