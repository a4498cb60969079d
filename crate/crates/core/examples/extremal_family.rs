//! Generate G(n_1, ..., n_k), tag its digraph arcs and list connecting-edge
//! labels between the first two paths.
//!
//!     cargo run --example extremal_family -- 6,8,9

use std::collections::BTreeMap;

use flowscope::extremal::{classify_arcs, lambda_labels, lex_acyclicity_certificate};
use flowscope::{gamma, generate_extremal, ExtremalPartition};

fn main() {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "6,8,9".into());
    let p: ExtremalPartition = arg.parse().unwrap_or_else(|e| panic!("{arg}: {e}"));
    let (geom, cover) = generate_extremal(&p);
    let bound = gamma(p.total() as u64, p.len() as u64).unwrap();
    println!("G({p}): {} vertices, {} edges, Γ = {bound}", geom.vertex_count(), geom.edge_count());
    println!("lex certificate: {}", lex_acyclicity_certificate(&geom, &cover));

    let mut histogram = BTreeMap::new();
    for tag in classify_arcs(&geom, &cover).unwrap().into_values() {
        *histogram.entry(tag.to_string()).or_insert(0) += 1;
    }
    println!("arc tags: {histogram:?}");

    if p.len() >= 2 {
        println!("λ(P1, P2): {:?}", lambda_labels(&geom, &cover, 1, 2).unwrap());
    }

    let sizes: Vec<usize> = (1..=8).map(|n| ExtremalPartition::all_of(n).len()).collect();
    println!("partitions of 1..=8: {sizes:?}");
}
