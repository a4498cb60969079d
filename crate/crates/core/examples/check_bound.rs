//! Edge-bound check: a geometry with more than Γ(n, |O|) edges has no flow.
//!
//!     cargo run --example check_bound

use flowscope::{gamma, generate_extremal, ExtremalPartition};

fn main() {
    let p: ExtremalPartition = "6,8,9".parse().unwrap();
    let (geom, _) = generate_extremal(&p);
    let (n, k) = (geom.vertex_count() as u64, geom.output_count() as u64);
    let bound = gamma(n, k).unwrap();
    println!("G({p}): n = {n}, k = {k}, |E| = {}, Γ = {bound}", geom.edge_count());

    // any extra edge pushes it over
    let extra = geom.graph().with_edge(0, 22).unwrap();
    println!("with v1_1 ~ v3_9: |E| = {} > {bound}", extra.edge_count());

    for k in 1..=4 {
        println!("Γ(10, {k}) = {}", gamma(10, k).unwrap());
    }
}
