//! The alternating six-cycle has a saturating matching but no flow: the
//! influencing digraph of every matching has a directed cycle.
//!
//!     cargo run --example six_cycle

use flowscope::flow::{acyclic_order, build_influencing_digraph};
use flowscope::{
    brute_force_flow, find_causal_flow, FlowOutcome, Geometry, Graph, SearchConfig,
    SuccessorFunction,
};

fn main() {
    let labels = ["a0", "b0", "a1", "b1", "a2", "b2"].map(String::from).to_vec();
    let graph = Graph::from_edges(6, (0..6).map(|v| (v, (v + 1) % 6))).unwrap();
    let geom = Geometry::with_labels(graph, [0, 2, 4], [1, 3, 5], labels).unwrap();

    let f = SuccessorFunction::new(&geom, [(0, 1), (2, 3), (4, 5)]).unwrap();
    let d = build_influencing_digraph(&geom, &f);
    for (x, y) in d.arcs() {
        println!("{} -> {}", geom.label(x), geom.label(y));
    }
    if let Err(cycle) = acyclic_order(&d) {
        let names: Vec<_> = cycle.vertices().iter().map(|&v| geom.label(v)).collect();
        println!("cycle: {}", names.join(" -> "));
    }

    match find_causal_flow(&geom, &SearchConfig::default()) {
        FlowOutcome::NoFlow { reason, .. } => println!("search: no flow ({})", reason.tag()),
        other => println!("search: {other:?}"),
    }
    println!("oracle: {:?}", brute_force_flow(&geom, 6).unwrap());
}
