//! Search for a causal flow, then check it against the exhaustive oracle.
//!
//!     cargo run --example find_flow

use flowscope::flow::DEFAULT_ORACLE_BOUND;
use flowscope::{
    brute_force_flow, find_causal_flow, verify_flow, FlowOutcome, Geometry, Graph, SearchConfig,
};

fn main() {
    // a 2x3 grid, inputs on the left column, outputs on the right
    //   0 - 1 - 2
    //   |   |   |
    //   3 - 4 - 5
    let graph = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)])
        .unwrap();
    let geom = Geometry::new(graph, [0, 3], [2, 5]).unwrap();

    match find_causal_flow(&geom, &SearchConfig::default()) {
        FlowOutcome::Found { flow, by_oracle } => {
            for (x, fx) in flow.successor().pairs() {
                println!("f({x}) = {fx}");
            }
            println!("ranks: {:?}", flow.ranks());
            println!("valid: {}", verify_flow(&geom, &flow).unwrap().is_valid());
            println!("needed oracle: {by_oracle}");
        }
        FlowOutcome::NoFlow { reason, cycle } => println!("no flow ({}) {cycle:?}", reason.tag()),
        FlowOutcome::Undecided { rejected } => println!("undecided after {rejected} rejections"),
    }

    let oracle = brute_force_flow(&geom, DEFAULT_ORACLE_BOUND).unwrap();
    println!("oracle agrees: {}", oracle.is_some());
}
