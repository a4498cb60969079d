//! Random geometries: compare the search pipeline with the exhaustive oracle
//! and count how often each no-flow reason fires.
//!
//!     cargo run --release --example matching_vs_search

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flowscope::{brute_force_flow, find_causal_flow, FlowOutcome, Geometry, Graph, SearchConfig};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut reasons = BTreeMap::new();
    let mut disagreements = 0;
    for _ in 0..2000 {
        let n = rng.gen_range(2..=8);
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(0.4))
            .collect();
        let graph = Graph::from_edges(n, edges).unwrap();
        let inputs: Vec<_> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        let outputs: Vec<_> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
        let geom = Geometry::new(graph, inputs, outputs).unwrap();

        let outcome = find_causal_flow(&geom, &SearchConfig::default());
        let key = match &outcome {
            FlowOutcome::Found { .. } => "found",
            FlowOutcome::NoFlow { reason, .. } => reason.tag(),
            FlowOutcome::Undecided { .. } => "undecided",
        };
        *reasons.entry(key).or_insert(0) += 1;
        let oracle = brute_force_flow(&geom, 8).unwrap();
        if outcome.is_decided() && outcome.flow().is_some() != oracle.is_some() {
            disagreements += 1;
        }
    }
    println!("{reasons:?}");
    println!("disagreements with oracle: {disagreements}");
}
