//! Reachability queries on the natural pre-order of a successor function.
//!
//!     cargo run --example natural_preorder

use flowscope::flow::NaturalPreorder;
use flowscope::{generate_extremal, ExtremalPartition};

fn main() {
    let p: ExtremalPartition = "2,3".parse().unwrap();
    let (geom, cover) = generate_extremal(&p);
    let order = NaturalPreorder::new(&geom, &cover.successor_function());
    println!("partial order: {}", order.is_partial_order());

    for x in 0..geom.vertex_count() {
        let later: Vec<&str> = order
            .reachable_from(x)
            .iter()
            .enumerate()
            .filter(|&(y, &r)| r && y != x)
            .map(|(y, _)| geom.label(y))
            .collect();
        println!("{} precedes {later:?}", geom.label(x));
    }
}
