//! Run the measurement pattern of a flow on a dense statevector and check
//! that the post-selected map is a multiple of an isometry.
//!
//!     cargo run --example simulate_pattern

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use flowscope::sim::{
    measurement_order, random_angles, simulate_postselected, MeasurementPattern,
};
use flowscope::{find_causal_flow, generate_extremal, SearchConfig};

fn main() {
    let (geom, _) = generate_extremal(&"2,3,3".parse().unwrap());
    let flow = find_causal_flow(&geom, &SearchConfig::default()).flow().cloned().unwrap();
    let order: Vec<&str> = measurement_order(&flow)
        .into_iter()
        .filter(|&v| !geom.is_output(v))
        .map(|v| geom.label(v))
        .collect();
    println!("measure: {}", order.join(" "));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for draw in 0..5 {
        let angles = random_angles(&geom, &mut rng);
        let pattern = MeasurementPattern::new(geom.clone(), flow.clone(), angles).unwrap();
        let map = simulate_postselected(&pattern, 12).unwrap();
        println!(
            "draw {draw}: {}x{} map, defect {:.2e}",
            map.rows(),
            map.cols(),
            map.isometry_defect().unwrap()
        );
    }
}
