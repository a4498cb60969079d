mod common;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use flowscope::sim::{
    measurement_order, random_angles, simulate_in_order, simulate_postselected,
    MeasurementPattern, DEFAULT_SIMULATION_BOUND,
};
use flowscope::{
    find_causal_flow, generate_extremal, CausalFlow, ExtremalPartition, SearchConfig,
    SuccessorFunction,
};

#[test]
fn two_two_measurement_order() {
    let p: ExtremalPartition = "2,2".parse().unwrap();
    let (geom, _) = generate_extremal(&p);
    let flow = find_causal_flow(&geom, &SearchConfig::default())
        .flow()
        .cloned()
        .unwrap();
    let order: Vec<&str> = measurement_order(&flow)
        .into_iter()
        .filter(|&v| !geom.is_output(v))
        .map(|v| geom.label(v))
        .collect();
    assert_eq!(order, ["v1_1", "v2_1"]);
}

#[test]
fn measurement_order_does_not_change_the_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for partition in ["2,3", "1,2,3", "3,4"] {
        let (geom, _) = generate_extremal(&partition.parse().unwrap());
        let flow = find_causal_flow(&geom, &SearchConfig::default())
            .flow()
            .cloned()
            .unwrap();
        let angles = random_angles(&geom, &mut rng);
        let pattern = MeasurementPattern::new(geom, flow, angles).unwrap();
        let reference = simulate_postselected(&pattern, DEFAULT_SIMULATION_BOUND).unwrap();
        let mut order = pattern.schedule();
        for _ in 0..5 {
            order.shuffle(&mut rng);
            let map = simulate_in_order(&pattern, &order, DEFAULT_SIMULATION_BOUND).unwrap();
            assert!(reference.distance_up_to_scalar(&map) < 1e-12);
        }
    }
}

#[test]
fn six_cycle_matching_is_not_an_isometry() {
    let geom = common::six_cycle();
    let f = SuccessorFunction::new(&geom, [(0, 1), (2, 3), (4, 5)]).unwrap();
    let flow = CausalFlow::new(f, vec![0, 1, 0, 1, 0, 1]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let angles = random_angles(&geom, &mut rng);
        let pattern = MeasurementPattern::new(geom.clone(), flow.clone(), angles).unwrap();
        let map = simulate_postselected(&pattern, DEFAULT_SIMULATION_BOUND).unwrap();
        worst = worst.max(map.isometry_defect().unwrap_or(f64::INFINITY));
    }
    assert!(worst > 1e-3, "worst defect {worst}");
}

#[test]
fn flows_give_isometries_on_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=8 {
        let geom = common::path(n);
        let flow = find_causal_flow(&geom, &SearchConfig::default())
            .flow()
            .cloned()
            .unwrap();
        let angles = random_angles(&geom, &mut rng);
        let pattern = MeasurementPattern::new(geom, flow, angles).unwrap();
        let map = simulate_postselected(&pattern, DEFAULT_SIMULATION_BOUND).unwrap();
        assert_eq!((map.rows(), map.cols()), (2, 2));
        assert!(map.isometry_defect().unwrap() < 1e-9);
    }
}

#[test]
fn zero_angles_on_a_path_of_two_give_a_hadamard() {
    let geom = common::path(2);
    let flow = find_causal_flow(&geom, &SearchConfig::default())
        .flow()
        .cloned()
        .unwrap();
    let pattern = MeasurementPattern::new(geom, flow, BTreeMap::from([(0, 0.0)])).unwrap();
    let map = simulate_postselected(&pattern, 2).unwrap();
    let h = 0.5;
    let expected = [[h, h], [h, -h]];
    for (r, row) in expected.iter().enumerate() {
        for (c, &value) in row.iter().enumerate() {
            assert!((map.get(r, c).re - value).abs() < 1e-12);
            assert!(map.get(r, c).im.abs() < 1e-12);
        }
    }
}
