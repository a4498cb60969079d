//! Write a geometry and its flow as JSON, then read them back.
//!
//!     cargo run --example geometry_files

use flowscope::io::{load_flow, load_geometry, serialize_flow, serialize_geometry};
use flowscope::{find_causal_flow, generate_extremal, verify_flow, SearchConfig};

fn main() {
    let (geom, _) = generate_extremal(&"1,2".parse().unwrap());
    let flow = find_causal_flow(&geom, &SearchConfig::default()).flow().cloned().unwrap();

    let geom_text = serialize_geometry(&geom);
    let flow_text = serialize_flow(&geom, &flow);
    print!("{geom_text}{flow_text}");

    let geom = load_geometry(&geom_text).unwrap();
    let flow = load_flow(&geom, &flow_text).unwrap();
    println!("reloaded flow valid: {}", verify_flow(&geom, &flow).unwrap().is_valid());

    let err = load_geometry(r#"{"vertices":["a"],"edges":[["a","a"]],"inputs":[],"outputs":[]}"#);
    println!("bad file: {}", err.unwrap_err());
}
