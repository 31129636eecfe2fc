//! Runs the full analysis on a specification file and prints the JSON report.
//!
//! `cargo run --example certify_instance -- examples/data/three_cycles.toml`
use std::path::PathBuf;

use pwl_cycles::displacement::ScanConfig;
use pwl_cycles::report::{analyze, SystemSpec};

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/three_cycles.toml")));
    let spec = SystemSpec::load(&path).unwrap_or_else(|e| panic!("{e}"));
    let report = analyze(&spec, &ScanConfig::default()).unwrap_or_else(|e| panic!("{e}"));
    println!("{}", report.to_json());
    let r = &report.count;
    eprintln!(
        "cycles {} ≤ intersections {} + 1 ≤ N + k + 1 = {}; certified = {}",
        r.observed_cycles,
        r.observed_intersections,
        r.intersection_bound + 1,
        r.certified
    );
}
