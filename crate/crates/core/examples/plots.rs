//! Writes the three SVG diagnostics for the three-cycle system into a
//! directory (default: the system temp directory).
use std::path::PathBuf;

use pwl_cycles::displacement::ScanConfig;
use pwl_cycles::lienard::CanonicalPWL;
use pwl_cycles::report::{analyze, SystemSpec};
use pwl_cycles::svg::{plot, PlotKind};

fn main() {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let spec = SystemSpec::Canonical(CanonicalPWL::new(-0.44, 1.0, -0.33, 0.47, 1.0, -0.9, 0.41));
    let report = analyze(&spec, &ScanConfig::default()).expect("valid system");
    for (kind, name) in [(PlotKind::HalfMaps, "halfmaps"), (PlotKind::Delta, "delta"), (PlotKind::Contact, "contact")] {
        let svg = plot(&report, kind).expect("plot");
        let path = dir.join(format!("three_cycles_{name}.svg"));
        std::fs::write(&path, svg).expect("writable directory");
        println!("{}", path.display());
    }
}
