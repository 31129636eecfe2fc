use pwl_cycles::counting::{certify, LINE_CASE_BOUND};
use pwl_cycles::displacement::{find_cycles, ScanConfig, Stability};
use pwl_cycles::lienard::CanonicalPWL;
use pwl_cycles::report::{analyze, AnalysisReport, SystemSpec};
use pwl_cycles::svg::{plot, PlotKind};

fn data(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

#[test]
fn three_cycle_file_is_certified() {
    let r = analyze(&SystemSpec::load(&data("three_cycles.toml")).unwrap(), &ScanConfig::default()).unwrap();
    let stab: Vec<_> = r.cycles.iter().map(|c| c.stability).collect();
    assert_eq!(stab, [Stability::Repelling, Stability::Attracting, Stability::Repelling]);
    assert!(r.count.certified && !r.count.violation);
    assert!(r.count.observed_cycles <= r.count.intersection_bound + 1);
    assert_eq!(AnalysisReport::from_json(&r.to_json()).unwrap(), r);
}

#[test]
fn general_file_matches_its_canonical_form() {
    let spec = SystemSpec::load(&data("center_pair.json")).unwrap();
    assert_eq!(spec.canonical().unwrap().to_array(), [2.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
}

#[test]
fn no_crossing_file_is_rejected() {
    let spec = SystemSpec::load(&data("no_crossing.toml")).unwrap();
    assert!(matches!(spec.canonical(), Err(pwl_cycles::Error::NoCrossingDynamics(_))));
}

#[test]
fn global_center_is_a_continuum() {
    let r = analyze(&SystemSpec::load(&data("global_center.toml")).unwrap(), &ScanConfig::default()).unwrap();
    assert!(r.continuum && r.cycles.is_empty());
    assert!(plot(&r, PlotKind::Delta).is_err());
}

#[test]
fn every_plot_renders_for_the_three_cycle_system() {
    let r = analyze(&SystemSpec::load(&data("three_cycles.toml")).unwrap(), &ScanConfig::default()).unwrap();
    for kind in [PlotKind::HalfMaps, PlotKind::Delta, PlotKind::Contact] {
        let svg = plot(&r, kind).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn line_case_reports_four_plus_one() {
    let c = CanonicalPWL::new(0.0, 1.0, 0.5, -0.3, 1.0, 0.2, 0.4);
    let scan = find_cycles(&c, 512, 1e-10);
    let r = certify(&c, &scan, &ScanConfig::default());
    assert_eq!(r.intersection_bound, LINE_CASE_BOUND);
    assert!(r.certified && r.observed_cycles <= 5);
}

/// Away from the ends of the domain, cycles appear and disappear in pairs as
/// `b` moves, since `δ_b` is monotone in `b`. The outer attracting/repelling
/// pair of the three-cycle system collides as `b` grows; the inner cycle
/// stays clear of the domain edge until `b` is near 0.45.
#[test]
fn cycles_vanish_in_pairs_under_b() {
    let base = CanonicalPWL::new(-0.44, 1.0, -0.33, 0.47, 1.0, -0.9, 0.41);
    let scans: Vec<_> = (0..=30)
        .map(|i| find_cycles(&base.with_b(0.41 + 0.001 * i as f64), 512, 1e-10))
        .collect();
    let counts: Vec<usize> = scans.iter().map(|s| s.cycles.len()).collect();
    assert_eq!((counts[0], counts[30]), (3, 1), "{counts:?}");
    assert!(counts.windows(2).all(|w| w[0].abs_diff(w[1]) % 2 == 0), "{counts:?}");
    // the surviving cycle is the inner repelling one, moving inward
    let inner: Vec<f64> = scans.iter().map(|s| s.cycles[0].y0_star).collect();
    assert!(inner.windows(2).all(|w| w[1] < w[0]));
    assert!(scans.iter().all(|s| s.cycles[0].stability == Stability::Repelling));
}
