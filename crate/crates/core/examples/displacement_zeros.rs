//! Locates the zeros of the displacement function and classifies each
//! crossing limit cycle.
use pwl_cycles::displacement::{delta_prime, find_cycles, CycleRecord};
use pwl_cycles::halfmap::HalfMapConfig;
use pwl_cycles::lienard::CanonicalPWL;

fn main() {
    let systems = [
        ("global center", CanonicalPWL::new(0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0)),
        ("continuous foci", CanonicalPWL::new(-0.5, 1.0, 1.0, 0.2, 1.0, 1.0, 0.0)),
        ("three nested cycles", CanonicalPWL::new(-0.44, 1.0, -0.33, 0.47, 1.0, -0.9, 0.41)),
    ];
    for (name, c) in systems {
        let scan = find_cycles(&c, 512, 1e-10);
        println!("{name}: {} cycle(s), continuum = {}", scan.cycles.len(), scan.continuum);
        for w in &scan.warnings {
            println!("  note: {w}");
        }
        if scan.cycles.is_empty() {
            continue;
        }
        println!("  {}", CycleRecord::CSV_HEADER);
        for cy in &scan.cycles {
            println!("  {}", cy.csv_row());
            let dp = delta_prime(&c, cy.y0_star, &HalfMapConfig::default()).expect("interior zero");
            println!("    δ' = {dp:.6e}, sign agrees with F_b: {}", dp.signum() == cy.fprime_value.signum());
        }
    }
}
