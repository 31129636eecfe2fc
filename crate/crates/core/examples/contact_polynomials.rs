//! Builds the exact contact polynomials `F_b`, `G_b`, moves them to the
//! symmetric coordinates `(Y0, Y1) = (y0 + y1, y0 y1)`, and bounds the
//! intersections of the curve `F_b = 0` with the orbit of the half-map.
use pwl_cycles::conic::conic_report;
use pwl_cycles::contact::{
    excluded_point, f_coefficients, g_coefficients, solve_system, ContactPolynomials, RegionSpec,
};
use pwl_cycles::lienard::{CanonicalPWL, DEFAULT_CAP};
use pwl_cycles::poly::BivarPoly;
use num_traits::ToPrimitive;

/// Terms of `p` with coefficients rounded to `f64`.
fn approx(p: &BivarPoly) -> String {
    p.terms()
        .map(|(&(i, j), c)| format!("{:+.6e}·Y0^{i}·Y1^{j}", c.to_f64().unwrap_or(f64::NAN)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() {
    let c = CanonicalPWL::new(-0.44, 1.0, -0.33, 0.47, 1.0, -0.9, 0.41);
    let p = ContactPolynomials::derive(&c).expect("finite parameters");

    println!("F_b coefficients m0..m5:");
    for (i, m) in f_coefficients(&p.f).iter().enumerate() {
        println!("  m{i} ≈ {:+.9e}", m.to_f64().unwrap_or(f64::NAN));
    }
    println!("G_b coefficients n1..n9:");
    for (i, n) in g_coefficients(&p.g).iter().enumerate() {
        println!("  n{} ≈ {:+.9e}", i + 1, n.to_f64().unwrap_or(f64::NAN));
    }
    println!("F̃ ≈ {}", approx(&p.f_tilde));
    println!("G̃ ≈ {}", approx(&p.g_tilde));

    let region = RegionSpec::for_system(&c, DEFAULT_CAP);
    let set = solve_system(&p.f_tilde, &p.g_tilde, &region).expect("isolated solutions");
    println!("\nreal solutions of F̃ = G̃ = 0 (eliminant degrees {:?}):", set.eliminant_degrees);
    for s in &set.solutions {
        println!(
            "  ({:+.9}, {:+.9}) isolated = {}, in φ(U) = {}",
            s.big_y0, s.big_y1, s.isolated, s.in_region
        );
    }
    let e = excluded_point(&c, &region).expect("D_L ≠ 0");
    println!("excluded point {:?} ({:?}), outside φ(U): {}", e.approx, e.case, e.outside);

    let conic = conic_report(&p.f_tilde, &region);
    println!(
        "\nF̃ = 0 is a {:?} with {} noncompact branch(es) meeting the region",
        conic.kind, conic.branches_in_region
    );
    println!(
        "intersections bounded by N + k = {} + {} = {}; cycles by {}",
        conic.branches_in_region,
        set.k(),
        conic.branches_in_region + set.k(),
        conic.branches_in_region + set.k() + 1
    );
}
