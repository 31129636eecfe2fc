//! Random search for a focus-focus system with three crossing limit cycles,
//! then validation of each cycle by direct trajectory integration.
use pwl_cycles::displacement::{delta, find_cycles, search_interval};
use pwl_cycles::halfmap::HalfMapConfig;
use pwl_cycles::lienard::CanonicalPWL;
use pwl_cycles::trajectory::{full_turn, IntegratorConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Coarse sign changes of `δ_b` on a quadratic grid of `int(I_b)`.
fn coarse_sign_changes(c: &CanonicalPWL, cfg: &HalfMapConfig) -> usize {
    let Some(iv) = search_interval(c, 1e6) else {
        return 0;
    };
    let hi = iv.hi.min(20.0);
    let (mut changes, mut last) = (0, 0.0);
    for i in 1..120 {
        let y = iv.lo + (hi - iv.lo) * (i as f64 / 120.0).powi(2);
        if let Ok(d) = delta(c, y, cfg) {
            if last * d < 0.0 {
                changes += 1;
            }
            if d != 0.0 {
                last = d;
            }
        }
    }
    changes
}

fn main() {
    let cfg = HalfMapConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let found = (0..200_000).find_map(|it| {
        let mut r = |a: f64| rng.random_range(-a..a);
        let c = CanonicalPWL::new(r(0.6), 1.0, r(1.0), r(0.6), 1.0, r(1.0), r(0.6));
        (coarse_sign_changes(&c, &cfg) >= 3 && find_cycles(&c, 1024, 1e-10).cycles.len() == 3).then_some((it, c))
    });
    let Some((it, c)) = found else {
        println!("no three-cycle system found");
        return;
    };
    println!("draw {it}: {:?}", c.to_array());

    // the rounded parameters kept in examples/data/three_cycles.toml
    let frozen = CanonicalPWL::new(-0.44, 1.0, -0.33, 0.47, 1.0, -0.9, 0.41);
    for (name, sys) in [("search result", c), ("frozen", frozen)] {
        let scan = find_cycles(&sys, 512, 1e-10);
        println!("{name}: {} cycles", scan.cycles.len());
        for cy in &scan.cycles {
            let (_, y2, period) = full_turn(&sys, cy.y0_star, &IntegratorConfig::default()).expect("closed orbit");
            println!(
                "  y0 = {:.12} {:?}: integrated closure {:.1e}, period {:.4}",
                cy.y0_star,
                cy.stability,
                (y2 - cy.y0_star).abs(),
                period
            );
        }
    }
}
