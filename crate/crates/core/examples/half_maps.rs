//! Evaluates the forward and backward half-maps in closed form, checks the
//! shift identity for `y_R^b`, and compares against direct integration.
use pwl_cycles::halfmap::{deriv_y_l, eval_y_l, eval_y_r, eval_y_rb, HalfMapConfig};
use pwl_cycles::lienard::CanonicalPWL;
use pwl_cycles::trajectory::{backward_right_direct, forward_left_direct, IntegratorConfig};

fn main() {
    let c = CanonicalPWL::new(-0.44, 1.0, -0.33, 0.47, 1.0, -0.9, 0.41);
    let cfg = HalfMapConfig::default();
    let icfg = IntegratorConfig::default();

    println!("{:>8} {:>20} {:>20} {:>12} {:>12} {:>12}", "y0", "y_L", "y_R^b", "dy_L/dy0", "|ΔL| ode", "|Δshift|");
    for y0 in [1.2, 2.0, 3.5, 5.0, 8.0] {
        let l = eval_y_l(&c, y0, &cfg).expect("left return");
        let rb = eval_y_rb(&c, y0, &cfg).expect("right return");
        let shifted = eval_y_r(&c, y0 - c.b, &cfg).expect("right return").y1 + c.b;
        let direct_l = forward_left_direct(&c, y0, &icfg).expect("integrated return");
        let direct_r = backward_right_direct(&c, y0, &icfg).expect("integrated return");
        println!(
            "{y0:>8.3} {:>20.14} {:>20.14} {:>12.6} {:>12.2e} {:>12.2e}",
            l.y1,
            rb.y1,
            deriv_y_l(&c, y0, l.y1).expect("regular point"),
            (direct_l - l.y1).abs(),
            (rb.y1 - shifted).abs().max((direct_r - rb.y1).abs()),
        );
    }

    let center = CanonicalPWL::new(0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0);
    let s = eval_y_l(&center, 2.5, &cfg).expect("center return");
    println!("\ncenter: y_L(2.5) = {} after t = {} (half a turn is π)", s.y1, s.flight_time);
}
