//! Reduces general two-zone systems to the seven-parameter canonical form
//! and inspects the quadratics that delimit the half-map domains.
use pwl_cycles::lienard::{domain_interval, spectral_class, to_canonical, GeneralPWL, DEFAULT_CAP};

fn main() {
    let systems = [
        (
            "node against a center",
            GeneralPWL {
                a_left: [[1.0, 1.0], [0.0, 1.0]],
                a_right: [[0.0, 1.0], [-1.0, 0.0]],
                b_left: [0.0, 0.0],
                b_right: [0.0, 0.0],
            },
        ),
        (
            "offset foci",
            GeneralPWL {
                a_left: [[0.0, 2.0], [-1.0, 3.0]],
                a_right: [[1.0, 1.0], [2.0, 0.0]],
                b_left: [1.0, -1.0],
                b_right: [0.0, 2.0],
            },
        ),
        (
            "opposite rotation",
            GeneralPWL {
                a_left: [[0.0, 1.0], [-1.0, 0.0]],
                a_right: [[0.0, -1.0], [1.0, 0.0]],
                b_left: [0.0, 0.0],
                b_right: [0.0, 0.0],
            },
        ),
    ];

    for (name, sys) in systems {
        println!("{name}:");
        let c = match to_canonical(&sys) {
            Ok(c) => c,
            Err(e) => {
                println!("  {e}\n");
                continue;
            }
        };
        println!("  (T_L, D_L, a_L, T_R, D_R, a_R, b) = {:?}", c.to_array());
        println!("  continuous: {}", c.is_continuous());
        for (side, w, t, d) in [("left", c.w_left(), c.t_left, c.d_left), ("right", c.w_right(), c.t_right, c.d_right)] {
            let dom = domain_interval(&w, DEFAULT_CAP);
            println!(
                "  {side}: W(y) = {}y² + {}y + {}, roots {:?}, {:?}",
                w.d,
                w.nega_t,
                w.a2,
                w.real_roots(),
                spectral_class(t, d).tag
            );
            println!(
                "    domain [{}, {}]{}, image [{}, {}]",
                dom.domain.lo,
                dom.domain.hi,
                if dom.domain.bounded { "" } else { " (truncated)" },
                dom.image.lo,
                dom.image.hi
            );
        }
        println!();
    }
}
