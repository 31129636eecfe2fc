use approx::assert_relative_eq;
use num_rational::BigRational;
use proptest::prelude::*;
use pwl_cycles::contact::{pullback_phi, transform_phi, ContactPolynomials};
use pwl_cycles::displacement::{delta_prime, find_cycles, Stability};
use pwl_cycles::halfmap::{deriv_y_l, eval_y_l, HalfMapConfig};
use pwl_cycles::lienard::{domain_interval, to_canonical, CanonicalPWL, GeneralPWL, DEFAULT_CAP};
use pwl_cycles::poly::BivarPoly;
use pwl_cycles::report::{SpecFormat, SystemSpec};
use pwl_cycles::sweep::{draw_instance, Stratum};

fn param() -> impl Strategy<Value = f64> {
    (-3000i32..=3000).prop_map(|k| k as f64 / 1024.0)
}

fn canonical() -> impl Strategy<Value = CanonicalPWL> {
    prop::array::uniform7(param()).prop_map(CanonicalPWL::from_array)
}

fn general_from(c: &CanonicalPWL) -> GeneralPWL {
    GeneralPWL {
        a_left: [[c.t_left, -1.0], [c.d_left, 0.0]],
        a_right: [[c.t_right, -1.0], [c.d_right, 0.0]],
        b_left: [0.0, -c.a_left],
        b_right: [c.b, -c.a_right],
    }
}

/// The system after the change of variables `y ↦ p x + q y + r`.
fn conjugate(g: &GeneralPWL, p: f64, q: f64, r: f64) -> GeneralPWL {
    let side = |a: [[f64; 2]; 2], b: [f64; 2]| {
        let [[a11, a12], [a21, a22]] = a;
        let na = [
            [a11 - a12 * p / q, a12 / q],
            [p * a11 + q * a21 - (p * a12 + q * a22) * p / q, (p * a12 + q * a22) / q],
        ];
        let nb = [
            b[0] - a12 * r / q,
            p * b[0] + q * b[1] - (p * a12 + q * a22) * r / q,
        ];
        (na, nb)
    };
    let (a_left, b_left) = side(g.a_left, g.b_left);
    let (a_right, b_right) = side(g.a_right, g.b_right);
    GeneralPWL {
        a_left,
        a_right,
        b_left,
        b_right,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lienard_systems_are_their_own_canonical_form(c in canonical()) {
        prop_assert_eq!(to_canonical(&general_from(&c)).unwrap(), c);
    }

    #[test]
    fn canonical_form_ignores_changes_of_y(
        c in canonical(),
        p in -2.0f64..2.0,
        q in prop_oneof![-2.0f64..-0.25, 0.25f64..2.0],
        r in -2.0f64..2.0,
    ) {
        let back = to_canonical(&conjugate(&general_from(&c), p, q, r)).unwrap();
        for (x, y) in back.to_array().into_iter().zip(c.to_array()) {
            assert_relative_eq!(x, y, epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn left_half_map_is_decreasing(c in canonical(), u in 0.05f64..0.95) {
        let dom = domain_interval(&c.w_left(), DEFAULT_CAP).domain;
        prop_assume!(dom.width() > 0.0);
        let y0 = dom.lo + (dom.hi.min(dom.lo + 10.0) - dom.lo) * u;
        let cfg = HalfMapConfig::default();
        if let Ok(s) = eval_y_l(&c, y0, &cfg) {
            prop_assert!(s.y1 < 0.0);
            if let Ok(d) = deriv_y_l(&c, y0, s.y1) {
                prop_assert!(d < 0.0, "y_L' = {d} at {y0}");
            }
        }
    }

    #[test]
    fn symmetric_polynomials_round_trip_through_phi(coeffs in prop::collection::vec(-20i64..20, 6)) {
        let f = pullback_phi(&BivarPoly::from_terms(
            [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
                .into_iter()
                .zip(&coeffs)
                .map(|(k, &c)| (k, BigRational::from_integer(c.into()))),
        ));
        prop_assert!(f.is_symmetric());
        prop_assert_eq!(pullback_phi(&transform_phi(&f).unwrap()), f);
    }

    #[test]
    fn contact_polynomials_are_symmetric(c in canonical()) {
        let p = ContactPolynomials::derive(&c).unwrap();
        prop_assert!(p.f.is_symmetric() && p.g.is_symmetric());
        prop_assert!(p.f.degree() <= 4 && p.g.degree() <= 6);
        prop_assert!(p.f_tilde.degree() <= 2 && p.g_tilde.degree() <= 3);
        prop_assert_eq!(pullback_phi(&p.f_tilde), p.f);
    }

    #[test]
    fn system_files_round_trip(c in canonical()) {
        let spec = SystemSpec::Canonical(c);
        prop_assert_eq!(SystemSpec::parse(&spec.to_toml(), SpecFormat::Toml).unwrap(), spec);
        let json = serde_json::to_string(&spec).unwrap();
        prop_assert_eq!(SystemSpec::parse(&json, SpecFormat::Json).unwrap(), spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stability_follows_the_slope_of_delta(index in 0u64..100_000) {
        let (_, c) = draw_instance(77, index, &Stratum::ALL);
        let scan = find_cycles(&c, 256, 1e-10);
        let cfg = HalfMapConfig::default();
        for cy in scan.cycles.iter().filter(|cy| cy.stability != Stability::Degenerate) {
            let dp = delta_prime(&c, cy.y0_star, &cfg).unwrap();
            prop_assert_eq!(dp < 0.0, cy.stability == Stability::Attracting);
        }
        let hyperbolic: Vec<_> = scan.cycles.iter().map(|cy| cy.stability).collect();
        prop_assert!(hyperbolic.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn draws_do_not_depend_on_sweep_size(seed in 0u64..1000, index in 0u64..10_000) {
        let a = draw_instance(seed, index, &Stratum::ALL);
        let b = draw_instance(seed, index, &Stratum::ALL);
        prop_assert_eq!(a, b);
        prop_assert_eq!(a.0, Stratum::ALL[(index % 6) as usize]);
    }
}
