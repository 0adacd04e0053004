mod common;

use std::f64::consts::PI;

use proptest::prelude::*;

use brouwer::elements::{
    cartesian_from_delaunay, cartesian_from_polar_nodal, delaunay_from_cartesian, delaunay_from_keplerian,
    delaunay_from_polar_nodal, reduce_angle, solve_kepler,
};
use brouwer::{mean_to_osculating, osculating_to_mean, DelaunayState, KeplerianSet, Model, PhysicalConstants, Variant};

use common::distance;

fn model() -> Model<f64> {
    Model::new(PhysicalConstants::default())
}

/// Inclinations kept clear of the critical band.
fn inclination() -> impl Strategy<Value = f64> {
    (0.1f64..3.0).prop_filter("critical inclination", |i| (5.0 * i.sin().powi(2) - 4.0).abs() > 0.05)
}

prop_compose! {
    fn orbit(e_lo: f64, e_hi: f64)(
        a in 7000.0f64..20_000.0,
        e in e_lo..e_hi,
        inclination in inclination(),
        raan in 0.0..2.0 * PI,
        arg_perigee in 0.0..2.0 * PI,
        mean_anomaly in 0.0..2.0 * PI,
    ) -> KeplerianSet<f64> {
        KeplerianSet { a, e, inclination, raan, arg_perigee, mean_anomaly }
    }
}

fn delaunay(k: &KeplerianSet<f64>) -> DelaunayState<f64> {
    delaunay_from_keplerian(k, PhysicalConstants::default().mu).unwrap()
}

proptest! {
    #[test]
    fn kepler_equation_is_solved(mean in -20.0f64..20.0, e in 0.0f64..0.95) {
        let big_e = solve_kepler(mean, e).unwrap();
        prop_assert!((big_e - e * big_e.sin() - mean).abs() < 1e-12 * mean.abs().max(1.0));
    }

    #[test]
    fn cartesian_round_trip(k in orbit(1e-3, 0.9)) {
        let mu = PhysicalConstants::default().mu;
        let x = cartesian_from_delaunay(&delaunay(&k), mu).unwrap();
        let y = cartesian_from_delaunay(&delaunay_from_cartesian(&x, mu).unwrap(), mu).unwrap();
        prop_assert!(distance(&x, &y) < 1e-8);
    }

    #[test]
    fn node_momentum_is_exactly_preserved(k in orbit(1e-3, 0.6), order in 0u8..=2) {
        let d = delaunay(&k);
        let m = model();
        prop_assert_eq!(mean_to_osculating(&d, order, &m).unwrap().big_n, d.big_h);
        prop_assert_eq!(osculating_to_mean(&d, order, &m).unwrap().big_h, d.big_h);
    }

    #[test]
    fn second_order_round_trip_is_third_order_small(k in orbit(1e-3, 0.3)) {
        let m = model();
        let c = m.constants;
        let mean = delaunay(&k);
        let osc = delaunay_from_polar_nodal(&mean_to_osculating(&mean, 2, &m).unwrap(), c.mu).unwrap();
        let back = osculating_to_mean(&osc, 2, &m).unwrap();
        let d = distance(
            &cartesian_from_delaunay(&mean, c.mu).unwrap(),
            &cartesian_from_delaunay(&back, c.mu).unwrap(),
        );
        prop_assert!(d < 100.0 * c.j2.powi(3) * k.a, "{} km", d);
    }

    #[test]
    fn corrections_are_continuous_in_eccentricity(k in orbit(1e-6, 0.5), order in 1u8..=2) {
        let m = model();
        let step = 1e-7;
        let x0 = cartesian_from_polar_nodal(&mean_to_osculating(&delaunay(&k), order, &m).unwrap()).unwrap();
        let nudged = KeplerianSet { e: k.e + step, ..k };
        let x1 = cartesian_from_polar_nodal(&mean_to_osculating(&delaunay(&nudged), order, &m).unwrap()).unwrap();
        prop_assert!(x0.position.iter().chain(&x0.velocity).all(|v| v.is_finite()));
        // a Keplerian orbit moves by at most ~2a per unit of e
        prop_assert!(distance(&x0, &x1) < 4.0 * k.a * step, "{} km", distance(&x0, &x1));
    }

    #[test]
    fn reduced_angles_stay_in_range(x in -1e6f64..1e6) {
        let r = reduce_angle(x);
        prop_assert!((0.0..2.0 * PI).contains(&r));
        let turns = (x - r) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-6);
    }

    #[test]
    fn variant_labels_round_trip(i in 0u8..=2, s in 1u8..=3, d in 0u8..=2, calibrate: bool, braces: bool) {
        let v = Variant::new(i, s, d, calibrate);
        let label = v.to_string();
        let label = if braces { label } else { label[1..label.len() - 1].to_string() };
        prop_assert_eq!(label.parse::<Variant>().unwrap(), v);
    }

    #[test]
    fn malformed_labels_are_rejected(s in "[0-9+:{} ]{0,8}") {
        if let Ok(v) = s.parse::<Variant>() {
            prop_assert!(v.validate().is_ok());
            prop_assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
    }
}
