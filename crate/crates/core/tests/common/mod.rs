#![allow(dead_code)]

use brouwer::elements::{cartesian_from_keplerian, delaunay_from_keplerian};
use brouwer::{CartesianState, DelaunayState, KeplerianSet, PhysicalConstants};

/// Topex-type orbit.
pub fn topex_elements() -> KeplerianSet<f64> {
    KeplerianSet {
        a: 7707.270,
        e: 1e-4,
        inclination: 66.04_f64.to_radians(),
        raan: 180.001_f64.to_radians(),
        arg_perigee: 270.0_f64.to_radians(),
        mean_anomaly: 180.0_f64.to_radians(),
    }
}

pub fn topex_delaunay(c: &PhysicalConstants<f64>) -> DelaunayState<f64> {
    delaunay_from_keplerian(&topex_elements(), c.mu).unwrap()
}

pub fn topex_cartesian(c: &PhysicalConstants<f64>) -> CartesianState<f64> {
    cartesian_from_keplerian(&topex_elements(), c.mu).unwrap()
}

pub fn distance(a: &CartesianState<f64>, b: &CartesianState<f64>) -> f64 {
    (0..3)
        .map(|i| (a.position[i] - b.position[i]).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// `log2(r(J2) / r(J2/2))`.
pub fn halving_exponent(full: f64, half: f64) -> f64 {
    (full / half).log2()
}
