//! Initialization of the secular constants, linear propagation of the mean
//! angles and ephemeris generation for a `{I:S:D}` truncation.

use std::fmt;
use std::str::FromStr;

use crate::corrections::{mean_to_osculating, osculating_to_mean};
use crate::elements::{cartesian_from_polar_nodal, reduce_angle, CartesianState, DelaunayState};
use crate::error::{Error, Result};
use crate::hamiltonian::{
    eval_osculating_hamiltonian, eval_secular_term, secular_frequencies, Guards, Model, PhysicalConstants,
};
use crate::scalar::{Real, Scalar};

/// Truncation orders of the inverse corrections, the secular terms and the
/// direct corrections, plus the calibration mark.
///
/// Written `{2+:2:2}` or `2+:2:2`; the `+` after the inverse order turns
/// calibration of the mean action on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Variant {
    pub inverse_order: u8,
    pub secular_order: u8,
    pub direct_order: u8,
    pub calibrate: bool,
}

impl Variant {
    pub const fn new(inverse_order: u8, secular_order: u8, direct_order: u8, calibrate: bool) -> Self {
        Self {
            inverse_order,
            secular_order,
            direct_order,
            calibrate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.inverse_order > 2 || self.direct_order > 2 {
            return Err(Error::Domain(format!("{self}: correction orders must be 0, 1 or 2")));
        }
        if !(1..=3).contains(&self.secular_order) {
            return Err(Error::Domain(format!("{self}: secular order must be 1, 2 or 3")));
        }
        Ok(())
    }

    /// Number of secular terms used for the energy calibration and the
    /// frequencies. Calibration buys one order over the inverse map, so a
    /// calibrated variant carries the secular terms to `max(S, I + 1)`.
    pub fn effective_secular_order(&self) -> u8 {
        if self.calibrate {
            self.secular_order.max(self.inverse_order + 1).min(3)
        } else {
            self.secular_order
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let plus = if self.calibrate { "+" } else { "" };
        write!(
            f,
            "{{{}{plus}:{}:{}}}",
            self.inverse_order, self.secular_order, self.direct_order
        )
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("malformed variant label {s:?}, expected e.g. 2+:2:2"));
        let t = s.trim();
        let t = t
            .strip_prefix('{')
            .map_or(Ok(t), |r| r.strip_suffix('}').ok_or_else(bad))?;
        let parts: Vec<&str> = t.split(':').map(str::trim).collect();
        let [i, s_, d] = parts.as_slice() else {
            return Err(bad());
        };
        let (i, calibrate) = match i.strip_suffix('+') {
            Some(rest) => (rest, true),
            None => (*i, false),
        };
        let num = |x: &str| x.parse::<u8>().map_err(|_| bad());
        let v = Variant::new(num(i)?, num(s_)?, num(d)?, calibrate);
        v.validate()?;
        Ok(v)
    }
}

/// A variant together with the model it runs on.
#[derive(Clone, Debug)]
pub struct TheoryConfig<T> {
    pub variant: Variant,
    pub model: Model<T>,
}

impl<T: Real> TheoryConfig<T> {
    pub fn new(variant: Variant, model: Model<T>) -> Result<Self> {
        variant.validate()?;
        model.constants.validate()?;
        Ok(Self { variant, model })
    }

    pub fn constants(&self) -> &PhysicalConstants<T> {
        &self.model.constants
    }

    pub fn guards(&self) -> &Guards<T> {
        &self.model.guards
    }
}

/// Everything the propagation needs, fixed at the epoch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecularConstants<T> {
    /// Mean Delaunay state at `t = 0`.
    pub epoch: DelaunayState<T>,
    /// Action used in the Keplerian mean motion (km²/s).
    pub l_hat: T,
    /// `(n_ℓ, n_g, n_h)` in rad/s.
    pub frequencies: [T; 3],
    /// Osculating energy at the epoch (km²/s²).
    pub energy: T,
}

/// Calibrated action from the energy equation
/// `E0 = −μ²/(2L̂²) + Σ_{m≤k} (J2^m/m!) H0m(L′,G′,H)`.
pub fn calibrate_l<T>(
    energy: T,
    big_l: T,
    big_g: T,
    big_h: T,
    order: u8,
    c: &PhysicalConstants<T>,
    guards: &Guards<T>,
) -> Result<T>
where
    T: Real + Scalar<Real = T>,
{
    if order > 3 {
        return Err(Error::Domain(format!("calibration order {order} exceeds 3")));
    }
    let terms = (1..=order)
        .map(|m| eval_secular_term(m, big_l, big_g, big_h, c, guards))
        .collect::<Result<Vec<T>>>()?;
    action_from_energy(energy, &terms, c)
}

fn action_from_energy<T: Real>(energy: T, terms: &[T], c: &PhysicalConstants<T>) -> Result<T> {
    let mut sum = -energy;
    let mut weight = T::one();
    for (m, h0m) in terms.iter().enumerate() {
        weight = weight * c.j2 / T::lit((m + 1) as f64);
        sum += weight * *h0m;
    }
    let radicand = T::lit(2.0) * sum;
    if !(radicand > T::zero()) || !radicand.is_finite() {
        return Err(Error::InvalidEnergy {
            radicand: radicand.to_f64_lossy(),
        });
    }
    Ok(c.mu / radicand.sqrt())
}

/// Mean elements, calibrated action and secular rates for an osculating
/// state given at `t = 0`.
pub fn initialize_theory<T>(osculating: &DelaunayState<T>, cfg: &TheoryConfig<T>) -> Result<SecularConstants<T>>
where
    T: Real + Scalar<Real = T>,
{
    let v = cfg.variant;
    let model = &cfg.model;
    let c = &model.constants;
    let energy = eval_osculating_hamiltonian(osculating, c)?;
    let mut mean = osculating_to_mean(osculating, v.inverse_order, model)?;
    mean.l = reduce_angle(mean.l);
    mean.g = reduce_angle(mean.g);
    mean.h = reduce_angle(mean.h);
    let order = v.effective_secular_order();
    let l_hat = if v.calibrate {
        calibrate_l(energy, mean.big_l, mean.big_g, mean.big_h, order, c, &model.guards)?
    } else {
        mean.big_l
    };
    let frequencies = secular_frequencies(l_hat, mean.big_l, mean.big_g, mean.big_h, order, c, &model.guards)?;
    if frequencies.iter().any(|f| !f.is_finite()) {
        return Err(Error::Domain("secular frequencies are not finite".into()));
    }
    Ok(SecularConstants {
        epoch: mean,
        l_hat,
        frequencies,
        energy,
    })
}

/// Mean state at `t` seconds past the epoch.
pub fn propagate_mean<T: Real>(sc: &SecularConstants<T>, t: T) -> DelaunayState<T> {
    let e = &sc.epoch;
    let [nl, ng, nh] = sc.frequencies;
    DelaunayState {
        l: reduce_angle(e.l + nl * t),
        g: reduce_angle(e.g + ng * t),
        h: reduce_angle(e.h + nh * t),
        ..*e
    }
}

/// One ephemeris sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EphemerisRecord<T> {
    /// Seconds past the epoch.
    pub t: T,
    pub state: CartesianState<T>,
}

/// Osculating Cartesian state at `t`.
pub fn ephemeris_at<T>(sc: &SecularConstants<T>, t: T, cfg: &TheoryConfig<T>) -> Result<CartesianState<T>>
where
    T: Real + Scalar<Real = T>,
{
    let mean = propagate_mean(sc, t);
    let pn = mean_to_osculating(&mean, cfg.variant.direct_order, &cfg.model)?;
    cartesian_from_polar_nodal(&pn)
}

pub fn generate_ephemeris<T>(
    sc: &SecularConstants<T>,
    times: &[T],
    cfg: &TheoryConfig<T>,
) -> Result<Vec<EphemerisRecord<T>>>
where
    T: Real + Scalar<Real = T>,
{
    times
        .iter()
        .map(|&t| {
            Ok(EphemerisRecord {
                t,
                state: ephemeris_at(sc, t, cfg)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{cartesian_from_delaunay, delaunay_from_keplerian, KeplerianSet};

    fn topex() -> DelaunayState<f64> {
        let kep = KeplerianSet {
            a: 7707.270,
            e: 1e-4,
            inclination: 66.04_f64.to_radians(),
            raan: 180.001_f64.to_radians(),
            arg_perigee: 270.0_f64.to_radians(),
            mean_anomaly: 180.0_f64.to_radians(),
        };
        delaunay_from_keplerian(&kep, 398_600.441_5).unwrap()
    }

    #[test]
    fn labels_round_trip() {
        for s in ["{1:2:1}", "{1+:2:1}", "{2:2:2}", "{2+:2:2}", "{0:3:0}"] {
            let v: Variant = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!("2+:2:2".parse::<Variant>().unwrap(), Variant::new(2, 2, 2, true));
        for bad in [
            "", "1:2", "3:2:1", "1:0:1", "1:4:1", "{1:2:1", "a:b:c", "1++:2:1", "1:2+:1",
        ] {
            assert!(bad.parse::<Variant>().is_err(), "{bad}");
        }
    }

    #[test]
    fn effective_order() {
        assert_eq!(Variant::new(1, 2, 1, true).effective_secular_order(), 2);
        assert_eq!(Variant::new(2, 2, 2, true).effective_secular_order(), 3);
        assert_eq!(Variant::new(2, 2, 2, false).effective_secular_order(), 2);
    }

    #[test]
    fn keplerian_limit() {
        let model = Model::new(PhysicalConstants::default().with_j2(0.0));
        let cfg = TheoryConfig::new(Variant::new(2, 2, 2, true), model).unwrap();
        let osc = topex();
        let sc = initialize_theory(&osc, &cfg).unwrap();
        assert!((sc.l_hat - osc.big_l).abs() < 1e-12 * osc.big_l);
        let n = 398_600.441_5_f64.powi(2) / osc.big_l.powi(3);
        assert!((sc.frequencies[0] - n).abs() < 1e-14 * n);
        assert_eq!(sc.frequencies[1], 0.0);
        assert_eq!(sc.frequencies[2], 0.0);
        let period = std::f64::consts::TAU / n;
        let x0 = cartesian_from_delaunay(&osc, 398_600.441_5).unwrap();
        let x1 = ephemeris_at(&sc, period, &cfg).unwrap();
        for i in 0..3 {
            assert!((x0.position[i] - x1.position[i]).abs() < 1e-7);
        }
    }

    #[test]
    fn calibration_changes_only_mean_motion() {
        let osc = topex();
        let plain = TheoryConfig::new(Variant::new(1, 2, 1, false), Model::new(PhysicalConstants::default())).unwrap();
        let calib = TheoryConfig::new(Variant::new(1, 2, 1, true), Model::new(PhysicalConstants::default())).unwrap();
        let a = initialize_theory(&osc, &plain).unwrap();
        let b = initialize_theory(&osc, &calib).unwrap();
        assert_eq!(a.epoch, b.epoch);
        assert_eq!(a.frequencies[1], b.frequencies[1]);
        assert_eq!(a.frequencies[2], b.frequencies[2]);
        assert!(a.frequencies[0] != b.frequencies[0]);
        assert!((a.l_hat - b.l_hat).abs() < 1e-5 * a.l_hat);
    }

    #[test]
    fn propagation_is_linear() {
        let cfg = TheoryConfig::new(Variant::new(2, 2, 2, false), Model::new(PhysicalConstants::default())).unwrap();
        let sc = initialize_theory(&topex(), &cfg).unwrap();
        assert_eq!(propagate_mean(&sc, 0.0), sc.epoch);
        let dt = 3_600.0;
        let s0 = propagate_mean(&sc, 0.0).to_array();
        let s1 = propagate_mean(&sc, dt).to_array();
        let s2 = propagate_mean(&sc, 2.0 * dt).to_array();
        for i in 0..3 {
            let d1 = reduce_angle(s1[i] - s0[i]);
            let d2 = reduce_angle(s2[i] - s1[i]);
            let diff = reduce_angle(d2 - d1 + std::f64::consts::PI) - std::f64::consts::PI;
            assert!(diff.abs() < 1e-12, "angle {i}");
        }
        for i in 3..6 {
            assert_eq!(s2[i], s0[i]);
        }
    }

    #[test]
    fn nonpositive_radicand() {
        let c = PhysicalConstants::default();
        let err = calibrate_l(1.0, 50_000.0, 50_000.0, 20_000.0, 2, &c, &Guards::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidEnergy { .. }));
    }
}
