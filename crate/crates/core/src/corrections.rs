//! Periodic corrections between mean and osculating states.
//!
//! The maps are applied to the six polar-nodal functions of the Delaunay
//! chart through Poisson brackets with `W1` and `W2`, which keeps the
//! outputs regular for near-circular orbits. The closed series for the
//! semi-major axis serve as cross-checks.

use crate::elements::{
    delaunay_from_polar_nodal, polar_nodal_from_delaunay, DelaunayState, OrbitGeometry, PolarNodalState,
};
use crate::error::{Error, Result};
use crate::genfun::{w1, w2};
use crate::hamiltonian::Model;
use crate::jets::{bracket, bracket_jet, jet_anomalies, lift_state, DelaunayFunction, Jet2};
use crate::scalar::{k, Real, Scalar};
use crate::series::{powers, Harmonics};

/// Sense of a periodic correction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Mean to osculating, brackets at the mean state.
    Direct,
    /// Osculating to mean, brackets at the osculating state.
    Inverse,
}

/// Truncation order (0, 1 or 2) and sense of a correction map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorrectionOrder {
    pub order: u8,
    pub direction: Direction,
}

impl CorrectionOrder {
    pub fn direct(order: u8) -> Self {
        Self {
            order,
            direction: Direction::Direct,
        }
    }

    pub fn inverse(order: u8) -> Self {
        Self {
            order,
            direction: Direction::Inverse,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.order > 2 {
            return Err(Error::Domain(format!(
                "correction order must be 0, 1 or 2, got {}",
                self.order
            )));
        }
        Ok(())
    }
}

struct Generators<T> {
    w1: Jet2<T>,
    w2: Option<Jet2<T>>,
}

fn generators<T: Real>(o: &OrbitGeometry<Jet2<T>>, order: u8, model: &Model<T>) -> Result<Generators<T>> {
    Ok(Generators {
        w1: w1(o, model)?,
        w2: if order >= 2 { Some(w2(o, model)?) } else { None },
    })
}

/// `ξ ± J2 {ξ,W1} + ½J2² ({{ξ,W1},W1} ± {ξ,W2})` for one function `ξ`.
fn corrected<T: Real>(xi: &Jet2<T>, gens: &Generators<T>, cfg: CorrectionOrder, j2: T) -> T {
    if cfg.order == 0 {
        return xi.value();
    }
    let sign = match cfg.direction {
        Direction::Direct => T::one(),
        Direction::Inverse => -T::one(),
    };
    let delta = bracket_jet(xi, &gens.w1);
    let mut out = xi.value() + sign * j2 * delta.value;
    if let Some(w2) = &gens.w2 {
        let second = bracket(&delta, &gens.w1) + sign * bracket(xi, w2);
        out += T::lit(0.5) * j2 * j2 * second;
    }
    out
}

fn orbit_jets<T: Real>(d: &DelaunayState<T>, model: &Model<T>) -> Result<OrbitGeometry<Jet2<T>>> {
    d.validate()?;
    jet_anomalies(&lift_state(d), model.constants.mu, model.guards.e_floor)
}

/// Correction of an arbitrary function of the chart.
pub fn correct_function<T, F>(f: &F, d: &DelaunayState<T>, cfg: CorrectionOrder, model: &Model<T>) -> Result<T>
where
    T: Real,
    F: DelaunayFunction<T>,
{
    cfg.validate()?;
    let o = orbit_jets(d, model)?;
    let gens = generators(&o, cfg.order, model)?;
    Ok(corrected(&f.eval(&o)?, &gens, cfg, model.constants.j2))
}

fn correct_polar_nodal<T: Real>(d: &DelaunayState<T>, cfg: CorrectionOrder, model: &Model<T>) -> Result<[T; 6]> {
    cfg.validate()?;
    let o = orbit_jets(d, model)?;
    let gens = generators(&o, cfg.order, model)?;
    let pn = o.polar_nodal();
    Ok(std::array::from_fn(|i| {
        corrected(&pn[i], &gens, cfg, model.constants.j2)
    }))
}

/// Osculating polar-nodal state from a mean Delaunay state.
pub fn mean_to_osculating<T>(mean: &DelaunayState<T>, order: u8, model: &Model<T>) -> Result<PolarNodalState<T>>
where
    T: Real + Scalar<Real = T>,
{
    if order == 0 {
        mean.validate()?;
        return polar_nodal_from_delaunay(mean, model.constants.mu);
    }
    let v = correct_polar_nodal(mean, CorrectionOrder::direct(order), model)?;
    Ok(PolarNodalState::from_array(v))
}

/// Mean Delaunay state from an osculating one.
pub fn osculating_to_mean<T>(osc: &DelaunayState<T>, order: u8, model: &Model<T>) -> Result<DelaunayState<T>>
where
    T: Real + Scalar<Real = T>,
{
    if order == 0 {
        osc.validate()?;
        return Ok(*osc);
    }
    let v = correct_polar_nodal(osc, CorrectionOrder::inverse(order), model)?;
    delaunay_from_polar_nodal(&PolarNodalState::from_array(v), model.constants.mu)
}

/// Semi-major axis `a = L²/μ` as a function of the chart.
#[derive(Clone, Copy, Debug)]
pub struct SemiMajorAxis;

impl<T: Real> DelaunayFunction<T> for SemiMajorAxis {
    fn eval<S: Scalar<Real = T>>(&self, o: &OrbitGeometry<S>) -> Result<S> {
        Ok(o.a)
    }
}

/// One of the six polar-nodal functions `(r, θ, ν, R, Θ, N)`.
#[derive(Clone, Copy, Debug)]
pub struct PolarNodalComponent(pub usize);

impl<T: Real> DelaunayFunction<T> for PolarNodalComponent {
    fn eval<S: Scalar<Real = T>>(&self, o: &OrbitGeometry<S>) -> Result<S> {
        o.polar_nodal()
            .get(self.0)
            .copied()
            .ok_or_else(|| Error::Domain(format!("polar-nodal index {} out of range", self.0)))
    }
}

/// First-order semi-major-axis correction `Δa = {a, W1}` from its closed
/// series.
pub fn delta_a_first<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> S {
    let table = model.tables.table("A15");
    let hm = Harmonics::new(o);
    let b = [S::one() - k::<S>(1.5) * o.s2, k::<S>(0.75) * o.s2];
    let ep = powers::<S, 4>(o.e);
    let mut sum = S::zero();
    for i in 0..=1_i32 {
        let mut inner = S::zero();
        for j in -i..=3 + 2 * i {
            inner += table.eval(&[i, j], o.eta) * ep[(j - 2 * i).unsigned_abs() as usize] * hm.cos(j, i as usize);
        }
        sum += b[i as usize] * inner;
    }
    let rr = (o.p.recip() * model.constants.radius).square();
    o.a * rr / (o.eta * o.eta * k::<S>(4.0)) * sum
}

/// Inverse second-order semi-major-axis correction `δa = {Δa, W1} − {a, W2}`
/// from its closed series and table `A5`.
pub fn delta_a_second_inverse<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> Result<S> {
    let x = o.s2;
    model.guards.check_denominator(x.re())?;
    let table = model.tables.table("A5");
    let hm = Harmonics::new(o);
    let ep = powers::<S, 11>(o.e);
    let np = powers::<S, 8>(o.eta);
    let xp = powers::<S, 3>(x);
    let d3 = k::<S>(3.0) * x - k::<S>(2.0);
    let mut series = S::zero();
    for i in 0..=2_i32 {
        let istar = i % 2;
        let mut js = S::zero();
        for j in -i - 3 * istar..=6 + 2 * i {
            let sep = (j - 2 * i).abs();
            let mut ks = S::zero();
            for kk in 0..=6 - sep {
                ks += table.eval(&[i, j, kk], x) * np[kk as usize];
            }
            js += ks * ep[sep as usize] * hm.cos(j, i as usize);
        }
        let factor = if istar == 1 { d3 * xp[1] } else { xp[i as usize] };
        series += factor * js;
    }
    let q = (k::<S>(5.0) * x + k::<S>(8.0)) * x - k::<S>(8.0);
    let e2 = o.e * o.e;
    let head =
        np[7] * q * k::<S>(24.0) + np[5] * (k::<S>(15.0) * x - k::<S>(14.0)) * x * e2 * hm.cos_g(1) * k::<S>(48.0);
    let rr = (o.p.recip() * model.constants.radius).square();
    Ok(o.a * rr * rr / (np[4] * k::<S>(256.0)) * (head + series))
}

/// Plain evaluation of [`delta_a_first`] at a Delaunay state.
pub fn eval_delta_a_first<T: Real + Scalar<Real = T>>(d: &DelaunayState<T>, model: &Model<T>) -> Result<T> {
    Ok(delta_a_first(&OrbitGeometry::new(d, model.constants.mu)?, model))
}

/// Plain evaluation of [`delta_a_second_inverse`] at a Delaunay state.
pub fn eval_delta_a_second_inverse<T: Real + Scalar<Real = T>>(d: &DelaunayState<T>, model: &Model<T>) -> Result<T> {
    delta_a_second_inverse(&OrbitGeometry::new(d, model.constants.mu)?, model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{delaunay_from_keplerian, KeplerianSet};
    use crate::hamiltonian::PhysicalConstants;

    fn state() -> DelaunayState<f64> {
        let kep = KeplerianSet {
            a: 8000.0,
            e: 0.05,
            inclination: 1.1,
            raan: 0.6,
            arg_perigee: 2.2,
            mean_anomaly: 4.0,
        };
        delaunay_from_keplerian(&kep, 398_600.441_5).unwrap()
    }

    #[test]
    fn order_three_is_rejected() {
        let m = Model::new(PhysicalConstants::default());
        assert!(correct_function(&SemiMajorAxis, &state(), CorrectionOrder::direct(3), &m).is_err());
        assert!(mean_to_osculating(&state(), 3, &m).is_err());
    }

    #[test]
    fn first_order_maps_are_opposite() {
        let m = Model::new(PhysicalConstants::default());
        let d = state();
        let a = d.semi_major_axis(m.constants.mu);
        let up = correct_function(&SemiMajorAxis, &d, CorrectionOrder::direct(1), &m).unwrap();
        let down = correct_function(&SemiMajorAxis, &d, CorrectionOrder::inverse(1), &m).unwrap();
        assert!(((up - a) + (down - a)).abs() < 1e-9);
        assert!((up - a).abs() > 1e-3);
    }

    #[test]
    fn node_momentum_is_untouched() {
        let m = Model::new(PhysicalConstants::default());
        let d = state();
        for order in 0..=2 {
            assert_eq!(mean_to_osculating(&d, order, &m).unwrap().big_n, d.big_h);
            assert_eq!(osculating_to_mean(&d, order, &m).unwrap().big_h, d.big_h);
        }
    }

    #[test]
    fn closed_delta_a_matches_bracket() {
        let m = Model::new(PhysicalConstants::default());
        let d = state();
        let a = d.semi_major_axis(m.constants.mu);
        let bracket = correct_function(&SemiMajorAxis, &d, CorrectionOrder::direct(1), &m).unwrap() - a;
        let closed = m.constants.j2 * eval_delta_a_first(&d, &m).unwrap();
        assert!(
            (bracket - closed).abs() <= 1e-10 * closed.abs(),
            "{bracket} vs {closed}"
        );
    }
}
