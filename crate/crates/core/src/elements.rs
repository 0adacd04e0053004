//! Element charts (Keplerian, Delaunay, polar-nodal, Cartesian), Kepler's
//! equation and the elliptic kinematics consumed by the theory.

use crate::error::{Error, Result};
use num_traits::{Float, One, Zero};

use crate::scalar::{k, Real, Scalar};

/// Reduce an angle to `[0, 2π)`.
pub fn reduce_angle<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let r = x % tau;
    if r < T::zero() {
        let shifted = r + tau;
        // -tiny + τ can round up to τ
        if shifted >= tau {
            T::zero()
        } else {
            shifted
        }
    } else {
        r
    }
}

/// Reduce an angle to `[-π, π)`.
fn reduce_signed<T: Real>(x: T) -> T {
    let r = reduce_angle(x + T::PI()) - T::PI();
    if r >= T::PI() {
        r - T::TAU()
    } else {
        r
    }
}

fn kepler_tolerance<T: Real>() -> T {
    T::lit(1e-14).max(T::epsilon() * T::lit(16.0))
}

/// Newton solver for Kepler's equation without domain checks.
///
/// Starts from `E₀ = ℓ + e sin ℓ`; falls back to bisection if Newton has not
/// converged after 50 iterations. The result keeps the winding of `mean`, so
/// it is continuous in `mean`.
pub fn kepler_newton<T: Real>(mean: T, e: T) -> T {
    if e == T::zero() {
        return mean;
    }
    let reduced = reduce_signed(mean);
    let offset = mean - reduced;
    let tol = kepler_tolerance::<T>();

    let mut big_e = reduced + e * reduced.sin();
    let mut converged = false;
    for _ in 0..50 {
        let (s, c) = big_e.sin_cos();
        let step = (big_e - e * s - reduced) / (T::one() - e * c);
        big_e -= step;
        if step.abs() <= tol {
            converged = true;
            break;
        }
    }
    if !converged || !big_e.is_finite() {
        // E - ℓ = e sin E lies in [-e, e]
        let (mut lo, mut hi) = (reduced - e, reduced + e);
        while hi - lo > tol {
            let mid = T::lit(0.5) * (lo + hi);
            if mid - e * mid.sin() - reduced > T::zero() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        big_e = T::lit(0.5) * (lo + hi);
    }
    big_e + offset
}

/// Eccentric anomaly from the mean anomaly.
pub fn solve_kepler<T: Real>(mean: T, e: T) -> Result<T> {
    if !(e >= T::zero() && e < T::one()) {
        return Err(Error::Domain(format!("eccentricity {e} outside [0, 1)")));
    }
    if !mean.is_finite() {
        return Err(Error::Domain("non-finite mean anomaly".into()));
    }
    Ok(kepler_newton(mean, e))
}

/// Classical elements: semi-major axis (km), eccentricity, inclination,
/// node, argument of perigee and mean anomaly (rad).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeplerianSet<T> {
    pub a: T,
    pub e: T,
    pub inclination: T,
    pub raan: T,
    pub arg_perigee: T,
    pub mean_anomaly: T,
}

impl<T: Real> KeplerianSet<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > T::zero()) {
            return Err(Error::Domain(format!("semi-major axis {} must be positive", self.a)));
        }
        if !(self.e >= T::zero() && self.e < T::one()) {
            return Err(Error::Domain(format!("eccentricity {} outside [0, 1)", self.e)));
        }
        if !(self.inclination >= T::zero() && self.inclination <= T::PI()) {
            return Err(Error::Domain(format!(
                "inclination {} outside [0, π]",
                self.inclination
            )));
        }
        if ![self.raan, self.arg_perigee, self.mean_anomaly]
            .iter()
            .all(|x| x.is_finite())
        {
            return Err(Error::Domain("non-finite angle".into()));
        }
        Ok(())
    }
}

/// Delaunay canonical chart `(ℓ, g, h, L, G, H)`.
///
/// Generic over the scalar so that the same type carries jet seeds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DelaunayState<S> {
    pub l: S,
    pub g: S,
    pub h: S,
    pub big_l: S,
    pub big_g: S,
    pub big_h: S,
}

impl<S: Copy> DelaunayState<S> {
    pub fn from_array(v: [S; 6]) -> Self {
        Self {
            l: v[0],
            g: v[1],
            h: v[2],
            big_l: v[3],
            big_g: v[4],
            big_h: v[5],
        }
    }

    pub fn to_array(&self) -> [S; 6] {
        [self.l, self.g, self.h, self.big_l, self.big_g, self.big_h]
    }
}

impl<T: Real> DelaunayState<T> {
    pub fn validate(&self) -> Result<()> {
        validate_actions(self.big_l, self.big_g, self.big_h)?;
        if ![self.l, self.g, self.h].iter().all(|x| x.is_finite()) {
            return Err(Error::Domain("non-finite Delaunay angle".into()));
        }
        Ok(())
    }

    pub fn eccentricity(&self) -> T {
        let (l, g) = (self.big_l, self.big_g);
        (((l - g) * (l + g)).max(T::zero())).sqrt() / l
    }

    pub fn semi_major_axis(&self, mu: T) -> T {
        self.big_l * self.big_l / mu
    }

    /// `s² = sin² I`.
    pub fn sin2_inclination(&self) -> T {
        let (g, h) = (self.big_g, self.big_h);
        (g - h) * (g + h) / (g * g)
    }
}

fn validate_actions<T: Real>(l: T, g: T, h: T) -> Result<()> {
    let slack = T::one() + T::epsilon() * T::lit(8.0);
    if !(l > T::zero()) {
        return Err(Error::Domain(format!("Delaunay action L = {l} must be positive")));
    }
    if !(g > T::zero() && g <= l * slack) {
        return Err(Error::Domain(format!("require 0 < G ≤ L, got G = {g}, L = {l}")));
    }
    if !(h.abs() <= g * slack) {
        return Err(Error::Domain(format!("require |H| ≤ G, got H = {h}, G = {g}")));
    }
    Ok(())
}

/// Polar-nodal (Hill) chart: radius, argument of latitude, node, radial
/// velocity, total and polar angular momentum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarNodalState<T> {
    pub r: T,
    pub theta: T,
    pub nu: T,
    pub big_r: T,
    pub big_theta: T,
    pub big_n: T,
}

impl<T: Copy> PolarNodalState<T> {
    pub fn from_array(v: [T; 6]) -> Self {
        Self {
            r: v[0],
            theta: v[1],
            nu: v[2],
            big_r: v[3],
            big_theta: v[4],
            big_n: v[5],
        }
    }

    pub fn to_array(&self) -> [T; 6] {
        [self.r, self.theta, self.nu, self.big_r, self.big_theta, self.big_n]
    }
}

impl<T: Real> PolarNodalState<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.r > T::zero()) {
            return Err(Error::Domain(format!("radius {} must be positive", self.r)));
        }
        if !(self.big_theta > T::zero()) {
            return Err(Error::Domain(format!(
                "angular momentum {} must be positive",
                self.big_theta
            )));
        }
        if !(self.big_n.abs() <= self.big_theta * (T::one() + T::epsilon() * T::lit(8.0))) {
            return Err(Error::Domain(format!(
                "require |N| ≤ Θ, got N = {}, Θ = {}",
                self.big_n, self.big_theta
            )));
        }
        Ok(())
    }
}

/// Position (km) and velocity (km/s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CartesianState<T> {
    pub position: [T; 3],
    pub velocity: [T; 3],
}

impl<T: Real> CartesianState<T> {
    pub fn radius(&self) -> T {
        norm(&self.position)
    }

    pub fn angular_momentum(&self) -> [T; 3] {
        cross(&self.position, &self.velocity)
    }
}

pub(crate) fn norm<T: Real>(v: &[T; 3]) -> T {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub(crate) fn dot<T: Real>(a: &[T; 3], b: &[T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross<T: Real>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Eccentric and true anomalies, radius and equation of the center.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnomalySet<T> {
    pub eccentric: T,
    pub true_anomaly: T,
    pub r: T,
    /// `φ = f − ℓ`, with `|φ| < π`.
    pub phi: T,
}

pub fn anomalies_from_mean<T: Real>(mean: T, a: T, e: T) -> Result<AnomalySet<T>> {
    if !(a > T::zero()) {
        return Err(Error::Domain(format!("semi-major axis {a} must be positive")));
    }
    let big_e = solve_kepler(mean, e)?;
    let (sin_e, cos_e) = big_e.sin_cos();
    let eta = ((T::one() - e) * (T::one() + e)).sqrt();
    let beta = e / (T::one() + eta);
    let phi = T::lit(2.0) * (beta * sin_e).atan2(T::one() - beta * cos_e) + e * sin_e;
    Ok(AnomalySet {
        eccentric: big_e,
        true_anomaly: mean + phi,
        r: a * (T::one() - e * cos_e),
        phi,
    })
}

/// Everything the theory needs to know about an elliptic orbit, evaluated
/// in any scalar (plain values or jets).
#[derive(Clone, Copy, Debug)]
pub struct OrbitGeometry<S: Scalar> {
    pub l: S,
    pub g: S,
    pub h: S,
    pub big_l: S,
    pub big_g: S,
    pub big_h: S,
    pub mu: S::Real,
    pub a: S,
    pub e: S,
    /// `η = √(1 − e²) = G/L`.
    pub eta: S,
    /// `p = a η²`.
    pub p: S,
    /// `cos I = H/G`.
    pub c: S,
    /// `sin² I`.
    pub s2: S,
    pub s: S,
    /// Mean motion `μ²/L³`.
    pub n: S,
    pub ecc_anomaly: S,
    pub f: S,
    pub sin_f: S,
    pub cos_f: S,
    pub phi: S,
    pub r: S,
}

impl<S: Scalar> OrbitGeometry<S> {
    pub fn new(state: &DelaunayState<S>, mu: S::Real) -> Result<Self> {
        Self::with_floor(state, mu, None)
    }

    /// As [`OrbitGeometry::new`], refusing `e < e_floor` when a floor is given.
    pub fn with_floor(state: &DelaunayState<S>, mu: S::Real, e_floor: Option<S::Real>) -> Result<Self> {
        let (big_l, big_g, big_h) = (state.big_l, state.big_g, state.big_h);
        validate_actions(big_l.re(), big_g.re(), big_h.re())?;
        if ![state.l.re(), state.g.re(), state.h.re()].iter().all(|x| x.is_finite()) {
            return Err(Error::Domain("non-finite Delaunay angle".into()));
        }

        let inv_l = big_l.recip();
        let e2_raw = (big_l - big_g) * (big_l + big_g) * inv_l * inv_l;
        if let Some(floor) = e_floor {
            let e = e2_raw.re().max(S::Real::zero()).sqrt();
            if e < floor {
                return Err(Error::EccentricityFloor {
                    e: e.to_f64_lossy(),
                    floor: floor.to_f64_lossy(),
                });
            }
        }
        let e = if e2_raw.re() > S::Real::zero() {
            e2_raw.sqrt()
        } else {
            S::zero()
        };
        let eta = big_g * inv_l;
        let a = big_l * big_l / mu;
        let p = big_g * big_g / mu;
        let inv_g = big_g.recip();
        let c = big_h * inv_g;
        let s2 = (big_g - big_h) * (big_g + big_h) * inv_g * inv_g;
        let s = if s2.re() > S::Real::zero() {
            s2.sqrt()
        } else {
            S::zero()
        };
        let n = inv_l.powi(3) * (mu * mu);

        let ecc_anomaly = S::eccentric_anomaly(state.l, e);
        let (sin_e, cos_e) = ecc_anomaly.sin_cos();
        let one_minus = S::one() - e * cos_e;
        let inv_d = one_minus.recip();
        let beta = e / (eta + S::Real::one());
        let phi = k::<S>(2.0) * (beta * sin_e).atan2(S::one() - beta * cos_e) + e * sin_e;
        let sin_f = eta * sin_e * inv_d;
        let cos_f = (cos_e - e) * inv_d;

        Ok(Self {
            l: state.l,
            g: state.g,
            h: state.h,
            big_l,
            big_g,
            big_h,
            mu,
            a,
            e,
            eta,
            p,
            c,
            s2,
            s,
            n,
            ecc_anomaly,
            f: state.l + phi,
            sin_f,
            cos_f,
            phi,
            r: a * one_minus,
        })
    }

    pub fn coordinates(&self) -> [S; 6] {
        [self.l, self.g, self.h, self.big_l, self.big_g, self.big_h]
    }

    /// The six polar-nodal variables as functions of the Delaunay chart.
    pub fn polar_nodal(&self) -> [S; 6] {
        let radial = self.e * self.sin_f * self.big_g.recip() * self.mu;
        [self.r, self.f + self.g, self.h, radial, self.big_g, self.big_h]
    }
}

pub fn delaunay_from_keplerian<T: Real>(kep: &KeplerianSet<T>, mu: T) -> Result<DelaunayState<T>> {
    kep.validate()?;
    let big_l = (mu * kep.a).sqrt();
    let big_g = big_l * ((T::one() - kep.e) * (T::one() + kep.e)).sqrt();
    Ok(DelaunayState {
        l: reduce_angle(kep.mean_anomaly),
        g: reduce_angle(kep.arg_perigee),
        h: reduce_angle(kep.raan),
        big_l,
        big_g,
        big_h: big_g * kep.inclination.cos(),
    })
}

pub fn keplerian_from_delaunay<T: Real>(d: &DelaunayState<T>, mu: T) -> Result<KeplerianSet<T>> {
    d.validate()?;
    let cos_i = (d.big_h / d.big_g).max(-T::one()).min(T::one());
    Ok(KeplerianSet {
        a: d.semi_major_axis(mu),
        e: d.eccentricity(),
        inclination: cos_i.acos(),
        raan: reduce_angle(d.h),
        arg_perigee: reduce_angle(d.g),
        mean_anomaly: reduce_angle(d.l),
    })
}

pub fn polar_nodal_from_delaunay<T: Real + Scalar<Real = T>>(
    d: &DelaunayState<T>,
    mu: T,
) -> Result<PolarNodalState<T>> {
    let orbit = OrbitGeometry::new(d, mu)?;
    Ok(PolarNodalState::from_array(orbit.polar_nodal()))
}

/// Inverse of [`polar_nodal_from_delaunay`]; well conditioned in `ℓ + g`
/// even when `e → 0`.
pub fn delaunay_from_polar_nodal<T: Real>(pn: &PolarNodalState<T>, mu: T) -> Result<DelaunayState<T>> {
    pn.validate()?;
    let big_g = pn.big_theta;
    let p = big_g * big_g / mu;
    let e_cos = p / pn.r - T::one();
    let e_sin = pn.big_r * big_g / mu;
    let e = e_cos.hypot(e_sin);
    if !(e < T::one()) {
        return Err(Error::Domain(format!("non-elliptic state, e = {e}")));
    }
    let f = if e > T::zero() { e_sin.atan2(e_cos) } else { T::zero() };
    let eta = ((T::one() - e) * (T::one() + e)).sqrt();
    let half = T::lit(0.5) * f;
    let big_e = T::lit(2.0) * ((T::one() - e).sqrt() * half.sin()).atan2((T::one() + e).sqrt() * half.cos());
    let mean = big_e - e * big_e.sin();
    Ok(DelaunayState {
        l: mean,
        g: pn.theta - f,
        h: pn.nu,
        big_l: big_g / eta,
        big_g,
        big_h: pn.big_n,
    })
}

pub fn cartesian_from_polar_nodal<T: Real>(pn: &PolarNodalState<T>) -> Result<CartesianState<T>> {
    pn.validate()?;
    let cos_i = (pn.big_n / pn.big_theta).max(-T::one()).min(T::one());
    let sin_i = ((T::one() - cos_i) * (T::one() + cos_i)).sqrt();
    let (sn, cn) = pn.nu.sin_cos();
    let (st, ct) = pn.theta.sin_cos();
    let u = [cn * ct - sn * st * cos_i, sn * ct + cn * st * cos_i, st * sin_i];
    let w = [-cn * st - sn * ct * cos_i, -sn * st + cn * ct * cos_i, ct * sin_i];
    let tangential = pn.big_theta / pn.r;
    Ok(CartesianState {
        position: std::array::from_fn(|i| pn.r * u[i]),
        velocity: std::array::from_fn(|i| pn.big_r * u[i] + tangential * w[i]),
    })
}

pub fn polar_nodal_from_cartesian<T: Real>(x: &CartesianState<T>) -> Result<PolarNodalState<T>> {
    let r = x.radius();
    if !(r > T::zero()) {
        return Err(Error::Domain("zero radius".into()));
    }
    let hv = x.angular_momentum();
    let big_theta = norm(&hv);
    if !(big_theta > T::zero()) {
        return Err(Error::Domain("rectilinear motion".into()));
    }
    let nu = if hv[0] == T::zero() && hv[1] == T::zero() {
        T::zero()
    } else {
        hv[0].atan2(-hv[1])
    };
    let node = [nu.cos(), nu.sin(), T::zero()];
    let unit_h = [hv[0] / big_theta, hv[1] / big_theta, hv[2] / big_theta];
    let perp = cross(&unit_h, &node);
    let theta = dot(&x.position, &perp).atan2(dot(&x.position, &node));
    Ok(PolarNodalState {
        r,
        theta,
        nu,
        big_r: dot(&x.position, &x.velocity) / r,
        big_theta,
        big_n: hv[2],
    })
}

pub fn cartesian_from_delaunay<T: Real + Scalar<Real = T>>(d: &DelaunayState<T>, mu: T) -> Result<CartesianState<T>> {
    cartesian_from_polar_nodal(&polar_nodal_from_delaunay(d, mu)?)
}

pub fn delaunay_from_cartesian<T: Real>(x: &CartesianState<T>, mu: T) -> Result<DelaunayState<T>> {
    delaunay_from_polar_nodal(&polar_nodal_from_cartesian(x)?, mu)
}

pub fn cartesian_from_keplerian<T: Real + Scalar<Real = T>>(kep: &KeplerianSet<T>, mu: T) -> Result<CartesianState<T>> {
    cartesian_from_delaunay(&delaunay_from_keplerian(kep, mu)?, mu)
}
