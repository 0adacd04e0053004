//! The osculating main-problem Hamiltonian and the secular terms of the
//! completely reduced Hamiltonian.

use std::sync::Arc;

use num_traits::{Float, Zero};

use crate::elements::{DelaunayState, OrbitGeometry};
use crate::error::{Error, Result};
use crate::jets::DelaunayFunction;
use crate::scalar::{k, Real, Scalar};
use crate::tables::CoefficientTables;

/// Gravitational parameter, equatorial radius and second zonal harmonic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants<T> {
    /// km³/s²
    pub mu: T,
    /// km
    pub radius: T,
    /// `J2 = −C20`
    pub j2: T,
}

impl Default for PhysicalConstants<f64> {
    fn default() -> Self {
        Self {
            mu: 398_600.441_5,
            radius: 6_378.136_3,
            j2: 1.082_626_683e-3,
        }
    }
}

impl<T: Real> PhysicalConstants<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > T::zero() && self.mu.is_finite()) {
            return Err(Error::Domain(format!(
                "gravitational parameter must be positive, got {}",
                self.mu
            )));
        }
        if !(self.radius > T::zero() && self.radius.is_finite()) {
            return Err(Error::Domain(format!(
                "equatorial radius must be positive, got {}",
                self.radius
            )));
        }
        if !(self.j2 >= T::zero() && self.j2 < T::lit(0.1)) {
            return Err(Error::Domain(format!("J2 must lie in [0, 0.1), got {}", self.j2)));
        }
        Ok(())
    }

    pub fn with_j2(self, j2: T) -> Self {
        Self { j2, ..self }
    }
}

/// Tolerance bands inside which the theory refuses to evaluate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Guards<T> {
    /// Minimum `|5 s² − 4|`.
    pub critical_inclination: T,
    /// Minimum eccentricity for jet evaluation of the corrections.
    pub e_floor: T,
    /// Minimum `|3 s² − 2|` for the removable poles of the second-order
    /// semi-major-axis series.
    pub denominator: T,
}

impl<T: Real> Default for Guards<T> {
    fn default() -> Self {
        Self {
            critical_inclination: T::lit(1e-3),
            e_floor: T::lit(1e-6),
            denominator: T::lit(1e-6),
        }
    }
}

impl<T: Real> Guards<T> {
    /// Refuse inclinations inside the critical band.
    pub fn check_critical(&self, s2: T) -> Result<()> {
        let distance = (T::lit(5.0) * s2 - T::lit(4.0)).abs();
        if distance < self.critical_inclination {
            return Err(Error::CriticalInclination {
                distance: distance.to_f64_lossy(),
                guard: self.critical_inclination.to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// Refuse `3 s² − 2` too close to zero.
    pub fn check_denominator(&self, s2: T) -> Result<()> {
        let distance = (T::lit(3.0) * s2 - T::lit(2.0)).abs();
        if distance < self.denominator {
            return Err(Error::DenominatorGuard {
                distance: distance.to_f64_lossy(),
                guard: self.denominator.to_f64_lossy(),
            });
        }
        Ok(())
    }
}

/// Everything a theory evaluation depends on besides the state.
#[derive(Clone, Debug)]
pub struct Model<T> {
    pub constants: PhysicalConstants<T>,
    pub guards: Guards<T>,
    pub tables: Arc<CoefficientTables>,
}

impl<T: Real> Model<T> {
    /// Default guards and the shipped coefficient tables.
    pub fn new(constants: PhysicalConstants<T>) -> Self {
        Self {
            constants,
            guards: Guards::default(),
            tables: CoefficientTables::shipped(),
        }
    }

    pub fn with_guards(self, guards: Guards<T>) -> Self {
        Self { guards, ..self }
    }

    pub fn with_tables(self, tables: Arc<CoefficientTables>) -> Self {
        Self { tables, ..self }
    }

    pub fn with_j2(self, j2: T) -> Self {
        Self {
            constants: self.constants.with_j2(j2),
            ..self
        }
    }
}

/// Keplerian term `H00 = −μ²/(2L²)`.
#[inline]
pub fn kepler_term<S: Scalar>(big_l: S, mu: S::Real) -> S {
    let inv_l = big_l.recip();
    inv_l * inv_l * (mu * mu * S::Real::lit(-0.5))
}

/// First-order oblateness term `H10` (the osculating Hamiltonian is
/// `H00 + J2·H10`).
pub fn zonal_term<S: Scalar>(o: &OrbitGeometry<S>, c: &PhysicalConstants<S::Real>) -> S {
    let rr = (o.r.recip() * c.radius).square();
    let (_, cos_u) = (o.f + o.g).sin_cos();
    let cos_2u = k::<S>(2.0) * cos_u * cos_u - S::one();
    let bracket = S::one() - k::<S>(1.5) * o.s2 + k::<S>(1.5) * o.s2 * cos_2u;
    -(o.r.recip() * o.mu) * rr * bracket * S::Real::lit(0.5)
}

/// Total energy of the main problem at an osculating Delaunay state.
pub fn eval_osculating_hamiltonian<T>(d: &DelaunayState<T>, c: &PhysicalConstants<T>) -> Result<T>
where
    T: Real + Scalar<Real = T>,
{
    let o = OrbitGeometry::new(d, c.mu)?;
    Ok(kepler_term(o.big_l, c.mu) + c.j2 * zonal_term(&o, c))
}

/// `H00 + J2·H10` as a function of the chart.
#[derive(Clone, Copy, Debug)]
pub struct OsculatingHamiltonian<T>(pub PhysicalConstants<T>);

impl<T: Real> DelaunayFunction<T> for OsculatingHamiltonian<T> {
    fn eval<S: Scalar<Real = T>>(&self, o: &OrbitGeometry<S>) -> Result<S> {
        Ok(kepler_term(o.big_l, o.mu) + zonal_term(o, &self.0) * self.0.j2)
    }
}

/// `H10` as a function of the chart.
#[derive(Clone, Copy, Debug)]
pub struct ZonalTerm<T>(pub PhysicalConstants<T>);

impl<T: Real> DelaunayFunction<T> for ZonalTerm<T> {
    fn eval<S: Scalar<Real = T>>(&self, o: &OrbitGeometry<S>) -> Result<S> {
        Ok(zonal_term(o, &self.0))
    }
}

/// Reduced polynomial `Q_m(η, s²)` with `H0m = H00 (R⊕/p)^{2m} Q_m`.
fn reduced_polynomial<S: Scalar>(m: u8, eta: S, x: S, tables: &CoefficientTables) -> S {
    match m {
        1 => eta * (S::one() - k::<S>(1.5) * x),
        2 => {
            let t = k::<S>(6.0) * x - k::<S>(4.0);
            let p = (k::<S>(7.0) * x - k::<S>(16.0)) * x + k::<S>(8.0);
            let q = (k::<S>(5.0) * x + k::<S>(8.0)) * x - k::<S>(8.0);
            eta * (p * k::<S>(5.0) + eta * t * t + eta * eta * q) * k::<S>(3.0 / 32.0)
        }
        _ => {
            let beta = tables.table("beta4");
            let sum = (0..=4)
                .rev()
                .fold(S::zero(), |acc, kk| acc * eta + beta.eval(&[0, kk], x));
            let d = k::<S>(5.0) * x - k::<S>(4.0);
            eta * sum / (d * d) * k::<S>(9.0 / 512.0)
        }
    }
}

/// `(Q_m, ∂Q_m/∂η, ∂Q_m/∂s²)` in plain arithmetic.
fn reduced_polynomial_partials<T: Real>(m: u8, eta: T, x: T, tables: &CoefficientTables) -> (T, T, T) {
    let l = T::lit;
    match m {
        1 => (eta * (T::one() - l(1.5) * x), T::one() - l(1.5) * x, -l(1.5) * eta),
        2 => {
            let t = l(6.0) * x - l(4.0);
            let p = (l(7.0) * x - l(16.0)) * x + l(8.0);
            let q = (l(5.0) * x + l(8.0)) * x - l(8.0);
            let big_p = l(5.0) * p + eta * t * t + eta * eta * q;
            let p_eta = t * t + l(2.0) * eta * q;
            let p_x = l(5.0) * (l(14.0) * x - l(16.0)) + l(12.0) * eta * t + eta * eta * (l(10.0) * x + l(8.0));
            let c = l(3.0 / 32.0);
            (c * eta * big_p, c * (big_p + eta * p_eta), c * eta * p_x)
        }
        _ => {
            let beta = tables.table("beta4");
            let (mut s, mut s_eta, mut s_x) = (T::zero(), T::zero(), T::zero());
            let mut pow = T::one();
            for kk in 0..=4 {
                let (b, db) = beta
                    .get(&[0, kk])
                    .map_or((T::zero(), T::zero()), |c| c.eval_with_derivative(x));
                if kk > 0 {
                    s_eta += T::from_i32(kk).unwrap() * b * pow / eta;
                }
                s += b * pow;
                s_x += db * pow;
                pow *= eta;
            }
            let d = l(5.0) * x - l(4.0);
            let c = l(9.0 / 512.0);
            let q = c * eta * s / (d * d);
            let q_eta = c * (s + eta * s_eta) / (d * d);
            let q_x = c * eta * (s_x / (d * d) - s * l(10.0) / (d * d * d));
            (q, q_eta, q_x)
        }
    }
}

fn check_order(m: u8) -> Result<()> {
    if (1..=3).contains(&m) {
        Ok(())
    } else {
        Err(Error::Domain(format!("secular term order must be 1, 2 or 3, got {m}")))
    }
}

/// Secular term `H0m(L, G, H)`, `m = 1, 2, 3`, of the reduced Hamiltonian.
///
/// Generic over the scalar so that jets give its derivatives.
pub fn eval_secular_term<S: Scalar>(
    m: u8,
    big_l: S,
    big_g: S,
    big_h: S,
    c: &PhysicalConstants<S::Real>,
    guards: &Guards<S::Real>,
) -> Result<S> {
    secular_term_with(m, big_l, big_g, big_h, c, guards, &CoefficientTables::shipped())
}

fn secular_term_with<S: Scalar>(
    m: u8,
    big_l: S,
    big_g: S,
    big_h: S,
    c: &PhysicalConstants<S::Real>,
    guards: &Guards<S::Real>,
    tables: &CoefficientTables,
) -> Result<S> {
    check_order(m)?;
    let (l, g, h) = (big_l.re(), big_g.re(), big_h.re());
    if !(l > S::Real::zero() && g > S::Real::zero() && g <= l && h.abs() <= g) {
        return Err(Error::Domain(format!("invalid momenta L = {l}, G = {g}, H = {h}")));
    }
    let inv_g = big_g.recip();
    let x = (big_g - big_h) * (big_g + big_h) * inv_g * inv_g;
    if m == 3 {
        guards.check_critical(x.re())?;
    }
    let eta = big_g / big_l;
    let ratio = (inv_g * inv_g * (c.radius * c.mu)).square();
    let scale = kepler_term(big_l, c.mu) * ratio.powi(m as i32);
    Ok(scale * reduced_polynomial(m, eta, x, tables))
}

/// `H0m` as a function of the chart, using the model's tables.
#[derive(Clone, Copy, Debug)]
pub struct SecularTerm<'a, T> {
    pub m: u8,
    pub model: &'a Model<T>,
}

impl<T: Real> DelaunayFunction<T> for SecularTerm<'_, T> {
    fn eval<S: Scalar<Real = T>>(&self, o: &OrbitGeometry<S>) -> Result<S> {
        let md = self.model;
        secular_term_with(self.m, o.big_l, o.big_g, o.big_h, &md.constants, &md.guards, &md.tables)
    }
}

/// `(∂H0m/∂L, ∂H0m/∂G, ∂H0m/∂H)` in closed form.
pub fn secular_term_gradient<T: Real>(
    m: u8,
    big_l: T,
    big_g: T,
    big_h: T,
    c: &PhysicalConstants<T>,
    guards: &Guards<T>,
) -> Result<[T; 3]> {
    check_order(m)?;
    let x = (big_g - big_h) * (big_g + big_h) / (big_g * big_g);
    if m == 3 {
        guards.check_critical(x)?;
    }
    let eta = big_g / big_l;
    let h00 = -c.mu * c.mu / (T::lit(2.0) * big_l * big_l);
    let ratio = (c.radius * c.mu / (big_g * big_g)).powi(2 * m as i32);
    let (q, q_eta, q_x) = reduced_polynomial_partials(m, eta, x, &CoefficientTables::shipped());
    let base = h00 * ratio;
    let value = base * q;
    let two = T::lit(2.0);
    let mf = T::from_u8(m).unwrap();
    let d_l = -two * value / big_l - base * q_eta * eta / big_l;
    let d_g =
        -two * two * mf * value / big_g + base * (q_eta / big_l + q_x * two * big_h * big_h / (big_g * big_g * big_g));
    let d_h = -base * q_x * two * big_h / (big_g * big_g);
    Ok([d_l, d_g, d_h])
}

/// The secular terms up to third order; `h03` is absent inside the
/// critical-inclination band.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecularTermSet<T> {
    pub h01: T,
    pub h02: T,
    pub h03: Option<T>,
}

impl<T: Real + Scalar<Real = T>> SecularTermSet<T> {
    pub fn new(big_l: T, big_g: T, big_h: T, c: &PhysicalConstants<T>, guards: &Guards<T>) -> Result<Self> {
        let term = |m| eval_secular_term(m, big_l, big_g, big_h, c, guards);
        let h03 = match term(3) {
            Ok(v) => Some(v),
            Err(e) if e.is_guard() => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            h01: term(1)?,
            h02: term(2)?,
            h03,
        })
    }
}

fn check_truncation(order: u8, max: u8) -> Result<()> {
    if order > max {
        return Err(Error::Domain(format!("truncation order {order} exceeds {max}")));
    }
    Ok(())
}

fn factorial_weight<T: Real>(m: u8, j2: T) -> T {
    let fact = [1.0, 1.0, 2.0, 6.0][m as usize];
    j2.powi(m as i32) / T::lit(fact)
}

/// Reduced Hamiltonian `H00 + Σ_{m≤k} (J2^m/m!) H0m`.
pub fn secular_hamiltonian<S: Scalar>(
    order: u8,
    big_l: S,
    big_g: S,
    big_h: S,
    c: &PhysicalConstants<S::Real>,
    guards: &Guards<S::Real>,
) -> Result<S> {
    check_truncation(order, 3)?;
    let mut total = kepler_term(big_l, c.mu);
    for m in 1..=order {
        total += eval_secular_term(m, big_l, big_g, big_h, c, guards)? * factorial_weight(m, c.j2);
    }
    Ok(total)
}

/// Secular rates `(n_ℓ, n_g, n_h)` of the mean angles.
///
/// The Keplerian part of `n_ℓ` uses `l_hat` (the calibrated action when
/// calibration is on); the perturbation parts use the mean momenta.
pub fn secular_frequencies<T: Real>(
    l_hat: T,
    big_l: T,
    big_g: T,
    big_h: T,
    order: u8,
    c: &PhysicalConstants<T>,
    guards: &Guards<T>,
) -> Result<[T; 3]> {
    check_truncation(order, 3)?;
    let mut rates = [c.mu * c.mu / (l_hat * l_hat * l_hat), T::zero(), T::zero()];
    for m in 1..=order {
        let w = factorial_weight(m, c.j2);
        let grad = secular_term_gradient(m, big_l, big_g, big_h, c, guards)?;
        for (rate, d) in rates.iter_mut().zip(grad) {
            *rate += w * d;
        }
    }
    Ok(rates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{delaunay_from_keplerian, KeplerianSet};
    use crate::jets::Jet2;

    fn state(a: f64, e: f64, inc: f64, g: f64, l: f64) -> DelaunayState<f64> {
        let kep = KeplerianSet {
            a,
            e,
            inclination: inc,
            raan: 0.4,
            arg_perigee: g,
            mean_anomaly: l,
        };
        delaunay_from_keplerian(&kep, 398_600.441_5).unwrap()
    }

    #[test]
    fn keplerian_limit() {
        let c = PhysicalConstants::default().with_j2(0.0);
        let d = state(7000.0, 0.1, 0.9, 0.3, 1.1);
        let e = eval_osculating_hamiltonian(&d, &c).unwrap();
        assert!((e + c.mu * c.mu / (2.0 * d.big_l * d.big_l)).abs() < 1e-14);
    }

    #[test]
    fn null_oblateness_configuration() {
        // s² = 2/3 and f + g = π/4 kill the oblateness bracket.
        let c = PhysicalConstants::default();
        let d = state(
            7000.0,
            0.0,
            (2.0_f64 / 3.0).sqrt().asin(),
            std::f64::consts::FRAC_PI_4,
            0.0,
        );
        let e = eval_osculating_hamiltonian(&d, &c).unwrap();
        let kepler = -c.mu / (2.0 * 7000.0);
        assert!((e - kepler).abs() < 1e-12 * kepler.abs());
    }

    #[test]
    fn first_order_secular_term_vanishes_at_b0_root() {
        let c = PhysicalConstants::default();
        let (l, g) = (60_000.0, 59_000.0);
        let h = g * (1.0_f64 / 3.0).sqrt();
        let v = eval_secular_term(1, l, g, h, &c, &Guards::default()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn third_order_term_refuses_critical_band() {
        let c = PhysicalConstants::default();
        let g = 50_000.0;
        let h = g * (0.2_f64).sqrt();
        let err = eval_secular_term(3, 52_000.0, g, h, &c, &Guards::default()).unwrap_err();
        assert!(matches!(err, Error::CriticalInclination { .. }));
        assert!(eval_secular_term(2, 52_000.0, g, h, &c, &Guards::default()).is_ok());
        let set = SecularTermSet::new(52_000.0, g, h, &c, &Guards::default()).unwrap();
        assert!(set.h03.is_none());
    }

    #[test]
    fn truncation_definition() {
        let c = PhysicalConstants::default();
        let gd = Guards::default();
        let (l, g, h) = (55_000.0, 54_000.0, 20_000.0);
        let k2 = secular_hamiltonian(2, l, g, h, &c, &gd).unwrap();
        let k3 = secular_hamiltonian(3, l, g, h, &c, &gd).unwrap();
        let h03 = eval_secular_term(3, l, g, h, &c, &gd).unwrap();
        assert!((k3 - k2 - c.j2.powi(3) / 6.0 * h03).abs() < 1e-15 * k2.abs());
        let k0 = secular_hamiltonian(0, l, g, h, &c, &gd).unwrap();
        assert!((k0 + c.mu * c.mu / (2.0 * l * l)).abs() < 1e-15 * k0.abs());
        assert!(secular_hamiltonian(4, l, g, h, &c, &gd).is_err());
    }

    #[test]
    fn closed_form_gradients_match_jets() {
        let c = PhysicalConstants::default();
        let gd = Guards::default();
        for &(l, g, h) in &[
            (55_000.0, 54_000.0, 20_000.0),
            (60_000.0, 45_000.0, -30_000.0),
            (53_000.0, 52_990.0, 5_000.0),
        ] {
            for m in 1..=3 {
                let jl = Jet2::variable(l, 3);
                let jg = Jet2::variable(g, 4);
                let jh = Jet2::variable(h, 5);
                let jet = eval_secular_term(m, jl, jg, jh, &c, &gd).unwrap();
                let closed = secular_term_gradient(m, l, g, h, &c, &gd).unwrap();
                for (i, &value) in closed.iter().enumerate() {
                    let reference = jet.grad()[i + 3];
                    // the expanded third-order inclination polynomials cancel by
                    // about four digits, which both routes inherit
                    let tol = if m == 3 { 1e-9 } else { 1e-12 };
                    assert!(
                        (value - reference).abs() <= tol * reference.abs(),
                        "m={m} i={i}: {value} vs {reference}"
                    );
                }
                assert!(jet.grad()[..3].iter().all(|&x| x == 0.0));
            }
        }
    }

    #[test]
    fn keplerian_frequencies_without_j2() {
        let c = PhysicalConstants::default().with_j2(0.0);
        let f = secular_frequencies(55_000.0, 55_000.0, 54_000.0, 20_000.0, 3, &c, &Guards::default()).unwrap();
        assert!((f[0] - c.mu * c.mu / 55_000.0_f64.powi(3)).abs() < 1e-15 * f[0]);
        assert_eq!(f[1], 0.0);
        assert_eq!(f[2], 0.0);
    }

    #[test]
    fn perigee_rate_vanishes_at_first_order_critical_inclination() {
        let c = PhysicalConstants::default();
        let gd = Guards::default();
        let (l, g) = (55_000.0, 54_000.0);
        let rate = |h: f64| secular_frequencies(l, l, g, h, 1, &c, &gd).unwrap()[1];
        let h_crit = g * (0.2_f64).sqrt();
        assert!(rate(h_crit).abs() < 1e-12 * rate(g).abs());
        // the root of n_g found by bisection sits at cos²I = 1/5
        let (mut lo, mut hi) = (0.1 * g, 0.9 * g);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if rate(lo).signum() == rate(mid).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((0.5 * (lo + hi) - h_crit).abs() < 1e-8 * g);
    }

    #[test]
    fn invalid_constants_rejected() {
        let c = PhysicalConstants {
            mu: -1.0,
            radius: 1.0,
            j2: 1e-3,
        };
        assert!(c.validate().is_err());
        assert!(PhysicalConstants::default().validate().is_ok());
        assert!(eval_secular_term(4, 1.0, 1.0, 0.5, &PhysicalConstants::default(), &Guards::default()).is_err());
    }
}
