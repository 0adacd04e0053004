//! Generating-function terms `W1 = V1 + C1` and `W2 = V2 + C2`, the
//! closed-form averaging rules, and the intermediate second- and
//! third-order series used to cross-check the coefficient tables.
//!
//! Every series takes an [`OrbitGeometry`] in any scalar, so the same code
//! yields values, gradients and Hessians.

use crate::elements::{DelaunayState, OrbitGeometry};
use crate::error::{Error, Result};
use crate::hamiltonian::{kepler_term, zonal_term, Model, SecularTerm};
use crate::jets::DelaunayFunction;
use crate::scalar::{k, Real, Scalar};
use crate::series::{parity, powers, Harmonics};

#[inline]
fn lit<S: Scalar>(x: f64) -> S {
    k::<S>(x)
}

/// `(R⊕/p)²`.
#[inline]
fn radius_ratio2<S: Scalar>(o: &OrbitGeometry<S>, radius: S::Real) -> S {
    (o.p.recip() * radius).square()
}

/// `e²` computed from the momenta, which is accurate for small `e`.
#[inline]
fn ecc2<S: Scalar>(o: &OrbitGeometry<S>) -> S {
    let inv_l = o.big_l.recip();
    (o.big_l - o.big_g) * (o.big_l + o.big_g) * inv_l * inv_l
}

fn check_critical<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> Result<()> {
    model.guards.check_critical(o.s2.re())
}

/// `C1` and its partial derivatives with respect to `g`, `G` and `L`.
#[derive(Clone, Copy, Debug)]
pub struct C1Partials<S> {
    pub value: S,
    pub d_g: S,
    pub d_big_g: S,
    pub d_big_l: S,
}

/// First-order integration constant `C1` with its closed-form partials.
pub fn c1_partials<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> Result<C1Partials<S>> {
    check_critical(o, model)?;
    let x = o.s2;
    let d = lit::<S>(5.0) * x - lit::<S>(4.0);
    let inv32d = (d * lit::<S>(32.0)).recip();
    let kx = (lit::<S>(15.0) * x - lit::<S>(14.0)) * x * inv32d;
    let kx_x = ((lit::<S>(75.0) * x - lit::<S>(120.0)) * x + lit::<S>(56.0)) * inv32d / d;
    let e2 = ecc2(o);
    let (s2g, c2g) = (o.g * lit::<S>(2.0)).sin_cos();
    let rm = o.mu * model.constants.radius;
    let inv_g = o.big_g.recip();
    let inv_l = o.big_l.recip();
    let a = inv_g.powi(3) * (rm * rm);
    let x_g = o.big_h * o.big_h * inv_g.powi(3) * lit::<S>(2.0);
    Ok(C1Partials {
        value: a * kx * e2 * s2g,
        d_g: a * kx * e2 * c2g * lit::<S>(2.0),
        d_big_l: a * kx * s2g * o.big_g * o.big_g * inv_l.powi(3) * lit::<S>(2.0),
        d_big_g: a
            * s2g
            * (-kx * e2 * inv_g * lit::<S>(3.0) + kx_x * x_g * e2 - kx * o.big_g * inv_l * inv_l * lit::<S>(2.0)),
    })
}

/// `C1 = G(R⊕/p)² (15s²−14)/(32(5s²−4)) s² e² sin 2g`.
pub fn c1<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> Result<S> {
    check_critical(o, model)?;
    let x = o.s2;
    let d = lit::<S>(5.0) * x - lit::<S>(4.0);
    let num = lit::<S>(15.0) * x - lit::<S>(14.0);
    let (s2g, _) = (o.g * lit::<S>(2.0)).sin_cos();
    Ok(o.big_g * radius_ratio2(o, model.constants.radius) * num / (d * lit::<S>(32.0)) * x * ecc2(o) * s2g)
}

/// Short-period part `V1` of the first-order generating function.
pub fn v1<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> S {
    let hm = Harmonics::new(o);
    let b = [S::one() - lit::<S>(1.5) * o.s2, lit::<S>(0.75) * o.s2];
    let ep = powers::<S, 4>(o.e);
    let mut sum = b[0] * o.phi;
    for i in 0..=1_i32 {
        let mut inner = S::zero();
        for j in i.max(1)..=2 * i + 1 {
            let w = ((2 - parity(j)).pow(i as u32)) as f64 / j as f64;
            inner += ep[(j - 2 * i).unsigned_abs() as usize] * hm.sin(j, i as usize) * S::Real::lit(w);
        }
        sum += b[i as usize] * inner;
    }
    -o.big_g * radius_ratio2(o, model.constants.radius) * sum * S::Real::lit(0.5)
}

/// First-order generating function `W1 = V1 + C1`.
pub fn w1<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> Result<S> {
    Ok(v1(o, model) + c1(o, model)?)
}

/// `H̃'02 = {H10 + H01, V1}` from its three-row series and table `B`.
pub fn htilde02_prime<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> S {
    let table = model.tables.table("B");
    let hm = Harmonics::new(o);
    let x = o.s2;
    let ep = powers::<S, 8>(o.e);
    let np = powers::<S, 4>(o.eta);
    let xp = powers::<S, 3>(x);
    let rr4 = radius_ratio2(o, model.constants.radius).square();
    let h00 = kepler_term(o.big_l, o.mu);
    let a_over_r = o.a / o.r;

    let mut row1 = S::zero();
    for i in 0..=2_i32 {
        let jmin = if i % 2 == 0 { i } else { -i };
        let mut js = S::zero();
        for j in jmin..=i + 4 {
            let kmax = 3 - (2 * i - j).abs();
            if kmax < 0 {
                continue;
            }
            let mut ks = S::zero();
            for kk in 0..=kmax {
                ks += table.eval(&[i, j, kk], x) * np[kk as usize];
            }
            js += ks * ep[(j - 2 * i).unsigned_abs() as usize] * hm.cos(j, i as usize);
        }
        row1 += xp[i as usize] * js;
    }
    row1 = row1 * a_over_r * a_over_r * o.eta * o.eta / (o.eta + S::Real::lit(1.0)) * S::Real::lit(3.0 / 64.0);

    let d5 = lit::<S>(5.0) * x - lit::<S>(4.0);
    let d3 = lit::<S>(3.0) * x - lit::<S>(2.0);
    let mut cos_sum = S::zero();
    let mut sin_sum = S::zero();
    for j in 1..=3 {
        let js = parity(j);
        let ej = ep[js as usize];
        cos_sum += ej * hm.cos(j, 1) * S::Real::lit((2 - js) as f64 / j as f64);
        sin_sum += ej * hm.sin(j, 1) * S::Real::lit((2 - js) as f64);
    }
    let row2 = o.eta * (o.eta * d3 * d3 + d5 * x * cos_sum * lit::<S>(3.0)) * S::Real::lit(3.0 / 8.0);
    let p_over_r = o.p / o.r;
    let row3 = d5 * x * p_over_r * p_over_r * o.phi / (o.eta * o.eta) * sin_sum * S::Real::lit(9.0 / 8.0);
    h00 * rr4 * (row1 + row2 + row3)
}

/// `H̃*02 = {H10 + H01, C1}` from its series and tables `b`, `q`, `bi`, given the
/// partial derivatives of `C1`.
pub fn htilde02_star<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>, c1d: &C1Partials<S>) -> S {
    let b = model.tables.table("b");
    let q = model.tables.table("q");
    let bi = model.tables.table("bi");
    let hm = Harmonics::new(o);
    let x = o.s2;
    let e2 = ecc2(o);
    let eta2 = o.eta * o.eta;
    let pre = kepler_term(o.big_l, o.mu) * radius_ratio2(o, model.constants.radius);
    let a_over_r = o.a / o.r;
    let kern = a_over_r * a_over_r * o.eta;

    let mut sum_a = S::zero();
    for i in 0..=1_i32 {
        for j in -i..=2 * i + 3 {
            let js = parity(j);
            let mut ks = S::zero();
            let mut eta_pow = S::one();
            for kk in 0..=js {
                ks += b.eval(&[i, j, kk], x) * eta_pow;
                eta_pow *= eta2;
            }
            let jp = ((j - 2 * i).abs() - 2) * js;
            sum_a += ks * o.e.powi(jp) * hm.cos(j, i as usize);
        }
    }
    let term_a = pre * c1d.d_g / o.big_l * (lit::<S>(4.0) - lit::<S>(5.0) * x + kern * sum_a) * S::Real::lit(1.5);

    let mut sum_b = S::zero();
    for j in 1..=3 {
        let w = 1 + parity(j + 1);
        let ej = if parity(j) == 1 { o.e } else { S::one() };
        sum_b += ej * hm.sin(j, 1) * S::Real::lit(w as f64);
    }
    let term_b = -pre * c1d.d_big_g * o.eta * x * kern * sum_b * S::Real::lit(1.5);

    let mut sum_c = S::zero();
    for i in 0..=1_i32 {
        let mut js_sum = S::zero();
        for j in -i..=2 * i + 3 {
            let ej = if parity(j) == 1 { o.e } else { S::one() };
            js_sum += q.eval(&[i, j], e2) * ej * hm.sin(j, i as usize);
        }
        sum_c += bi.eval(&[i], x) * js_sum;
    }
    let term_c = pre * c1d.d_big_l / eta2 * kern * sum_c * S::Real::lit(3.0 / 16.0);
    term_a + term_b + term_c
}

/// `⟨cos(mf + α)⟩` over the mean anomaly.
pub fn kozai_average<T: Real>(m: u32, alpha: T, e: T) -> T {
    let eta = (T::one() - e * e).sqrt();
    let ratio = -e / (T::one() + eta);
    ratio.powi(m as i32) * (T::one() + T::from_u32(m).unwrap() * eta) * alpha.cos()
}

/// `⟨(p/r)² φ sin(mf + α)⟩` over the mean anomaly, from integration by
/// parts; requires `m ≥ 1`.
pub fn ibp_average<T: Real>(m: u32, alpha: T, e: T) -> Result<T> {
    if m == 0 {
        return Err(Error::Domain("integration by parts needs m ≥ 1".into()));
    }
    let eta = (T::one() - e * e).sqrt();
    Ok(-eta.powi(3) / T::from_u32(m).unwrap() * kozai_average(m, alpha, e))
}

/// `⟨H̃'02⟩`: the secular part plus the single `cos 2g` term.
pub fn average_htilde02_prime<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> S {
    let x = o.s2;
    let eta = o.eta;
    let h00 = kepler_term(o.big_l, o.mu);
    let rr4 = radius_ratio2(o, model.constants.radius).square();
    let t = lit::<S>(6.0) * x - lit::<S>(4.0);
    let p = (lit::<S>(7.0) * x - lit::<S>(16.0)) * x + lit::<S>(8.0);
    let q = (lit::<S>(5.0) * x + lit::<S>(8.0)) * x - lit::<S>(8.0);
    let secular = eta * (p * lit::<S>(5.0) + eta * t * t + eta * eta * q) * S::Real::lit(3.0 / 32.0);
    let (_, c2g) = (o.g * lit::<S>(2.0)).sin_cos();
    let long = eta * (lit::<S>(15.0) * x - lit::<S>(14.0)) * x * ecc2(o) * c2g * S::Real::lit(3.0 / 16.0);
    h00 * rr4 * (secular + long)
}

/// `⟨H̃*02⟩ = −H00 (R⊕/p)² 3(5s²−4) (1/L) ∂C1/∂g`.
pub fn average_htilde02_star<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> Result<S> {
    let d = c1_partials(o, model)?;
    let x = o.s2;
    Ok(-kepler_term(o.big_l, o.mu)
        * radius_ratio2(o, model.constants.radius)
        * (lit::<S>(5.0) * x - lit::<S>(4.0))
        * d.d_g
        / o.big_l
        * S::Real::lit(3.0))
}

/// Short-period part `V2` of the second-order generating function
/// (equation-of-the-centre block plus the `beta3` series).
pub fn v2<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> Result<S> {
    check_critical(o, model)?;
    let beta = model.tables.table("beta3");
    let hm = Harmonics::new(o);
    let x = o.s2;
    let e = o.e;
    let eta = o.eta;
    let rr4 = radius_ratio2(o, model.constants.radius).square();
    let d5 = lit::<S>(5.0) * x - lit::<S>(4.0);

    let mut cos_sum = S::zero();
    for j in 1..=3 {
        let js = parity(j);
        let ej = if js == 1 { e } else { S::one() };
        cos_sum += ej * hm.cos(j, 1) * S::Real::lit((2 - js) as f64 / j as f64);
    }
    let q = (lit::<S>(5.0) * x + lit::<S>(8.0)) * x - lit::<S>(8.0);
    let p = (lit::<S>(7.0) * x - lit::<S>(16.0)) * x + lit::<S>(8.0);
    let phi_block =
        -eta * eta * q - p * lit::<S>(5.0) - (lit::<S>(15.0) * x - lit::<S>(14.0)) * ecc2(o) * x * hm.cos_g(1)
            + x * d5 * cos_sum * lit::<S>(12.0);
    let phi_part = o.phi * phi_block * S::Real::lit(3.0 / 64.0);

    let np = powers::<S, 4>(eta);
    let xp = powers::<S, 3>(x);
    let one_eta = eta + S::Real::lit(1.0);
    let mut series = S::zero();
    for i in 0..=2_i32 {
        let istar = parity(i);
        let jmin = 2 * parity(i + 1) - 1;
        let jmax = 4 + i + (i - 1).div_euclid(2);
        let mut js_sum = S::zero();
        for j in jmin..=jmax {
            let mut ks = S::zero();
            for kk in 0..=3 {
                ks += beta.eval(&[i, j, kk], x) * np[kk as usize];
            }
            let ej = if parity(j) == 1 { e } else { S::one() };
            js_sum += ks * ej * hm.sin(j, i as usize);
        }
        let den = d5.powi(2 - istar) * one_eta.powi((3 - i).div_euclid(2));
        series += xp[i as usize] * js_sum / den;
    }
    Ok(o.big_g * rr4 * (phi_part + series * S::Real::lit(1.0 / 512.0)))
}

/// Second-order integration constant `C2` and `∂C2/∂g`.
pub fn c2_with_derivative<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> Result<(S, S)> {
    check_critical(o, model)?;
    let beta = model.tables.table("beta4");
    let hm = Harmonics::new(o);
    let x = o.s2;
    let e2 = ecc2(o);
    let d5 = lit::<S>(5.0) * x - lit::<S>(4.0);
    let np = powers::<S, 4>(o.eta);
    let one_eta = o.eta + S::Real::lit(1.0);
    let (mut value, mut d_g) = (S::zero(), S::zero());
    for i in 1..=2_i32 {
        let istar = parity(i);
        let mut ks = S::zero();
        for kk in 0..=4 - 2 * i + istar {
            ks += beta.eval(&[i, kk], x) * np[kk as usize];
        }
        let amp = ks * x.powi(i) * e2.powi(i) / (d5.powi(i + 1) * one_eta.powi(istar));
        let iu = i as usize;
        value += amp * hm.sin_g(iu) * S::Real::lit(1.0 / (2 * i) as f64);
        d_g += amp * hm.cos_g(iu);
    }
    let scale = o.big_g * radius_ratio2(o, model.constants.radius).square() * S::Real::lit(1.0 / 256.0);
    Ok((scale * value, scale * d_g))
}

/// Second-order integration constant `C2`.
pub fn c2<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> Result<S> {
    Ok(c2_with_derivative(o, model)?.0)
}

/// Second-order generating function `W2 = V2 + C2`.
pub fn w2<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> Result<S> {
    Ok(v2(o, model)? + c2(o, model)?)
}

/// `⟨H̃'03⟩` from table `beta4`, all three `cos 2ig` rows.
pub fn average_htilde03_prime<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> Result<S> {
    check_critical(o, model)?;
    let beta = model.tables.table("beta4");
    let hm = Harmonics::new(o);
    let x = o.s2;
    let e2 = ecc2(o);
    let d5 = lit::<S>(5.0) * x - lit::<S>(4.0);
    let np = powers::<S, 5>(o.eta);
    let one_eta = o.eta + S::Real::lit(1.0);
    let mut sum = S::zero();
    for i in 0..=2_i32 {
        let istar = parity(i);
        let mut ks = S::zero();
        for kk in 0..=4 - 2 * i + istar {
            ks += beta.eval(&[i, kk], x) * np[kk as usize];
        }
        sum += ks * x.powi(i) * e2.powi(i) / (d5.powi(2 - istar) * one_eta.powi(istar)) * hm.cos_g(i as usize);
    }
    let rr2 = radius_ratio2(o, model.constants.radius);
    Ok(kepler_term(o.big_l, o.mu) * rr2 * rr2 * rr2 * o.eta * sum * S::Real::lit(9.0 / 512.0))
}

/// `⟨H̃*03⟩ = −H00 (R⊕/p)² (9/2)(5s²−4) (1/L) ∂C2/∂g`.
pub fn average_htilde03_star<S: Scalar>(o: &OrbitGeometry<S>, model: &Model<S::Real>) -> Result<S> {
    let (_, d_g) = c2_with_derivative(o, model)?;
    let x = o.s2;
    Ok(-kepler_term(o.big_l, o.mu)
        * radius_ratio2(o, model.constants.radius)
        * (lit::<S>(5.0) * x - lit::<S>(4.0))
        * d_g
        / o.big_l
        * S::Real::lit(4.5))
}

macro_rules! delaunay_fn {
    ($(#[$doc:meta])* $name:ident, |$o:ident, $m:ident| $body:expr) => {
        $(#[$doc])*
        #[derive(Clone, Copy, Debug)]
        pub struct $name<'a, T>(pub &'a Model<T>);

        impl<T: Real> DelaunayFunction<T> for $name<'_, T> {
            fn eval<S: Scalar<Real = T>>(&self, $o: &OrbitGeometry<S>) -> Result<S> {
                let $m = self.0;
                $body
            }
        }
    };
}

delaunay_fn!(
    /// `C1` as a function of the chart.
    C1Fn, |o, m| c1(o, m)
);
delaunay_fn!(
    /// `V1` as a function of the chart.
    V1Fn, |o, m| Ok(v1(o, m))
);
delaunay_fn!(
    /// `W1` as a function of the chart.
    W1Fn, |o, m| w1(o, m)
);
delaunay_fn!(
    /// `V2` as a function of the chart.
    V2Fn, |o, m| v2(o, m)
);
delaunay_fn!(
    /// `C2` as a function of the chart.
    C2Fn, |o, m| c2(o, m)
);
delaunay_fn!(
    /// `W2` as a function of the chart.
    W2Fn, |o, m| w2(o, m)
);
delaunay_fn!(
    /// `H10 + H01`, the operand of the second-order brackets.
    FirstOrderSum, |o, m| Ok(zonal_term(o, &m.constants) + SecularTerm { m: 1, model: m }.eval(o)?)
);
delaunay_fn!(
    /// `H01 + 2 H10`, the operand of the third-order brackets with `W2`.
    ThirdOrderOperand, |o, m| Ok(zonal_term(o, &m.constants) * S::Real::lit(2.0) + SecularTerm { m: 1, model: m }.eval(o)?)
);
delaunay_fn!(
    /// `H̃'02` series as a function of the chart.
    Htilde02PrimeFn, |o, m| Ok(htilde02_prime(o, m))
);
delaunay_fn!(
    /// `H̃*02` series as a function of the chart.
    Htilde02StarFn, |o, m| Ok(htilde02_star(o, m, &c1_partials(o, m)?))
);

/// Plain evaluation of `C1` at a Delaunay state.
pub fn eval_c1<T: Real + Scalar<Real = T>>(d: &DelaunayState<T>, model: &Model<T>) -> Result<T> {
    c1(&OrbitGeometry::new(d, model.constants.mu)?, model)
}

/// Plain evaluation of `W1` at a Delaunay state.
pub fn eval_w1<T: Real + Scalar<Real = T>>(d: &DelaunayState<T>, model: &Model<T>) -> Result<T> {
    w1(&OrbitGeometry::new(d, model.constants.mu)?, model)
}

/// Plain evaluation of `H̃'02` at a Delaunay state.
pub fn eval_htilde02_prime<T: Real + Scalar<Real = T>>(d: &DelaunayState<T>, model: &Model<T>) -> Result<T> {
    Ok(htilde02_prime(&OrbitGeometry::new(d, model.constants.mu)?, model))
}

/// Plain evaluation of `H̃*02` at a Delaunay state.
pub fn eval_htilde02_star<T: Real + Scalar<Real = T>>(d: &DelaunayState<T>, model: &Model<T>) -> Result<T> {
    let o = OrbitGeometry::new(d, model.constants.mu)?;
    Ok(htilde02_star(&o, model, &c1_partials(&o, model)?))
}

/// Plain evaluation of `V2` at a Delaunay state.
pub fn eval_v2<T: Real + Scalar<Real = T>>(d: &DelaunayState<T>, model: &Model<T>) -> Result<T> {
    v2(&OrbitGeometry::new(d, model.constants.mu)?, model)
}

/// Plain evaluation of `C2` at a Delaunay state.
pub fn eval_c2<T: Real + Scalar<Real = T>>(d: &DelaunayState<T>, model: &Model<T>) -> Result<T> {
    c2(&OrbitGeometry::new(d, model.constants.mu)?, model)
}

/// Plain evaluation of `W2` at a Delaunay state.
pub fn eval_w2<T: Real + Scalar<Real = T>>(d: &DelaunayState<T>, model: &Model<T>) -> Result<T> {
    w2(&OrbitGeometry::new(d, model.constants.mu)?, model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{anomalies_from_mean, delaunay_from_keplerian, KeplerianSet};
    use crate::hamiltonian::PhysicalConstants;
    use crate::jets::{jet_anomalies, lift_state};

    fn model() -> Model<f64> {
        Model::new(PhysicalConstants::default())
    }

    fn state(e: f64, inc: f64, g: f64, l: f64, h: f64) -> DelaunayState<f64> {
        let kep = KeplerianSet {
            a: 9000.0,
            e,
            inclination: inc,
            raan: h,
            arg_perigee: g,
            mean_anomaly: l,
        };
        delaunay_from_keplerian(&kep, 398_600.441_5).unwrap()
    }

    #[test]
    fn kozai_rule_against_trapezoid() {
        // the trapezoid rule is spectrally accurate for periodic integrands
        let n = 2000;
        for &e in &[0.0, 0.2, 0.6] {
            for m in 0..5 {
                let alpha = 0.37;
                let mut sum = 0.0;
                for k in 0..n {
                    let mean = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                    let f = anomalies_from_mean(mean, 1.0, e).unwrap().true_anomaly;
                    sum += (m as f64 * f + alpha).cos();
                }
                let avg = sum / n as f64;
                assert!((kozai_average(m, alpha, e) - avg).abs() < 1e-13, "m = {m}, e = {e}");
            }
        }
        assert!(ibp_average(0, 0.0, 0.1).is_err());
    }

    #[test]
    fn c1_closed_partials_match_jets() {
        let m = model();
        let d = state(0.15, 1.0, 0.7, 2.0, 0.3);
        let o = jet_anomalies(&lift_state(&d), m.constants.mu, m.guards.e_floor).unwrap();
        let jet = c1(&o, &m).unwrap();
        let p = c1_partials(&OrbitGeometry::new(&d, m.constants.mu).unwrap(), &m).unwrap();
        let g = jet.grad();
        for (closed, auto) in [
            (p.value, jet.value()),
            (p.d_g, g[1]),
            (p.d_big_l, g[3]),
            (p.d_big_g, g[4]),
        ] {
            assert!(
                (closed - auto).abs() <= 1e-12 * auto.abs().max(1e-300),
                "{closed} vs {auto}"
            );
        }
        // C1 is free of the fast angle and the node
        assert_eq!(g[0], 0.0);
        assert_eq!(g[2], 0.0);
    }

    #[test]
    fn w1_and_w2_are_periodic_in_the_mean_anomaly() {
        let m = model();
        let a = state(0.3, 0.8, 1.2, 0.4, 0.0);
        let b = DelaunayState {
            l: a.l + 2.0 * std::f64::consts::PI,
            h: 2.5,
            ..a
        };
        for f in [eval_w1::<f64>, eval_w2::<f64>] {
            let (x, y) = (f(&a, &m).unwrap(), f(&b, &m).unwrap());
            assert!((x - y).abs() <= 1e-12 * x.abs(), "{x} vs {y}");
        }
    }

    #[test]
    fn critical_inclination_is_refused() {
        let m = model();
        let d = state(0.1, (0.8f64).sqrt().asin(), 0.3, 0.2, 0.0);
        let err = eval_w1(&d, &m).unwrap_err();
        assert!(err.is_guard(), "{err}");
    }
}
