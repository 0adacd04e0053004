//! Second-order jets over the six Delaunay coordinates and the Poisson
//! brackets built on them.
//!
//! Coordinates are ordered `(ℓ, g, h, L, G, H)`: indices `0..3` are the
//! angles and `3..6` their conjugate momenta.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::elements::{kepler_newton, DelaunayState, OrbitGeometry};
use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Number of canonical coordinates.
pub const DIM: usize = 6;
const PACKED: usize = DIM * (DIM + 1) / 2;

#[inline(always)]
const fn packed(i: usize, j: usize) -> usize {
    if i >= j {
        i * (i + 1) / 2 + j
    } else {
        j * (j + 1) / 2 + i
    }
}

/// Value, gradient and Hessian of a function of the Delaunay coordinates.
///
/// The Hessian is symmetric by construction: only the lower triangle is
/// stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2<T> {
    value: T,
    grad: [T; DIM],
    hess: [T; PACKED],
}

impl<T: Real> Jet2<T> {
    pub fn constant(value: T) -> Self {
        Self {
            value,
            grad: [T::zero(); DIM],
            hess: [T::zero(); PACKED],
        }
    }

    /// Seed for the independent variable `index`.
    pub fn variable(value: T, index: usize) -> Self {
        let mut jet = Self::constant(value);
        jet.grad[index] = T::one();
        jet
    }

    pub fn value(&self) -> T {
        self.value
    }

    pub fn grad(&self) -> &[T; DIM] {
        &self.grad
    }

    pub fn hess(&self, i: usize, j: usize) -> T {
        self.hess[packed(i, j)]
    }

    /// Full symmetric Hessian.
    pub fn hessian(&self) -> [[T; DIM]; DIM] {
        let mut out = [[T::zero(); DIM]; DIM];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.hess(i, j);
            }
        }
        out
    }

    /// Composition with a univariate function given its value and first
    /// two derivatives at `self.value`.
    #[inline]
    pub fn chain(&self, f0: T, f1: T, f2: T) -> Self {
        let mut out = Self::constant(f0);
        for i in 0..DIM {
            out.grad[i] = f1 * self.grad[i];
        }
        for i in 0..DIM {
            let gi = f2 * self.grad[i];
            for j in 0..=i {
                let p = packed(i, j);
                out.hess[p] = f1 * self.hess[p] + gi * self.grad[j];
            }
        }
        out
    }

    /// Composition with a bivariate function `F(self, other)` given its
    /// partial derivatives up to second order.
    #[inline]
    #[allow(clippy::too_many_arguments)]
    fn chain2(&self, other: &Self, f0: T, fx: T, fy: T, fxx: T, fxy: T, fyy: T) -> Self {
        let mut out = Self::constant(f0);
        for i in 0..DIM {
            out.grad[i] = fx * self.grad[i] + fy * other.grad[i];
        }
        for i in 0..DIM {
            let (xi, yi) = (self.grad[i], other.grad[i]);
            for j in 0..=i {
                let (xj, yj) = (self.grad[j], other.grad[j]);
                let p = packed(i, j);
                out.hess[p] =
                    fx * self.hess[p] + fy * other.hess[p] + fxx * xi * xj + fxy * (xi * yj + yi * xj) + fyy * yi * yj;
            }
        }
        out
    }

    fn atan(self) -> Self {
        let u = self.value;
        let d = T::one() / (T::one() + u * u);
        self.chain(u.atan(), d, -(T::one() + T::one()) * u * d * d)
    }
}

/// Value and gradient only; the result type of a bracket of two [`Jet2`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet1<T> {
    pub value: T,
    pub grad: [T; DIM],
}

/// Anything carrying a gradient with respect to the Delaunay coordinates.
pub trait Differential<T> {
    fn value(&self) -> T;
    fn gradient(&self) -> &[T; DIM];
}

impl<T: Real> Differential<T> for Jet2<T> {
    fn value(&self) -> T {
        self.value
    }
    fn gradient(&self) -> &[T; DIM] {
        &self.grad
    }
}

impl<T: Real> Differential<T> for Jet1<T> {
    fn value(&self) -> T {
        self.value
    }
    fn gradient(&self) -> &[T; DIM] {
        &self.grad
    }
}

impl<T: Real> Add for Jet2<T> {
    type Output = Self;
    #[inline]
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<T: Real> AddAssign for Jet2<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.value += rhs.value;
        for (a, b) in self.grad.iter_mut().zip(rhs.grad.iter()) {
            *a += *b;
        }
        for (a, b) in self.hess.iter_mut().zip(rhs.hess.iter()) {
            *a += *b;
        }
    }
}

impl<T: Real> Sub for Jet2<T> {
    type Output = Self;
    #[inline]
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<T: Real> SubAssign for Jet2<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        self.value -= rhs.value;
        for (a, b) in self.grad.iter_mut().zip(rhs.grad.iter()) {
            *a -= *b;
        }
        for (a, b) in self.hess.iter_mut().zip(rhs.hess.iter()) {
            *a -= *b;
        }
    }
}

impl<T: Real> Neg for Jet2<T> {
    type Output = Self;
    #[inline]
    fn neg(mut self) -> Self {
        self.value = -self.value;
        self.grad.iter_mut().for_each(|v| *v = -*v);
        self.hess.iter_mut().for_each(|v| *v = -*v);
        self
    }
}

impl<T: Real> Mul for Jet2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.value, rhs.value);
        let mut out = Self::constant(a * b);
        for i in 0..DIM {
            out.grad[i] = a * rhs.grad[i] + b * self.grad[i];
        }
        for i in 0..DIM {
            for j in 0..=i {
                let p = packed(i, j);
                out.hess[p] =
                    a * rhs.hess[p] + b * self.hess[p] + self.grad[i] * rhs.grad[j] + rhs.grad[i] * self.grad[j];
            }
        }
        out
    }
}

impl<T: Real> MulAssign for Jet2<T> {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<T: Real> Div for Jet2<T> {
    type Output = Self;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * Scalar::recip(rhs)
    }
}

impl<T: Real> Add<T> for Jet2<T> {
    type Output = Self;
    #[inline]
    fn add(mut self, rhs: T) -> Self {
        self.value += rhs;
        self
    }
}

impl<T: Real> Sub<T> for Jet2<T> {
    type Output = Self;
    #[inline]
    fn sub(mut self, rhs: T) -> Self {
        self.value -= rhs;
        self
    }
}

impl<T: Real> Mul<T> for Jet2<T> {
    type Output = Self;
    #[inline]
    fn mul(mut self, rhs: T) -> Self {
        self.value *= rhs;
        self.grad.iter_mut().for_each(|v| *v *= rhs);
        self.hess.iter_mut().for_each(|v| *v *= rhs);
        self
    }
}

impl<T: Real> Div<T> for Jet2<T> {
    type Output = Self;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: T) -> Self {
        self * rhs.recip()
    }
}

impl<T: Real> Scalar for Jet2<T> {
    type Real = T;

    fn from_real(x: T) -> Self {
        Self::constant(x)
    }

    fn re(&self) -> T {
        self.value
    }

    fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    fn sin_cos(self) -> (Self, Self) {
        let (s, c) = self.value.sin_cos();
        (self.chain(s, c, -s), self.chain(c, -s, -c))
    }

    fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        let d1 = T::lit(0.5) / s;
        self.chain(s, d1, -d1 / (T::lit(2.0) * self.value))
    }

    fn recip(self) -> Self {
        let r = self.value.recip();
        self.chain(r, -r * r, T::lit(2.0) * r * r * r)
    }

    fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(T::one()),
            1 => self,
            _ => {
                let v = self.value;
                let nf = T::from_i32(n).unwrap();
                let pm2 = v.powi(n - 2);
                self.chain(pm2 * v * v, nf * pm2 * v, nf * (nf - T::one()) * pm2)
            }
        }
    }

    fn atan2(self, x: Self) -> Self {
        let value = self.value.atan2(x.value);
        let mut out = if x.value.abs() >= self.value.abs() {
            (self / x).atan()
        } else {
            -(x / self).atan()
        };
        out.value = value;
        out
    }

    fn eccentric_anomaly(mean: Self, e: Self) -> Self {
        let ecc = e.value;
        let big_e = kepler_newton(mean.value, ecc);
        let (sin_e, cos_e) = big_e.sin_cos();
        let d = T::one() - ecc * cos_e;
        let inv = d.recip();
        let e_m = inv;
        let e_e = sin_e * inv;
        let e_mm = -ecc * sin_e * inv * inv * inv;
        let e_me = (cos_e - ecc * sin_e * sin_e * inv) * inv * inv;
        let e_ee = sin_e * (T::lit(2.0) * cos_e - ecc * sin_e * sin_e * inv) * inv * inv;
        mean.chain2(&e, big_e, e_m, e_e, e_mm, e_me, e_ee)
    }
}

/// Six seeds for the Delaunay coordinates of `d`.
pub fn lift_state<T: Real>(d: &DelaunayState<T>) -> [Jet2<T>; DIM] {
    let v = d.to_array();
    std::array::from_fn(|i| Jet2::variable(v[i], i))
}

/// Orbit geometry (anomalies, radius, eccentricity functions) carried as
/// jets. Refuses eccentricities below `e_floor`, where the derivatives of
/// `e` with respect to `L` and `G` blow up.
pub fn jet_anomalies<T: Real>(seeds: &[Jet2<T>; DIM], mu: T, e_floor: T) -> Result<OrbitGeometry<Jet2<T>>> {
    let state = DelaunayState::from_array(*seeds);
    OrbitGeometry::with_floor(&state, mu, Some(e_floor))
}

/// `{F, G}` from two gradients, angles first.
#[inline]
pub fn bracket<T: Real>(f: &impl Differential<T>, g: &impl Differential<T>) -> T {
    let (a, b) = (f.gradient(), g.gradient());
    (0..3).fold(T::zero(), |acc, k| acc + a[k] * b[k + 3] - a[k + 3] * b[k])
}

/// `{F, G}` together with its exact gradient, built from the Hessians of
/// both operands. The result can be bracketed again.
pub fn bracket_jet<T: Real>(f: &Jet2<T>, g: &Jet2<T>) -> Jet1<T> {
    let value = bracket(f, g);
    let grad = std::array::from_fn(|m| {
        (0..3).fold(T::zero(), |acc, k| {
            acc + f.hess(k, m) * g.grad[k + 3] + f.grad[k] * g.hess(k + 3, m)
                - f.hess(k + 3, m) * g.grad[k]
                - f.grad[k + 3] * g.hess(k, m)
        })
    });
    Jet1 { value, grad }
}

/// A function of the Delaunay chart that can be evaluated on any scalar,
/// in particular on jets.
pub trait DelaunayFunction<T: Real> {
    fn eval<S: Scalar<Real = T>>(&self, orbit: &OrbitGeometry<S>) -> Result<S>;
}

/// Plain-value evaluation of a [`DelaunayFunction`].
pub fn eval_at<T: Real + Scalar<Real = T>, F: DelaunayFunction<T>>(f: &F, d: &DelaunayState<T>, mu: T) -> Result<T> {
    f.eval(&OrbitGeometry::new(d, mu)?)
}

/// Jet evaluation of a [`DelaunayFunction`].
pub fn eval_jet<T: Real, F: DelaunayFunction<T>>(f: &F, d: &DelaunayState<T>, mu: T, e_floor: T) -> Result<Jet2<T>> {
    f.eval(&jet_anomalies(&lift_state(d), mu, e_floor)?)
}

/// Poisson bracket `{F, G}` at the state `d`.
pub fn poisson_bracket<T, F, G>(f: &F, g: &G, d: &DelaunayState<T>, mu: T, e_floor: T) -> Result<T>
where
    T: Real,
    F: DelaunayFunction<T>,
    G: DelaunayFunction<T>,
{
    let orbit = jet_anomalies(&lift_state(d), mu, e_floor)?;
    Ok(bracket(&f.eval(&orbit)?, &g.eval(&orbit)?))
}

/// Poisson bracket `{F, G}` with first derivatives retained.
pub fn poisson_bracket_jet<T, F, G>(f: &F, g: &G, d: &DelaunayState<T>, mu: T, e_floor: T) -> Result<Jet1<T>>
where
    T: Real,
    F: DelaunayFunction<T>,
    G: DelaunayFunction<T>,
{
    let orbit = jet_anomalies(&lift_state(d), mu, e_floor)?;
    Ok(bracket_jet(&f.eval(&orbit)?, &g.eval(&orbit)?))
}

/// The `i`-th canonical coordinate as a function.
#[derive(Clone, Copy, Debug)]
pub struct Coordinate(pub usize);

impl<T: Real> DelaunayFunction<T> for Coordinate {
    fn eval<S: Scalar<Real = T>>(&self, orbit: &OrbitGeometry<S>) -> Result<S> {
        orbit
            .coordinates()
            .get(self.0)
            .copied()
            .ok_or_else(|| Error::Domain(format!("coordinate index {} out of range", self.0)))
    }
}
