//! Scalar abstraction shared by plain floating point and jet arithmetic.
//!
//! Every theory function (Hamiltonian terms, generating functions, chart
//! conversions) is written once against [`Scalar`] and evaluated either on
//! plain `f32`/`f64` values or on [`Jet2`](crate::jets::Jet2) values to get
//! exact first and second derivatives.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, One, Zero};

/// Floating point type underlying every computation: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline(always)]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }

    #[inline(always)]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Arithmetic needed to evaluate the theory in closed form.
pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<<Self as Scalar>::Real, Output = Self>
    + Sub<<Self as Scalar>::Real, Output = Self>
    + Mul<<Self as Scalar>::Real, Output = Self>
    + Div<<Self as Scalar>::Real, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    type Real: Real;

    /// Constant (derivative-free) lift of a real number.
    fn from_real(x: Self::Real) -> Self;

    /// Value part, dropping any derivative information.
    fn re(&self) -> Self::Real;

    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sin_cos(self) -> (Self, Self) {
        (self.sin(), self.cos())
    }
    fn sqrt(self) -> Self;
    fn recip(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn atan2(self, x: Self) -> Self;

    /// Eccentric anomaly solving `E - e sin E = mean`, with derivatives (if
    /// any) obtained by implicit differentiation of Kepler's equation.
    fn eccentric_anomaly(mean: Self, e: Self) -> Self;

    #[inline(always)]
    fn lit(x: f64) -> Self {
        Self::from_real(Self::Real::lit(x))
    }

    #[inline(always)]
    fn zero() -> Self {
        Self::from_real(Self::Real::zero())
    }

    #[inline(always)]
    fn one() -> Self {
        Self::from_real(Self::Real::one())
    }

    #[inline(always)]
    fn square(self) -> Self {
        self * self
    }
}

macro_rules! impl_scalar_for_float {
    ($t:ty) => {
        impl Scalar for $t {
            type Real = $t;

            #[inline(always)]
            fn from_real(x: $t) -> Self {
                x
            }
            #[inline(always)]
            fn re(&self) -> $t {
                *self
            }
            #[inline(always)]
            fn sin(self) -> Self {
                Float::sin(self)
            }
            #[inline(always)]
            fn cos(self) -> Self {
                Float::cos(self)
            }
            #[inline(always)]
            fn sin_cos(self) -> (Self, Self) {
                Float::sin_cos(self)
            }
            #[inline(always)]
            fn sqrt(self) -> Self {
                Float::sqrt(self)
            }
            #[inline(always)]
            fn recip(self) -> Self {
                Float::recip(self)
            }
            #[inline(always)]
            fn powi(self, n: i32) -> Self {
                Float::powi(self, n)
            }
            #[inline(always)]
            fn atan2(self, x: Self) -> Self {
                Float::atan2(self, x)
            }
            fn eccentric_anomaly(mean: Self, e: Self) -> Self {
                crate::elements::kepler_newton(mean, e)
            }
        }
    };
}

impl_scalar_for_float!(f32);
impl_scalar_for_float!(f64);

/// Shorthand for a constant of scalar type `S` from an `f64` literal.
#[inline(always)]
pub fn k<S: Scalar>(x: f64) -> S {
    S::lit(x)
}
