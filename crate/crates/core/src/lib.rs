//! Analytical propagation of artificial-satellite orbits under the J2
//! zonal harmonic, with a single Lie-Deprit transformation carried to
//! second (and partly third) order.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod corrections;
pub mod elements;
pub mod error;
pub mod genfun;
pub mod hamiltonian;
pub mod jets;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod secular;
mod series;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

pub use corrections::{mean_to_osculating, osculating_to_mean};
pub use elements::{CartesianState, DelaunayState, KeplerianSet, PolarNodalState};
pub use hamiltonian::{Guards, Model, PhysicalConstants};
pub use secular::{generate_ephemeris, initialize_theory, propagate_mean, SecularConstants, TheoryConfig, Variant};

/// Second-order jet over `f64`.
pub type Jet = jets::Jet2<f64>;
