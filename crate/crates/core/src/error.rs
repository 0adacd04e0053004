use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// Inside the band around `5 sin²I = 4` where the integration constants
    /// of the generating function are singular.
    #[error("critical inclination guard: |5 s² - 4| = {distance:.3e} < {guard:.1e}")]
    CriticalInclination { distance: f64, guard: f64 },

    /// A table coefficient with a removable `(3 s² - 2)` denominator was
    /// evaluated too close to its pole.
    #[error("denominator guard: |3 s² - 2| = {distance:.3e} < {guard:.1e}")]
    DenominatorGuard { distance: f64, guard: f64 },

    #[error("eccentricity {e:.3e} below the floor {floor:.1e} required for differentiation")]
    EccentricityFloor { e: f64, floor: f64 },

    #[error("invalid energy: calibration radicand {radicand:.6e} is not positive")]
    InvalidEnergy { radicand: f64 },

    #[error("coefficient table: {0}")]
    Table(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("time grids do not match: {0}")]
    GridMismatch(String),
}

impl Error {
    /// True for the guard-band refusals (critical inclination, eccentricity
    /// floor, denominator poles).
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::CriticalInclination { .. } | Error::DenominatorGuard { .. } | Error::EccentricityFloor { .. }
        )
    }
}
