//! Run configuration: one TOML file, every key documented in the shipped
//! `configs/topex.toml`. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use brouwer::bench::BenchConfig;
use brouwer::oracle::uniform_grid;
use brouwer::verify::VerifyConfig;
use brouwer::{KeplerianSet, PhysicalConstants, Variant};

use crate::error::CliError;

/// The Topex example, used when no `--config` is given.
pub const DEFAULT_CONFIG: &str = include_str!("../configs/topex.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    constants: Option<RawConstants>,
    orbit: RawOrbit,
    theory: RawTheory,
    run: RawRun,
    #[serde(default)]
    verify: RawVerify,
    #[serde(default)]
    bench: RawBench,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstants {
    mu: f64,
    radius: f64,
    j2: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrbit {
    a_km: f64,
    e: f64,
    inclination_deg: f64,
    raan_deg: f64,
    arg_perigee_deg: f64,
    mean_anomaly_deg: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTheory {
    variant: String,
    #[serde(default)]
    compare: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    days: f64,
    step_s: f64,
    tol: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVerify {
    seed: u64,
    samples: usize,
}

impl Default for RawVerify {
    fn default() -> Self {
        let d = VerifyConfig::default();
        Self {
            seed: d.seed,
            samples: d.samples,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBench {
    seed: u64,
    states: usize,
}

impl Default for RawBench {
    fn default() -> Self {
        let d = BenchConfig::default();
        Self {
            seed: d.seed,
            states: d.states,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    propagate: Option<PathBuf>,
    compare: Option<PathBuf>,
    verify: Option<PathBuf>,
    bench: Option<PathBuf>,
}

/// Output destinations per command; `None` is stdout.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outputs {
    pub propagate: Option<PathBuf>,
    pub compare: Option<PathBuf>,
    pub verify: Option<PathBuf>,
    pub bench: Option<PathBuf>,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub variants: Vec<String>,
    pub days: Option<f64>,
    pub tol: Option<f64>,
}

/// A fully validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub constants: PhysicalConstants<f64>,
    pub elements: KeplerianSet<f64>,
    pub variant: Variant,
    pub compare: Vec<Variant>,
    pub days: f64,
    pub step_s: f64,
    pub tol: f64,
    pub verify: VerifyConfig,
    pub bench: BenchConfig,
    pub outputs: Outputs,
}

fn parse_variant(label: &str) -> Result<Variant, CliError> {
    label.parse().map_err(|e| CliError::Config(format!("theory: {e}")))
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let text = match path {
            Some(p) => {
                std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?
            }
            None => DEFAULT_CONFIG.to_string(),
        };
        Self::parse(&text, overrides)
    }

    pub fn parse(text: &str, overrides: &Overrides) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;

        let constants = match raw.constants {
            Some(c) => PhysicalConstants {
                mu: c.mu,
                radius: c.radius,
                j2: c.j2,
            },
            None => PhysicalConstants::default(),
        };
        constants
            .validate()
            .map_err(|e| CliError::Config(format!("constants: {e}")))?;

        let o = raw.orbit;
        let elements = KeplerianSet {
            a: o.a_km,
            e: o.e,
            inclination: o.inclination_deg.to_radians(),
            raan: o.raan_deg.to_radians(),
            arg_perigee: o.arg_perigee_deg.to_radians(),
            mean_anomaly: o.mean_anomaly_deg.to_radians(),
        };
        elements
            .validate()
            .map_err(|e| CliError::Config(format!("orbit: {e}")))?;

        // --variant replaces the propagated variant and the comparison list
        let (variant, compare) = if overrides.variants.is_empty() {
            let compare = raw
                .theory
                .compare
                .iter()
                .map(|s| parse_variant(s))
                .collect::<Result<Vec<_>, _>>()?;
            (parse_variant(&raw.theory.variant)?, compare)
        } else {
            let list = overrides
                .variants
                .iter()
                .map(|s| parse_variant(s))
                .collect::<Result<Vec<_>, _>>()?;
            (list[0], list)
        };

        let days = overrides.days.unwrap_or(raw.run.days);
        let tol = overrides.tol.unwrap_or(raw.run.tol);
        let step_s = raw.run.step_s;
        if !(days >= 0.0 && days.is_finite()) {
            return Err(CliError::Config(format!("run: days must be nonnegative, got {days}")));
        }
        if !(1e-14..=1e-9).contains(&tol) {
            return Err(CliError::Config(format!("run: tol {tol:e} outside [1e-14, 1e-9]")));
        }
        uniform_grid(days * 86_400.0, step_s).map_err(|e| CliError::Config(format!("run: {e}")))?;

        if raw.verify.samples == 0 {
            return Err(CliError::Config("verify: samples must be positive".into()));
        }
        if raw.bench.states == 0 {
            return Err(CliError::Config("bench: states must be positive".into()));
        }
        let verify = VerifyConfig {
            seed: raw.verify.seed,
            samples: raw.verify.samples,
            averaged_samples: raw.verify.samples,
            ..VerifyConfig::default()
        };
        let bench = BenchConfig {
            seed: raw.bench.seed,
            states: raw.bench.states,
            ..BenchConfig::default()
        };

        Ok(Self {
            constants,
            elements,
            variant,
            compare,
            days,
            step_s,
            tol,
            verify,
            bench,
            outputs: Outputs {
                propagate: raw.output.propagate,
                compare: raw.output.compare,
                verify: raw.output.verify,
                bench: raw.output.bench,
            },
        })
    }

    /// Sample times in seconds.
    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.days * 86_400.0, self.step_s).expect("grid validated at load")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_config_is_valid() {
        let c = RunConfig::parse(DEFAULT_CONFIG, &Overrides::default()).unwrap();
        assert_eq!(c.variant.to_string(), "{2+:2:2}");
        assert_eq!(c.compare.len(), 4);
        assert_eq!(c.grid().len(), 721);
        assert_eq!(c.constants, PhysicalConstants::default());
        assert_eq!(c.outputs, Outputs::default());
    }

    #[test]
    fn overrides_take_precedence() {
        let o = Overrides {
            variants: vec!["1:2:1".into(), "2:2:2".into()],
            days: Some(1.0),
            tol: Some(1e-12),
        };
        let c = RunConfig::parse(DEFAULT_CONFIG, &o).unwrap();
        assert_eq!(c.variant.to_string(), "{1:2:1}");
        assert_eq!(c.compare.len(), 2);
        assert_eq!(c.grid().len(), 25);
        assert_eq!(c.tol, 1e-12);
    }

    #[test]
    fn bad_configs_are_rejected() {
        let unknown = DEFAULT_CONFIG.replace("[run]", "[run]\nspeed = 3");
        let bad_variant = DEFAULT_CONFIG.replace("variant = \"2+:2:2\"", "variant = \"3:2:2\"");
        let bad_tol = DEFAULT_CONFIG.replace("tol = 1e-13", "tol = 1e-3");
        let bad_orbit = DEFAULT_CONFIG.replace("e = 0.0001", "e = 1.5");
        let missing = DEFAULT_CONFIG.replace("step_s = 3600.0", "");
        for text in [unknown, bad_variant, bad_tol, bad_orbit, missing] {
            assert!(matches!(
                RunConfig::parse(&text, &Overrides::default()),
                Err(CliError::Config(_))
            ));
        }
    }
}
