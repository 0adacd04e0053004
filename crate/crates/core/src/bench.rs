//! Throughput of the periodic corrections.

use std::hint::black_box;
use std::time::Instant;

use crate::corrections::{correct_function, delta_a_first, mean_to_osculating, CorrectionOrder, SemiMajorAxis};
use crate::elements::{DelaunayState, OrbitGeometry};
use crate::error::Result;
use crate::hamiltonian::Model;
use crate::verify::sample_states;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchConfig {
    pub seed: u64,
    pub states: usize,
    /// States timed together; the statistics are over batches.
    pub batch: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            states: 100_000,
            batch: 1_000,
        }
    }
}

/// Per-evaluation wall time of one workload.
#[derive(Clone, Debug, PartialEq)]
pub struct Timing {
    pub name: &'static str,
    pub evaluations: usize,
    pub mean_ns: f64,
    pub median_ns: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub timings: Vec<Timing>,
}

impl BenchReport {
    pub const CSV_HEADER: &'static str = "workload,evaluations,mean_ns,median_ns";

    pub fn get(&self, name: &str) -> Option<&Timing> {
        self.timings.iter().find(|t| t.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for t in &self.timings {
            out.push_str(&format!(
                "{},{},{:?},{:?}\n",
                t.name, t.evaluations, t.mean_ns, t.median_ns
            ));
        }
        out
    }
}

fn time_batches(
    name: &'static str,
    states: &[DelaunayState<f64>],
    batch: usize,
    mut f: impl FnMut(&DelaunayState<f64>) -> Result<f64>,
) -> Result<Timing> {
    let mut per_eval = Vec::new();
    for chunk in states.chunks(batch.max(1)) {
        let start = Instant::now();
        for d in chunk {
            black_box(f(black_box(d))?);
        }
        per_eval.push(start.elapsed().as_nanos() as f64 / chunk.len() as f64);
    }
    let mean = per_eval.iter().sum::<f64>() / per_eval.len() as f64;
    per_eval.sort_by(f64::total_cmp);
    let mid = per_eval.len() / 2;
    let median = if per_eval.len() % 2 == 0 {
        0.5 * (per_eval[mid - 1] + per_eval[mid])
    } else {
        per_eval[mid]
    };
    Ok(Timing {
        name,
        evaluations: states.len(),
        mean_ns: mean,
        median_ns: median,
    })
}

/// Time the full direct corrections (all six polar-nodal functions) at
/// orders 1 and 2, and the first-order semi-major-axis correction through
/// its closed series and through the bracket engine.
pub fn run(model: &Model<f64>, cfg: &BenchConfig) -> Result<BenchReport> {
    let mu = model.constants.mu;
    let states = sample_states(cfg.seed, cfg.states, mu);
    let timings = vec![
        time_batches("direct-order-1", &states, cfg.batch, |d| {
            Ok(mean_to_osculating(d, 1, model)?.r)
        })?,
        time_batches("direct-order-2", &states, cfg.batch, |d| {
            Ok(mean_to_osculating(d, 2, model)?.r)
        })?,
        time_batches("delta-a/table", &states, cfg.batch, |d| {
            Ok(delta_a_first(&OrbitGeometry::new(d, mu)?, model))
        })?,
        time_batches("delta-a/bracket", &states, cfg.batch, |d| {
            correct_function(&SemiMajorAxis, d, CorrectionOrder::direct(1), model)
        })?,
    ];
    Ok(BenchReport { timings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::PhysicalConstants;

    #[test]
    fn small_report() {
        let model = Model::new(PhysicalConstants::default());
        let r = run(
            &model,
            &BenchConfig {
                seed: 2,
                states: 40,
                batch: 10,
            },
        )
        .unwrap();
        assert_eq!(r.timings.len(), 4);
        assert!(r.timings.iter().all(|t| t.mean_ns > 0.0 && t.evaluations == 40));
        assert_eq!(r.to_csv().lines().count(), 5);
    }
}
