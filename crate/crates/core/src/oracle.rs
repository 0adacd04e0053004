//! Numerical truth: the main problem integrated in Cartesian coordinates
//! with an adaptive order-8 Runge-Kutta scheme, and RSS comparison of
//! analytical ephemerides against it.

use ode_solvers::{Dop853, OutputType, System, Vector6};

use crate::elements::{cross, norm, CartesianState};
use crate::error::{Error, Result};
use crate::hamiltonian::PhysicalConstants;
use crate::scalar::Real;
use crate::secular::EphemerisRecord;

/// Acceleration of the J2 main problem (km/s²).
pub fn main_problem_acceleration<T: Real>(pos: &[T; 3], c: &PhysicalConstants<T>) -> Result<[T; 3]> {
    let r2 = pos[0] * pos[0] + pos[1] * pos[1] + pos[2] * pos[2];
    if !(r2 > T::zero()) || !r2.is_finite() {
        return Err(Error::Domain("acceleration requested at zero radius".into()));
    }
    let r = r2.sqrt();
    let z2 = pos[2] * pos[2] / r2;
    let q = T::lit(1.5) * c.j2 * c.radius * c.radius / r2;
    let kep = -c.mu / (r2 * r);
    let fxy = kep * (T::one() + q * (T::one() - T::lit(5.0) * z2));
    let fz = kep * (T::one() + q * (T::lit(3.0) - T::lit(5.0) * z2));
    Ok([fxy * pos[0], fxy * pos[1], fz * pos[2]])
}

/// Potential energy per unit mass, `−μ/r + (μ/r) J2 (R/r)² P2(z/r)`.
pub fn main_problem_potential<T: Real>(pos: &[T; 3], c: &PhysicalConstants<T>) -> T {
    let r = norm(pos);
    let z2 = pos[2] * pos[2] / (r * r);
    let p2 = T::lit(0.5) * (T::lit(3.0) * z2 - T::one());
    let rr = c.radius / r;
    -c.mu / r * (T::one() - c.j2 * rr * rr * p2)
}

/// Total energy per unit mass, the Cartesian form of the osculating
/// Hamiltonian.
pub fn cartesian_energy<T: Real>(x: &CartesianState<T>, c: &PhysicalConstants<T>) -> T {
    let v = &x.velocity;
    T::lit(0.5) * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) + main_problem_potential(&x.position, c)
}

/// Integrator bookkeeping for one run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationStats {
    pub accepted_steps: u32,
    pub rejected_steps: u32,
    pub evaluations: u32,
    pub tolerance: f64,
    /// Largest `|E(t) − E(0)| / |E(0)|` over the samples.
    pub energy_drift: f64,
    /// Largest `|Hz(t) − Hz(0)| / |Hz(0)|` over the samples.
    pub polar_momentum_drift: f64,
}

/// Samples of the numerical solution on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(f64, CartesianState<f64>)>,
    pub stats: IntegrationStats,
}

impl Trajectory {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.0)
    }

    pub fn last(&self) -> &CartesianState<f64> {
        &self.samples.last().expect("trajectory holds the epoch sample").1
    }
}

struct MainProblem {
    c: PhysicalConstants<f64>,
}

impl System<f64, Vector6<f64>> for MainProblem {
    fn system(&self, _t: f64, y: &Vector6<f64>, dy: &mut Vector6<f64>) {
        // r > 0 along any orbit that reaches the integrator
        let a = main_problem_acceleration(&[y[0], y[1], y[2]], &self.c).unwrap_or([f64::NAN; 3]);
        *dy = Vector6::new(y[3], y[4], y[5], a[0], a[1], a[2]);
    }
}

fn to_vector(x: &CartesianState<f64>) -> Vector6<f64> {
    let (p, v) = (x.position, x.velocity);
    Vector6::new(p[0], p[1], p[2], v[0], v[1], v[2])
}

fn from_vector(y: &Vector6<f64>) -> CartesianState<f64> {
    CartesianState {
        position: [y[0], y[1], y[2]],
        velocity: [y[3], y[4], y[5]],
    }
}

/// Sample times `0, step, 2·step, …` up to `t_end`.
pub fn uniform_grid(t_end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::Domain(format!("invalid grid: t_end = {t_end}, step = {step}")));
    }
    let n = (t_end / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| k as f64 * step).collect())
}

/// Integrate the main problem from `x0` at `t = 0` and sample it every
/// `step` seconds up to `t_end`.
///
/// `tol` is used both as relative and absolute (km, km/s) error tolerance.
pub fn integrate_trajectory(
    x0: &CartesianState<f64>,
    t_end: f64,
    step: f64,
    tol: f64,
    c: &PhysicalConstants<f64>,
) -> Result<Trajectory> {
    if !(1e-14..=1e-9).contains(&tol) {
        return Err(Error::Domain(format!("oracle tolerance {tol:e} outside [1e-14, 1e-9]")));
    }
    c.validate()?;
    main_problem_acceleration(&x0.position, c)?;
    let grid = uniform_grid(t_end, step)?;
    let t_last = *grid.last().unwrap();

    let mut samples = Vec::with_capacity(grid.len());
    samples.push((0.0, *x0));
    let mut stats = IntegrationStats {
        accepted_steps: 0,
        rejected_steps: 0,
        evaluations: 0,
        tolerance: tol,
        energy_drift: 0.0,
        polar_momentum_drift: 0.0,
    };
    if t_last > 0.0 {
        // the dense output mishandles a grid point that coincides with the
        // end of the run, so the run overshoots the last sample
        let t_stop = t_last + 0.5 * step;
        let mut solver = Dop853::from_param(
            MainProblem { c: *c },
            0.0,
            t_stop,
            step,
            to_vector(x0),
            tol,
            tol,
            0.9,
            0.0,
            0.333,
            6.0,
            t_stop,
            0.0,
            u32::MAX,
            1000,
            OutputType::Dense,
        );
        let s = solver.integrate().map_err(|e| Error::Integration(e.to_string()))?;
        stats.accepted_steps = s.accepted_steps;
        stats.rejected_steps = s.rejected_steps;
        stats.evaluations = s.num_eval;
        // the dense output accumulates its abscissae; snap them to the grid
        // and drop the occasional duplicate end point
        let (ts, ys) = solver.results().get();
        for (t, y) in ts.iter().zip(ys).skip(1) {
            let k = samples.len();
            if k >= grid.len() {
                break;
            }
            if (t - grid[k]).abs() > 1e-6 * step {
                continue;
            }
            samples.push((grid[k], from_vector(y)));
        }
        if samples.len() != grid.len() {
            return Err(Error::Integration(format!(
                "dense output produced {} of {} samples",
                samples.len(),
                grid.len()
            )));
        }
    }

    let e0 = cartesian_energy(x0, c);
    let hz0 = cross(&x0.position, &x0.velocity)[2];
    for (_, x) in &samples {
        let de = ((cartesian_energy(x, c) - e0) / e0).abs();
        stats.energy_drift = stats.energy_drift.max(de);
        if hz0 != 0.0 {
            let dh = ((cross(&x.position, &x.velocity)[2] - hz0) / hz0).abs();
            stats.polar_momentum_drift = stats.polar_momentum_drift.max(dh);
        }
    }
    Ok(Trajectory { samples, stats })
}

/// Position error magnitude (km) of an analytical ephemeris against the
/// numerical truth, sample by sample.
pub fn compare_rss(analytic: &[EphemerisRecord<f64>], truth: &Trajectory) -> Result<Vec<(f64, f64)>> {
    if analytic.len() != truth.samples.len() {
        return Err(Error::GridMismatch(format!(
            "{} analytic samples against {} truth samples",
            analytic.len(),
            truth.samples.len()
        )));
    }
    analytic
        .iter()
        .zip(&truth.samples)
        .map(|(a, (t, x))| {
            if (a.t - t).abs() > 1e-9 * t.abs().max(1.0) {
                return Err(Error::GridMismatch(format!(
                    "analytic t = {} against truth t = {t}",
                    a.t
                )));
            }
            let d = [
                a.state.position[0] - x.position[0],
                a.state.position[1] - x.position[1],
                a.state.position[2] - x.position[2],
            ];
            Ok((*t, norm(&d)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> PhysicalConstants<f64> {
        PhysicalConstants::default()
    }

    #[test]
    fn equatorial_and_polar_symmetry() {
        let c = c();
        let r = 7000.0;
        let a = main_problem_acceleration(&[r, 0.0, 0.0], &c).unwrap();
        let kepler = c.mu / (r * r);
        // at equal radius J2 pulls harder on the equator and less at the poles
        assert!(a[0] < -kepler);
        assert_eq!(a[1], 0.0);
        assert_eq!(a[2], 0.0);
        let a = main_problem_acceleration(&[0.0, 0.0, r], &c).unwrap();
        assert_eq!(a[0], 0.0);
        assert_eq!(a[1], 0.0);
        assert!(a[2] > -kepler && a[2] < 0.0);
        assert!(main_problem_acceleration(&[0.0, 0.0, 0.0], &c).is_err());
    }

    #[test]
    fn acceleration_is_minus_potential_gradient() {
        let c = c();
        let p = [4123.0, -5210.5, 3333.3];
        let a = main_problem_acceleration(&p, &c).unwrap();
        let h = 0.1;
        for i in 0..3 {
            let mut pp = p;
            let mut pm = p;
            pp[i] += h;
            pm[i] -= h;
            // fourth-order central difference
            let mut pp2 = p;
            let mut pm2 = p;
            pp2[i] += 2.0 * h;
            pm2[i] -= 2.0 * h;
            let u = |x: &[f64; 3]| main_problem_potential(x, &c);
            let g = (8.0 * (u(&pp) - u(&pm)) - (u(&pp2) - u(&pm2))) / (12.0 * h);
            assert!((a[i] + g).abs() < 1e-9 * a[i].abs(), "{i}: {} vs {}", a[i], -g);
        }
    }

    #[test]
    fn grid_and_mismatch() {
        assert_eq!(uniform_grid(10.0, 5.0).unwrap(), vec![0.0, 5.0, 10.0]);
        assert_eq!(uniform_grid(0.0, 5.0).unwrap(), vec![0.0]);
        assert!(uniform_grid(1.0, 0.0).is_err());
        let x = CartesianState {
            position: [7000.0, 0.0, 0.0],
            velocity: [0.0, 7.5, 0.0],
        };
        let truth = Trajectory {
            samples: vec![(0.0, x), (60.0, x)],
            stats: IntegrationStats {
                accepted_steps: 0,
                rejected_steps: 0,
                evaluations: 0,
                tolerance: 1e-12,
                energy_drift: 0.0,
                polar_momentum_drift: 0.0,
            },
        };
        let rec = |t| EphemerisRecord { t, state: x };
        assert!(matches!(compare_rss(&[rec(0.0)], &truth), Err(Error::GridMismatch(_))));
        assert!(matches!(
            compare_rss(&[rec(0.0), rec(61.0)], &truth),
            Err(Error::GridMismatch(_))
        ));
        let mut shifted = x;
        shifted.position[0] += 1.0;
        let rss = compare_rss(
            &[
                rec(0.0),
                EphemerisRecord {
                    t: 60.0,
                    state: shifted,
                },
            ],
            &truth,
        )
        .unwrap();
        assert_eq!(rss, vec![(0.0, 0.0), (60.0, 1.0)]);
    }
}
