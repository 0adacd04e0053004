use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use brouwer::elements::delaunay_from_keplerian;
use brouwer::oracle::{compare_rss, integrate_trajectory, Trajectory};
use brouwer::{bench as timing, generate_ephemeris, initialize_theory, verify as checks, Model, TheoryConfig, Variant};

use crate::config::RunConfig;
use crate::error::CliError;

const DAY: f64 = 86_400.0;

// Numbers are written with `{:?}`, the shortest representation that
// parses back to the same f64.

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn theory(cfg: &RunConfig, variant: Variant) -> Result<TheoryConfig<f64>, CliError> {
    Ok(TheoryConfig::new(variant, Model::new(cfg.constants))?)
}

pub fn propagate(cfg: &RunConfig) -> Result<(), CliError> {
    let tc = theory(cfg, cfg.variant)?;
    let osc = delaunay_from_keplerian(&cfg.elements, cfg.constants.mu)?;
    let sc = initialize_theory(&osc, &tc)?;
    let eph = generate_ephemeris(&sc, &cfg.grid(), &tc)?;
    let mut out = String::from("t_s,x_km,y_km,z_km,vx_kms,vy_kms,vz_kms\n");
    for rec in &eph {
        let [x, y, z] = rec.state.position;
        let [vx, vy, vz] = rec.state.velocity;
        let _ = writeln!(out, "{:?},{x:?},{y:?},{z:?},{vx:?},{vy:?},{vz:?}", rec.t);
    }
    emit(cfg.outputs.propagate.as_deref(), &out)
}

fn rss_curve(cfg: &RunConfig, variant: Variant, truth: &Trajectory) -> Result<Vec<(f64, f64)>, CliError> {
    let tc = theory(cfg, variant)?;
    let osc = delaunay_from_keplerian(&cfg.elements, cfg.constants.mu)?;
    let sc = initialize_theory(&osc, &tc)?;
    let times: Vec<f64> = truth.times().collect();
    Ok(compare_rss(&generate_ephemeris(&sc, &times, &tc)?, truth)?)
}

pub fn compare(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.compare.is_empty() {
        return Err(CliError::Config("theory: no variants to compare".into()));
    }
    let x0 = brouwer::elements::cartesian_from_keplerian(&cfg.elements, cfg.constants.mu)?;
    let truth = integrate_trajectory(&x0, cfg.days * DAY, cfg.step_s, cfg.tol, &cfg.constants)?;

    // one thread per variant; the results are collected in list order
    let curves = std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .compare
            .iter()
            .map(|v| s.spawn(|| rss_curve(cfg, *v, &truth)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("comparison thread panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut out = String::from("t_days");
    for v in &cfg.compare {
        let _ = write!(out, ",rss_km{v}");
    }
    out.push('\n');
    for (k, (t, _)) in truth.samples.iter().enumerate() {
        let _ = write!(out, "{:?}", t / DAY);
        for c in &curves {
            let _ = write!(out, ",{:?}", c[k].1);
        }
        out.push('\n');
    }
    emit(cfg.outputs.compare.as_deref(), &out)?;

    let t_end = truth.samples.last().map_or(0.0, |s| s.0) / DAY;
    let summary: Vec<String> = cfg
        .compare
        .iter()
        .zip(&curves)
        .map(|(v, c)| format!("{v} {:?} km", c.last().map_or(0.0, |p| p.1)))
        .collect();
    eprintln!(
        "day {t_end}: {} (oracle energy drift {:e})",
        summary.join(", "),
        truth.stats.energy_drift
    );
    Ok(())
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let report = checks::run(&Model::new(cfg.constants), &cfg.verify);
    emit(cfg.outputs.verify.as_deref(), &report.to_csv())?;
    if report.passed() {
        return Ok(());
    }
    let failed: Vec<&str> = report
        .identities
        .iter()
        .filter(|r| !r.passed && !r.informational)
        .map(|r| r.name.as_str())
        .collect();
    Err(CliError::Verification(failed.join(", ")))
}

pub fn bench(cfg: &RunConfig) -> Result<(), CliError> {
    let report = timing::run(&Model::new(cfg.constants), &cfg.bench)?;
    emit(cfg.outputs.bench.as_deref(), &report.to_csv())
}
