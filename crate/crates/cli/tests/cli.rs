use std::path::Path;
use std::process::{Command, Output};

const TOPEX: &str = include_str!("../configs/topex.toml");

fn brouwer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brouwer")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn zero_days_gives_the_epoch_row() {
    let o = brouwer(&["propagate", "--days", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("t_s,x_km,y_km,z_km,vx_kms,vy_kms,vz_kms"));
    let r = rows(&text);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][0], 0.0);
}

#[test]
fn keplerian_run_keeps_its_radius_and_energy() {
    let dir = tempfile::tempdir().unwrap();
    let text = TOPEX
        .replace("j2 = 1.082626683e-3", "j2 = 0.0")
        .replace("variant = \"2+:2:2\"", "variant = \"0:1:0\"")
        .replace("e = 0.0001", "e = 0.2");
    let cfg = write_config(dir.path(), &text);
    let o = brouwer(&["propagate", "--config", &cfg, "--days", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mu = 398_600.441_5;
    let a = 7707.270;
    for r in rows(&stdout(&o)) {
        let rad = (r[1] * r[1] + r[2] * r[2] + r[3] * r[3]).sqrt();
        let v2 = r[4] * r[4] + r[5] * r[5] + r[6] * r[6];
        assert!(rad > 0.8 * a - 1e-6 && rad < 1.2 * a + 1e-6);
        assert!((0.5 * v2 - mu / rad + mu / (2.0 * a)).abs() < 1e-10);
    }
}

#[test]
fn output_is_deterministic() {
    let a = brouwer(&["propagate", "--days", "2"]);
    let b = brouwer(&["propagate", "--days", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn compare_reproduces_the_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rss.csv");
    let text = format!("{TOPEX}\n[output]\ncompare = {:?}\n", out.to_str().unwrap());
    let cfg = write_config(dir.path(), &text);
    let o = brouwer(&["compare", "--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("t_days,rss_km{1:2:1},rss_km{1+:2:1},rss_km{2:2:2},rss_km{2+:2:2}")
    );
    let r = rows(&csv);
    assert_eq!(r.len(), 721);
    let end = r.last().unwrap();
    assert_eq!(end[0], 30.0);
    assert!(end[1] > end[2] && end[2] > end[3] && end[3] > end[4], "{end:?}");
    assert!((1.0..=5.0).contains(&end[1]));
    let summary = String::from_utf8_lossy(&o.stderr);
    assert!(summary.starts_with("day 30: {1:2:1}"), "{summary}");
}

#[test]
fn compare_without_oblateness_sees_only_integrator_noise() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &TOPEX.replace("j2 = 1.082626683e-3", "j2 = 0.0"));
    let o = brouwer(&["compare", "--config", &cfg, "--variant", "2+:2:2", "--days", "3"]);
    assert!(o.status.success());
    let worst = rows(&stdout(&o)).iter().map(|r| r[1]).fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst} km");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), &TOPEX.replace("[run]", "[run]\nspeed = 1"));
    assert_eq!(brouwer(&["propagate", "--config", &unknown]).status.code(), Some(2));
    assert_eq!(brouwer(&["propagate", "--variant", "1:4:1"]).status.code(), Some(2));
    assert_eq!(brouwer(&["compare", "--tol", "1e-6"]).status.code(), Some(2));
    assert_eq!(
        brouwer(&["propagate", "--config", "/nonexistent/run.toml"])
            .status
            .code(),
        Some(2)
    );

    let critical = write_config(
        dir.path(),
        &TOPEX.replace("inclination_deg = 66.04", "inclination_deg = 63.4349488"),
    );
    let o = brouwer(&["propagate", "--config", &critical]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("critical inclination"));
}

#[test]
fn verify_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let text = TOPEX.replace("samples = 1000", "samples = 30");
    let cfg = write_config(dir.path(), &text);
    let o = brouwer(&["verify", "--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("identity,tables,samples,worst_rel_error,tolerance,status,suspect"));
    assert!(!text.contains(",FAIL,"));
}

#[test]
fn bench_reports_every_workload() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &TOPEX.replace("states = 100000", "states = 2000"));
    let o = brouwer(&["bench", "--config", &cfg]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["direct-order-1", "direct-order-2", "delta-a/table", "delta-a/bracket"] {
        assert!(text.contains(&format!("{name},2000,")), "{text}");
    }
}
