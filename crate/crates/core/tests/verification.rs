use std::sync::Arc;

use brouwer::tables::{CoefficientTables, EntryId};
use brouwer::verify::{self, VerifyConfig};
use brouwer::{Model, PhysicalConstants};

fn small(seed: u64) -> VerifyConfig {
    VerifyConfig {
        seed,
        samples: 60,
        averaged_samples: 12,
        nodes: 96,
    }
}

fn entry(table: &str, index: &[i32]) -> EntryId {
    EntryId {
        table: table.into(),
        index: index.to_vec(),
    }
}

#[test]
fn other_seeds_pass_too() {
    let model = Model::new(PhysicalConstants::default());
    for seed in [2, 7, 1234] {
        let report = verify::run(&model, &small(seed));
        assert!(report.passed(), "seed {seed}\n{}", report.to_csv());
    }
}

#[test]
fn perturbed_entries_are_named() {
    let cases = [
        ("htilde02-prime/B", entry("B", &[1, 3, 0])),
        ("V2/beta3", entry("beta3", &[1, 4, 2])),
        ("delta-a-first/A15", entry("A15", &[1, 2])),
        ("delta-a-second-inverse/A5", entry("A5", &[1, 1, 5])),
    ];
    for (identity, id) in cases {
        let tables = CoefficientTables::shipped().with_scaled_entry(&id, 1.001).unwrap();
        let model = Model::new(PhysicalConstants::default()).with_tables(Arc::new(tables));
        let report = verify::run(&model, &small(1));
        assert!(!report.passed());
        let r = report.get(identity).unwrap();
        assert!(!r.passed, "{identity} missed the fault in {id}");
        let suspect = r.suspect.as_ref().unwrap_or_else(|| panic!("{identity}: no suspect"));
        assert_eq!(suspect.entry, id);
        assert!((suspect.implied_error - 1e-3).abs() < 2e-5, "{}", suspect.implied_error);
        assert!(report.to_csv().contains(&id.to_string()));
    }
}

#[test]
fn csv_report_has_one_row_per_identity() {
    let model = Model::new(PhysicalConstants::default());
    let report = verify::run(&model, &small(4));
    let csv = report.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(verify::VerificationReport::CSV_HEADER));
    assert_eq!(lines.count(), report.identities.len());
    assert!(
        csv.contains(",info,"),
        "the opposite H11 sign must show up as informational"
    );
}
