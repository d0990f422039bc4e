// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_4;
use std::path::Path;
use std::process::Command as Proc;

use proptest::prelude::*;
use qcnn::bench::csvio::{cell, resource_rows};
use qcnn::bench::{
    centered_sop_bounds, exit_code, m_min_from_expectation, read_table, read_table_file, resource_count, sample_complexity, write_table,
    CsvSchema, RunConfig, SampleComplexityQuery, M_MIN_CAP,
};
use qcnn::Error;

fn m(p: f64, p0: f64) -> f64 {
    sample_complexity(&SampleComplexityQuery { p, p0 }).unwrap()
}

#[test]
fn certain_outcome_against_a_fair_coin() {
    // asin(1) − asin(√½) = π/4
    let want = 1.96f64.powi(2) / FRAC_PI_4.powi(2);
    assert!((m(1.0, 0.5) - want).abs() < 1e-12);
    assert!((m_min_from_expectation(1.0) - want).abs() < 1e-12);
    assert!((m(0.0, 0.5) - want).abs() < 1e-12);
}

#[test]
fn degenerate_queries() {
    assert!(sample_complexity(&SampleComplexityQuery::new(0.5)).is_err());
    assert!(sample_complexity(&SampleComplexityQuery::new(1.2)).is_err());
    assert!(sample_complexity(&SampleComplexityQuery { p: 0.3, p0: -0.1 }).is_err());
    assert_eq!(m(0.5 + 1e-12, 0.5), f64::INFINITY);
    assert_eq!(m_min_from_expectation(0.0), f64::INFINITY);
    assert_eq!(cell(f64::INFINITY), "∞");
    assert_eq!(cell(f64::NAN), "");
}

proptest! {
    #[test]
    fn reflection_symmetry(p in 0.0..1.0f64, p0 in 0.01..0.99f64) {
        prop_assume!((p - p0).abs() > 1e-3);
        let a = m(p, p0);
        let b = m(1.0 - p, 1.0 - p0);
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
    }

    #[test]
    fn farther_from_threshold_needs_fewer_copies(a in 0.001..0.5f64, b in 0.001..0.5f64) {
        prop_assume!((a - b).abs() > 1e-6);
        let (near, far) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(m(0.5 + far, 0.5) < m(0.5 + near, 0.5));
        prop_assert!(m(0.5 - far, 0.5) < m(0.5 - near, 0.5));
    }

    #[test]
    fn capped_values_are_infinite(p in 0.0..1.0f64) {
        prop_assume!(p != 0.5);
        let v = m(p, 0.5);
        prop_assert!(v.is_infinite() || (v > 0.0 && v <= M_MIN_CAP));
    }
}

#[test]
fn resources_closed_form_and_breakdown() {
    for n in [9, 27, 81, 99, 243] {
        assert_eq!(resource_count(n, 1).unwrap().multi_qubit_ops, n as f64);
        for d in 1..=4 {
            let r = resource_count(n, d).unwrap();
            let closed = 3.5 * n as f64 * (1.0 - 3f64.powi(1 - d as i32)) + n as f64 * 3f64.powi(1 - d as i32);
            assert!((r.multi_qubit_ops - closed).abs() < 1e-9);
            assert!((r.breakdown_total() - closed).abs() < 1e-9);
            assert_eq!(r.layers.len(), d - 1);
            assert_eq!(r.single_qubit_depth, 4 * d);
        }
    }
    // 81 qubits, 3 layers: 7·27 + 7·9 in the units, then 9 on the last register
    assert_eq!(resource_count(81, 3).unwrap().multi_qubit_ops, 189.0 + 63.0 + 9.0);
    assert!(resource_count(0, 1).is_err());
    assert!(resource_count(9, 0).is_err());
}

#[test]
fn centered_strings() {
    assert_eq!(centered_sop_bounds(15, 7).unwrap(), (4, 10));
    assert_eq!(centered_sop_bounds(15, 8).unwrap(), (4, 10));
    assert_eq!(centered_sop_bounds(18, 9).unwrap(), (4, 12));
    assert!(centered_sop_bounds(5, 7).is_err());
    assert!(centered_sop_bounds(9, 2).is_err());
}

#[test]
fn config_round_trip_and_hash() {
    let c = RunConfig::from_toml("seed = 3\n[circuit]\nqubits = 9\n[qec]\np_x = 0.01\n").unwrap();
    assert_eq!(c.seed, 3);
    assert_eq!(c.circuit.qubits, 9);
    let back = RunConfig::from_toml(&c.to_toml()).unwrap();
    assert_eq!(back, c);
    assert_eq!(back.hash(), c.hash());
    assert_ne!(RunConfig::default().hash(), c.hash());
    assert!(c.metadata().is_consistent());

    assert!(matches!(RunConfig::from_toml("sed = 3"), Err(Error::Config(_))));
    assert!(RunConfig::from_toml("[circuit]\nqbits = 9").is_err());
    assert!(RunConfig::from_toml("cap_qubits = 0").is_err());
    assert!(RunConfig::from_toml("[qec]\np_x = 2.0").is_err());
}

#[test]
fn csv_tables_round_trip_and_reject_bad_input() {
    let cfg = RunConfig::default();
    let meta = cfg.metadata();
    let schema = CsvSchema::resources();
    let rows = resource_rows(&resource_count(81, 3).unwrap());
    let mut buf = Vec::new();
    write_table(&mut buf, Some(&meta), &schema, &rows).unwrap();
    let t = read_table(buf.as_slice(), &schema).unwrap();
    assert_eq!(t.rows, rows);
    assert_eq!(t.meta.unwrap(), meta);

    let text = String::from_utf8(buf).unwrap();
    // the config's own seed comes after the top-level copy
    let at = text.rfind("\"seed\":0").unwrap();
    let tampered = format!("{}\"seed\":1{}", &text[..at], &text[at + 8..]);
    assert_ne!(tampered, text);
    assert!(read_table(tampered.as_bytes(), &schema).is_err());
    assert!(read_table(text.as_bytes(), &CsvSchema::sweep()).is_err());

    let sweep = CsvSchema::sweep();
    assert!(write_table(Vec::new(), None, &sweep, &[vec!["0".into(), "0".into(), "x".into(), "".into()]]).is_err());
    assert!(write_table(Vec::new(), None, &sweep, &[vec!["0".into()]]).is_err());
    let mut ok = Vec::new();
    write_table(&mut ok, None, &sweep, &[vec!["0".into(), "0".into(), "".into(), "ground state failed".into()]]).unwrap();
    assert_eq!(read_table(ok.as_slice(), &sweep).unwrap().rows.len(), 1);
}

#[test]
fn exit_codes_by_error_kind() {
    assert_eq!(exit_code(&Error::Criterion("x".into())), 2);
    assert_eq!(exit_code(&Error::NotUnitary(1.0)), 3);
    assert_eq!(exit_code(&Error::Divergence("x".into())), 3);
    assert_eq!(exit_code(&Error::InvalidArgument("x".into())), 1);
    assert_eq!(exit_code(&Error::Config("x".into())), 1);
}

fn qcnn(out: &Path, args: &[&str]) -> (i32, String) {
    let o = Proc::new(env!("CARGO_BIN_EXE_qcnn"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("QCNN_OUT")
        .output()
        .unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stderr).into_owned())
}

#[test]
fn command_line_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();

    assert_eq!(qcnn(out, &["resource-count", "--qubits", "81", "--depth", "3"]).0, 0);
    let t = read_table_file(&out.join("resources.csv"), &CsvSchema::resources()).unwrap();
    assert_eq!(t.meta.unwrap().command.as_deref(), Some("resource-count"));
    assert!(t.rows.iter().any(|r| r[0] == "closed_form" && r[4] == "261"));

    assert_eq!(qcnn(out, &["sample-complexity", "--p", "1"]).0, 0);
    let t = read_table_file(&out.join("sample_complexity.csv"), &CsvSchema::sample_complexity()).unwrap();
    let v: f64 = t.rows[0][2].parse().unwrap();
    assert!((v - 1.96f64.powi(2) / FRAC_PI_4.powi(2)).abs() < 1e-9);

    assert_eq!(qcnn(out, &["sample-complexity", "--p", "0.5"]).0, 1);
    assert_eq!(qcnn(out, &["no-such-command"]).0, 1);
    assert_eq!(qcnn(out, &["resource-count", "--bogus"]).0, 1);
    assert_eq!(qcnn(out, &["phase-sweep", "--cap-qubits", "5"]).0, 1);

    let cfg = out.join("bad.toml");
    std::fs::write(&cfg, "[circuit]\nqbits = 9\n").unwrap();
    assert_eq!(qcnn(out, &["resource-count", "--config", cfg.to_str().unwrap()]).0, 1);

    let (code, err) = qcnn(out, &["verify", "--only", "resource"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("verify.json")).unwrap()).unwrap();
    assert!(v.to_string().contains("resource count breakdown"));
}
