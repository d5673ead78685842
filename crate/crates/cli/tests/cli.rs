//! Process-level tests of the qot binary: output fixtures, exit codes,
//! and rerun determinism.

use std::process::{Command, Output};

use qot_core::cfm::CfmVariant;
use qot_core::gsnr::path_gsnr;
use qot_core::media::{ChannelPlan, FiberSpan, LinkPath, ModulationFormat};
use qot_core::params::CfmParams;
use qot_core::units::dbm_to_watts;

fn qot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

/// Data section of a table: every line except the creation timestamp.
fn data_lines(table: &str) -> Vec<&str> {
    table.lines().filter(|l| !l.starts_with("# created=")).collect()
}

#[test]
fn gsnr_single_span_matches_the_library() {
    let out = qot(&[
        "gsnr",
        "--variant",
        "mct-2",
        "--n-spans",
        "1",
        "--span-length-km",
        "80",
        "--n-busy",
        "9",
        "--power-dbm",
        "1.5",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let got = doc["results"][0]["gsnr_db"].as_f64().expect("gsnr_db");

    let params = CfmParams::shipped();
    let path = LinkPath::homogeneous(FiberSpan::reference(80e3), 1).unwrap();
    let plan =
        ChannelPlan::center_loaded(9, ModulationFormat::Pm16Qam, dbm_to_watts(1.5)).unwrap();
    let want = path_gsnr(CfmVariant::Mct2, &params, &path, &plan).unwrap().gsnr_db();
    assert_eq!(got, want, "CLI and library disagree on the fixture");
}

#[test]
fn unknown_variant_is_a_config_error() {
    let out = qot(&["gsnr", "--variant", "gn-exact"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown variant"));
}

#[test]
fn tolerance_zero_fails_validation() {
    let out = qot(&["validate", "--tolerance", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("validate: FAIL"));
    assert!(text.contains("check ber-thresholds"));
}

#[test]
fn reach_table_reparses_to_the_library_table() {
    let out = qot(&["reach-table", "--variant", "mdct,womdct-2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.trim_end().ends_with("# rows=12"));

    let rows: Vec<&str> =
        text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("variant,")).collect();
    let params = CfmParams::shipped();
    let variants = [CfmVariant::Mdct, CfmVariant::WoMdct2];
    let entries = qot_core::gsnr::reach_table(&params, &variants, 0.0).unwrap();
    assert_eq!(rows.len(), entries.len());
    for (row, entry) in rows.iter().zip(&entries) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], entry.variant.name());
        assert_eq!(fields[1], entry.format.name());
        assert_eq!(fields[2], entry.max_spans.to_string());
        assert_eq!(fields[3], format!("{:.6}", entry.logon_power_dbm));
    }
}

#[test]
fn netsim_rerun_is_byte_identical() {
    let args = [
        "netsim",
        "--topology",
        "itb",
        "--variant",
        "womdct-1",
        "--otl",
        "250",
        "--seed",
        "3",
        "--n-requests",
        "400",
    ];
    let first = qot(&args);
    let second = qot(&args);
    assert!(first.status.success() && second.status.success());
    assert_eq!(data_lines(&stdout(&first)), data_lines(&stdout(&second)));
}

#[test]
fn link_study_honors_a_config_file() {
    let dir = std::env::temp_dir().join("qot-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("study.json");
    std::fs::write(
        &config,
        r#"{"variant":"womdct-1","seed":11,"n_high_mfl":2,"n_qpsk":1,"n_bpsk":0,
           "max_busy":10,"initial_spans":8,"max_subdivisions":1024}"#,
    )
    .unwrap();
    let out = qot(&["link-study", "--config", config.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# seed=11"));
    assert!(text.contains("highMFL,WoMDCT-1,2,"));
    assert!(text.contains("QPSK,WoMDCT-1,1,"));
    assert!(text.trim_end().ends_with("# rows=2"));
}
