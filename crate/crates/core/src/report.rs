//! Output tables and run manifests.
//!
//! Every table a command emits starts with a manifest block (tool version,
//! constants digest, RNG identity, seed, config echo) as `# key=value`
//! comment lines, then a CSV header, the data rows, and a `# rows=N`
//! trailer. The creation timestamp is the only line excluded from the data
//! digest, so reruns of the same configuration are byte-checkable.

use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::cfm::CfmVariant;
use crate::gsnr::ReachEntry;
use crate::net::{GridPoint, SimMetrics};
use crate::params::CfmParams;
use crate::rng::RNG_ALGORITHM;
use crate::study::StudyReport;

/// Provenance block written at the top of every output table.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub rng: String,
    pub seed: u64,
    pub constants_digest: String,
    pub config: String,
    pub created_unix: u64,
}

impl RunManifest {
    pub fn new(params: &CfmParams, seed: u64, config: &str) -> Self {
        let created_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunManifest {
            tool: "qot".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            rng: RNG_ALGORITHM.to_string(),
            seed,
            constants_digest: params.sha256_hex(),
            config: config.to_string(),
            created_unix,
        }
    }

    fn header_lines(&self) -> Vec<String> {
        vec![
            format!("# tool={} {}", self.tool, self.version),
            format!("# rng={}", self.rng),
            format!("# seed={}", self.seed),
            format!("# constants=sha256:{}", self.constants_digest),
            format!("# config={}", self.config),
            format!("# created=unix:{}", self.created_unix),
        ]
    }
}

/// Canonical fixed-point float formatting used in all tables.
pub fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

/// Render a complete table: manifest, header, rows, `# rows=N` trailer.
pub fn write_table(manifest: &RunManifest, columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for line in manifest.header_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), columns.len(), "row arity mismatch");
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out.push_str(&format!("# rows={}\n", rows.len()));
    out
}

/// SHA-256 over every line except the creation timestamp, for byte-identity
/// checks across reruns.
pub fn data_digest(table: &str) -> String {
    let mut hasher = Sha256::new();
    for line in table.lines() {
        if line.starts_with("# created=") {
            continue;
        }
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for b in digest {
        hex.push_str(&format!("{b:02x}"));
    }
    hex
}

/// Column set and rows of a study report.
pub fn study_table(report: &StudyReport) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let columns = vec![
        "sample_id",
        "class",
        "variant",
        "mfl",
        "n_spans",
        "loading_pct",
        "gsnr_oracle_db",
        "gsnr_cfm_db",
        "delta_db",
    ];
    let rows = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.sample_id.to_string(),
                r.class.name().to_string(),
                r.variant.name().to_string(),
                r.mfl.to_string(),
                r.n_spans.to_string(),
                fmt6(r.loading_pct),
                fmt6(r.gsnr_oracle_db),
                fmt6(r.gsnr_cfm_db),
                fmt6(r.delta_db),
            ]
        })
        .collect();
    (columns, rows)
}

/// Column set and rows of the per-class study statistics.
pub fn study_stats_table(report: &StudyReport) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let columns = vec!["class", "variant", "n", "rmse_db", "mae_db", "std_db"];
    let rows = report
        .stats
        .iter()
        .map(|(class, variant, s)| {
            vec![
                class.name().to_string(),
                variant.name().to_string(),
                s.n.to_string(),
                fmt6(s.rmse_db),
                fmt6(s.mae_db),
                fmt6(s.std_db),
            ]
        })
        .collect();
    (columns, rows)
}

/// Column set and rows of a simulation campaign.
pub fn netsim_table(
    points: &[GridPoint],
    metrics: &[SimMetrics],
) -> (Vec<&'static str>, Vec<Vec<String>>) {
    assert_eq!(points.len(), metrics.len(), "one metrics row per grid point");
    let columns = vec![
        "otl",
        "variant",
        "seed",
        "bbp",
        "mean_gsnr_db",
        "mfl_1",
        "mfl_2",
        "mfl_3",
        "mfl_4",
        "mfl_5",
        "mfl_6",
    ];
    let rows = points
        .iter()
        .zip(metrics)
        .map(|(p, m)| {
            let mut row = vec![
                fmt6(p.otl_erlang),
                p.variant.name().to_string(),
                p.seed.to_string(),
                fmt6(m.bbp),
                fmt6(m.mean_arrival_gsnr_db),
            ];
            row.extend(m.mfl_usage.iter().map(|u| u.to_string()));
            row
        })
        .collect();
    (columns, rows)
}

/// Column set and rows of a reach table.
pub fn reach_table_rows(entries: &[ReachEntry]) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let columns = vec!["variant", "format", "max_spans", "logon_power_dbm"];
    let rows = entries
        .iter()
        .map(|e| {
            vec![
                e.variant.name().to_string(),
                e.format.name().to_string(),
                e.max_spans.to_string(),
                fmt6(e.logon_power_dbm),
            ]
        })
        .collect();
    (columns, rows)
}

/// Variant list rendered for config echo lines.
pub fn variant_list(variants: &[CfmVariant]) -> String {
    variants
        .iter()
        .map(|v| v.name())
        .collect::<Vec<_>>()
        .join("+")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest() -> RunManifest {
        RunManifest::new(&CfmParams::shipped(), 42, "unit-test")
    }

    #[test]
    fn table_shape_and_trailer() {
        let m = manifest();
        let rows = vec![
            vec!["1".to_string(), "2.5".to_string()],
            vec!["2".to_string(), "3.5".to_string()],
        ];
        let text = write_table(&m, &["a", "b"], &rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# tool=qot {}", env!("CARGO_PKG_VERSION")));
        assert!(lines[1].starts_with("# rng="));
        assert_eq!(lines[2], "# seed=42");
        assert!(lines[3].starts_with("# constants=sha256:"));
        assert_eq!(lines[3].len(), "# constants=sha256:".len() + 64);
        assert_eq!(lines[4], "# config=unit-test");
        assert!(lines[5].starts_with("# created=unix:"));
        assert_eq!(lines[6], "a,b");
        assert_eq!(lines[7], "1,2.5");
        assert_eq!(lines[8], "2,3.5");
        assert_eq!(lines[9], "# rows=2");
        assert_eq!(lines.len(), 10);
    }

    #[test]
    fn digest_ignores_timestamp_only() {
        let rows = vec![vec!["1".to_string()]];
        let mut a = manifest();
        let mut b = manifest();
        a.created_unix = 1000;
        b.created_unix = 2000;
        let ta = write_table(&a, &["x"], &rows);
        let tb = write_table(&b, &["x"], &rows);
        assert_ne!(ta, tb);
        assert_eq!(data_digest(&ta), data_digest(&tb));

        let tc = write_table(&a, &["x"], &[vec!["2".to_string()]]);
        assert_ne!(data_digest(&ta), data_digest(&tc));

        let mut d = manifest();
        d.created_unix = 1000;
        d.seed = 43;
        let td = write_table(&d, &["x"], &rows);
        assert_ne!(data_digest(&ta), data_digest(&td));
    }

    #[test]
    fn float_formatting_is_fixed_point() {
        assert_eq!(fmt6(1.0), "1.000000");
        assert_eq!(fmt6(-0.123456789), "-0.123457");
        assert_eq!(fmt6(22.5), "22.500000");
    }

    #[test]
    fn variant_list_joins_names() {
        assert_eq!(
            variant_list(&[CfmVariant::WoMdct1, CfmVariant::Mdct]),
            "WoMDCT-1+MDCT"
        );
    }
}
