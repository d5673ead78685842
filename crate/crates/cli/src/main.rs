//! Command-line front end for the QoT workbench.
//!
//! Subcommands: `gsnr` (lightpath GSNR as JSON), `reach-table` (transparent
//! reach CSV), `link-study` (closed form vs oracle deviation study),
//! `netsim` (dynamic network simulation campaign), and `validate`
//! (self-checks with per-check margins).
//!
//! Every command is a pure function of its configuration, the constants
//! file, and the seed: reruns produce byte-identical data sections. Exit
//! codes: 0 ok, 1 configuration error, 2 validation failure, 3 oracle
//! non-convergence.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use qot_core::cfm::{path_nli, span_nli, CfmVariant};
use qot_core::error::QotError;
use qot_core::gsnr::{
    ber_threshold_gsnr_db, logon_power_w, path_gsnr, path_gsnr_ase_only, reach_table, GsnrReport,
    ReachEntry, FEC_BER_LIMIT, LOGON_REFERENCE_SPANS,
};
use qot_core::media::{
    ChannelPlan, FiberSpan, LinkPath, ModulationFormat, REFERENCE_SPAN_LENGTH_M,
};
use qot_core::net::{
    design_power_w, run_grid, GridPoint, MflPolicy, Topology, DEFAULT_K_PATHS,
};
use qot_core::oracle::{span_nli_quadrature, QuadratureSpec};
use qot_core::params::CfmParams;
use qot_core::report::{
    data_digest, netsim_table, reach_table_rows, study_stats_table, study_table, write_table,
    RunManifest,
};
use qot_core::study::{run_study, StudyConfig};
use qot_core::units::{dbm_to_watts, linear_to_db, watts_to_dbm};

#[derive(Parser)]
#[command(
    name = "qot",
    version,
    about = "Closed-form QoT models, a quadrature oracle, and network experiments"
)]
struct Cli {
    /// Model constants file (JSON); the shipped set when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    constants: Option<PathBuf>,

    /// Directory for output files; stdout only when omitted.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    /// Worker threads for parallel commands; all cores when omitted.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// GSNR of a lightpath under one or more model variants (JSON).
    Gsnr(GsnrArgs),
    /// Transparent reach of every format at the LOGON design power (CSV).
    ReachTable(ReachArgs),
    /// Random-link deviation study of the closed forms against the oracle.
    LinkStudy(StudyArgs),
    /// Dynamic request simulation over an offered-load grid (CSV).
    Netsim(NetsimArgs),
    /// Run the self-check suite and print per-check margins.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct GsnrArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Variant name ("womdct-1", "mct-2", "mdct", ...), a comma list, or "all".
    #[arg(long)]
    variant: Option<String>,

    /// Comma list of span lengths in km; overrides the homogeneous settings.
    #[arg(long, value_name = "KM,KM,...", value_delimiter = ',')]
    span_lengths_km: Option<Vec<f64>>,

    /// Number of identical spans.
    #[arg(long, value_name = "N")]
    n_spans: Option<usize>,

    /// Length of each identical span in km.
    #[arg(long, value_name = "KM")]
    span_length_km: Option<f64>,

    /// Modulation format, e.g. "16qam" or "PM-16QAM".
    #[arg(long)]
    format: Option<String>,

    /// Busy channels, packed outward from the central slot (1..=60).
    #[arg(long, value_name = "N")]
    n_busy: Option<usize>,

    /// Per-channel launch power in dBm; the LOGON optimum when omitted.
    #[arg(long, value_name = "DBM")]
    power_dbm: Option<f64>,

    /// "on" or "off"; off reports the ASE-only limit (power defaults to 0 dBm).
    #[arg(long, value_name = "ON|OFF")]
    nli: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct GsnrConfig {
    variant: String,
    span_lengths_km: Vec<f64>,
    n_spans: usize,
    span_length_km: f64,
    format: String,
    n_busy: usize,
    power_dbm: Option<f64>,
    nli: String,
}

impl Default for GsnrConfig {
    fn default() -> Self {
        GsnrConfig {
            variant: "all".into(),
            span_lengths_km: Vec::new(),
            n_spans: LOGON_REFERENCE_SPANS,
            span_length_km: REFERENCE_SPAN_LENGTH_M / 1e3,
            format: ModulationFormat::Pm16Qam.name().into(),
            n_busy: 60,
            power_dbm: None,
            nli: "on".into(),
        }
    }
}

#[derive(Args)]
struct ReachArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Variant name, a comma list, or "all".
    #[arg(long)]
    variant: Option<String>,

    /// Additive amplifier noise-figure offset in dB.
    #[arg(long, value_name = "DB")]
    nf_offset_db: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ReachConfig {
    variant: String,
    nf_offset_db: f64,
}

impl Default for ReachConfig {
    fn default() -> Self {
        ReachConfig { variant: "all".into(), nf_offset_db: 0.0 }
    }
}

#[derive(Args)]
struct StudyArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Variant name, a comma list, or "all".
    #[arg(long)]
    variant: Option<String>,

    /// Base seed of the sample streams.
    #[arg(long)]
    seed: Option<u64>,

    /// Samples drawn with format levels 3..6.
    #[arg(long, value_name = "N")]
    n_high_mfl: Option<usize>,

    /// Samples pinned to PM-QPSK.
    #[arg(long, value_name = "N")]
    n_qpsk: Option<usize>,

    /// Samples pinned to PM-BPSK.
    #[arg(long, value_name = "N")]
    n_bpsk: Option<usize>,

    /// Upper cap on busy channels per sample (60 disables the cap).
    #[arg(long, value_name = "N")]
    max_busy: Option<usize>,

    /// Spans drawn before threshold refinement.
    #[arg(long, value_name = "N")]
    initial_spans: Option<usize>,

    /// Oracle relative tolerance.
    #[arg(long, value_name = "REL")]
    rel_tolerance: Option<f64>,

    /// Oracle subdivision budget per 1-D integral.
    #[arg(long, value_name = "N")]
    max_subdivisions: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct StudyFileConfig {
    variant: String,
    seed: u64,
    n_high_mfl: usize,
    n_qpsk: usize,
    n_bpsk: usize,
    max_busy: usize,
    initial_spans: usize,
    rel_tolerance: f64,
    max_subdivisions: u32,
    island_padding_hz: f64,
}

impl Default for StudyFileConfig {
    fn default() -> Self {
        let d = StudyConfig::default();
        StudyFileConfig {
            variant: "all".into(),
            seed: d.seed,
            n_high_mfl: d.n_high_mfl,
            n_qpsk: d.n_qpsk,
            n_bpsk: d.n_bpsk,
            max_busy: d.max_busy,
            initial_spans: d.initial_spans,
            rel_tolerance: d.quad.rel_tolerance,
            max_subdivisions: d.quad.max_subdivisions,
            island_padding_hz: d.quad.island_padding_hz,
        }
    }
}

#[derive(Args)]
struct NetsimArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Bundled topology name ("itb", "usb") or a topology JSON path.
    #[arg(long, value_name = "NAME|FILE")]
    topology: Option<String>,

    /// Variant name, a comma list, or "all".
    #[arg(long)]
    variant: Option<String>,

    /// Comma list of offered traffic loads in Erlang.
    #[arg(long, value_name = "E,E,...", value_delimiter = ',')]
    otl: Option<Vec<f64>>,

    /// Comma list of seeds; each (otl, variant, seed) cell runs once.
    #[arg(long, value_name = "S,S,...", value_delimiter = ',')]
    seed: Option<Vec<u64>>,

    /// Requests per simulation cell.
    #[arg(long, value_name = "N")]
    n_requests: Option<usize>,

    /// Candidate shortest paths per request.
    #[arg(long, value_name = "K")]
    k_paths: Option<usize>,

    /// Feasibility policy: "worst-case" or "current-load".
    #[arg(long, value_name = "POLICY")]
    policy: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct NetsimConfig {
    topology: String,
    variant: String,
    otls: Vec<f64>,
    seeds: Vec<u64>,
    n_requests: usize,
    k_paths: usize,
    policy: String,
}

impl Default for NetsimConfig {
    fn default() -> Self {
        NetsimConfig {
            topology: "itb".into(),
            variant: "all".into(),
            otls: vec![200.0, 400.0, 600.0],
            seeds: vec![1],
            n_requests: 10_000,
            k_paths: DEFAULT_K_PATHS,
            policy: "worst-case".into(),
        }
    }
}

#[derive(Args)]
struct ValidateArgs {
    /// Override the allowance of every tolerance-governed check.
    #[arg(long, value_name = "X")]
    tolerance: Option<f64>,
}

/// Failure carrying the process exit code.
enum Failure {
    /// Bad flags, unreadable files, malformed configs, invalid inputs.
    Config(String),
    /// A self-check or output invariant did not hold.
    Validation(String),
    /// An error raised by the core library.
    Core(QotError),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Core(QotError::OracleNonConvergence(_)) => 3,
            Failure::Core(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Config(m) | Failure::Validation(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

impl From<QotError> for Failure {
    fn from(e: QotError) -> Self {
        Failure::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qot: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let params = match &cli.constants {
        Some(path) => CfmParams::from_file(path)
            .map_err(|e| Failure::Config(format!("constants file {}: {e}", path.display())))?,
        None => CfmParams::shipped(),
    };
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        return Err(Failure::Config("--threads must be at least 1".into()));
    }
    let out_dir = cli.out_dir.as_deref();
    match cli.command {
        Command::Gsnr(args) => cmd_gsnr(&params, out_dir, args),
        Command::ReachTable(args) => cmd_reach_table(&params, out_dir, args),
        Command::LinkStudy(args) => cmd_link_study(&params, out_dir, threads, args),
        Command::Netsim(args) => cmd_netsim(&params, out_dir, threads, args),
        Command::Validate(args) => cmd_validate(&params, args),
    }
}

/// Load a JSON config file, or the default when no path is given.
fn load_config<T>(path: Option<&Path>) -> Result<T, Failure>
where
    T: Default + for<'de> Deserialize<'de>,
{
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Config(format!("cannot parse {}: {e}", p.display())))
        }
    }
}

/// "all", one variant name, or a comma list of names.
fn parse_variants(spec: &str) -> Result<Vec<CfmVariant>, Failure> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(CfmVariant::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in spec.split(',') {
        let v = CfmVariant::from_name(part.trim()).map_err(|e| Failure::Config(e.to_string()))?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(Failure::Config("no variants requested".into()));
    }
    Ok(out)
}

/// Accepts both "PM-16QAM" and the bare "16qam" shorthand.
fn parse_format(name: &str) -> Result<ModulationFormat, Failure> {
    ModulationFormat::from_name(name)
        .or_else(|_| ModulationFormat::from_name(&format!("PM-{name}")))
        .map_err(|e| Failure::Config(e.to_string()))
}

fn parse_policy(name: &str) -> Result<MflPolicy, Failure> {
    let squash: String = name
        .chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase();
    match squash.as_str() {
        "worstcase" | "worstcasefullload" | "fullload" => Ok(MflPolicy::WorstCaseFullLoad),
        "currentload" | "current" => Ok(MflPolicy::CurrentLoad),
        _ => Err(Failure::Config(format!(
            "unknown policy '{name}' (expected worst-case or current-load)"
        ))),
    }
}

/// Write `text` to `<dir>/<file>` and note the path on stderr.
fn write_output(dir: &Path, file: &str, text: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir)
        .map_err(|e| Failure::Config(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(file);
    fs::write(&path, text)
        .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn manifest_json(m: &RunManifest) -> serde_json::Value {
    json!({
        "tool": m.tool,
        "version": m.version,
        "rng": m.rng,
        "seed": m.seed,
        "constants": format!("sha256:{}", m.constants_digest),
        "config": m.config,
        "created_unix": m.created_unix,
    })
}

fn cmd_gsnr(params: &CfmParams, out_dir: Option<&Path>, args: GsnrArgs) -> Result<(), Failure> {
    let mut cfg: GsnrConfig = load_config(args.config.as_deref())?;
    if let Some(v) = args.variant {
        cfg.variant = v;
    }
    if let Some(v) = args.span_lengths_km {
        cfg.span_lengths_km = v;
    }
    if let Some(v) = args.n_spans {
        cfg.n_spans = v;
    }
    if let Some(v) = args.span_length_km {
        cfg.span_length_km = v;
    }
    if let Some(v) = args.format {
        cfg.format = v;
    }
    if let Some(v) = args.n_busy {
        cfg.n_busy = v;
    }
    if let Some(v) = args.power_dbm {
        cfg.power_dbm = Some(v);
    }
    if let Some(v) = args.nli {
        cfg.nli = v;
    }

    let variants = parse_variants(&cfg.variant)?;
    let format = parse_format(&cfg.format)?;
    let nli_on = match cfg.nli.trim().to_ascii_lowercase().as_str() {
        "on" => true,
        "off" => false,
        other => {
            return Err(Failure::Config(format!("--nli expects on or off, got '{other}'")));
        }
    };
    let lengths_km: Vec<f64> = if cfg.span_lengths_km.is_empty() {
        vec![cfg.span_length_km; cfg.n_spans]
    } else {
        cfg.span_lengths_km.clone()
    };
    if lengths_km.is_empty() {
        return Err(Failure::Config("the path needs at least one span".into()));
    }
    let spans: Vec<FiberSpan> = lengths_km.iter().map(|&km| FiberSpan::reference(km * 1e3)).collect();
    let path = LinkPath::new(vec![spans]).map_err(Failure::Core)?;

    let mut results = Vec::new();
    for &variant in &variants {
        let (power_w, report): (f64, GsnrReport) = if nli_on {
            let power_w = match cfg.power_dbm {
                Some(dbm) => dbm_to_watts(dbm),
                None => {
                    let probe = ChannelPlan::center_loaded(cfg.n_busy, format, 1e-3)?;
                    logon_power_w(variant, params, &path, &probe)?
                }
            };
            let plan = ChannelPlan::center_loaded(cfg.n_busy, format, power_w)?;
            (power_w, path_gsnr(variant, params, &path, &plan)?)
        } else {
            let power_w = dbm_to_watts(cfg.power_dbm.unwrap_or(0.0));
            let plan = ChannelPlan::center_loaded(cfg.n_busy, format, power_w)?;
            (power_w, path_gsnr_ase_only(&path, &plan)?)
        };
        results.push(json!({
            "variant": variant.name(),
            "format": format.name(),
            "n_spans": lengths_km.len(),
            "n_busy": cfg.n_busy,
            "nli": if nli_on { "on" } else { "off" },
            "launch_power_dbm": watts_to_dbm(power_w),
            "gsnr_db": report.gsnr_db(),
            "report": report,
        }));
    }

    let config_echo = serde_json::to_string(&cfg).map_err(QotError::from)?;
    let manifest = RunManifest::new(params, 0, &config_echo);
    let doc = json!({ "manifest": manifest_json(&manifest), "results": results });
    let text = format!("{}\n", serde_json::to_string_pretty(&doc).map_err(QotError::from)?);
    print!("{text}");
    if let Some(dir) = out_dir {
        write_output(dir, "gsnr.json", &text)?;
    }
    Ok(())
}

/// Reach entries must respect the model ordering before anything is written:
/// within a variant the reach shrinks strictly as the format level grows, and
/// for a fixed format the reach never shrinks along the chain
/// WoMDCT-2, WoMDCT-1, MCT-2, MCT-1, MDCT.
fn check_reach_ordering(entries: &[ReachEntry]) -> Result<(), Failure> {
    let chain = [
        CfmVariant::WoMdct2,
        CfmVariant::WoMdct1,
        CfmVariant::Mct2,
        CfmVariant::Mct1,
        CfmVariant::Mdct,
    ];
    for variant in CfmVariant::ALL {
        let mut per_variant: Vec<&ReachEntry> =
            entries.iter().filter(|e| e.variant == variant).collect();
        per_variant.sort_by_key(|e| e.format.level());
        for pair in per_variant.windows(2) {
            if pair[1].max_spans >= pair[0].max_spans {
                return Err(Failure::Validation(format!(
                    "reach ordering violated: {} {} reaches {} spans but {} reaches {}",
                    variant.name(),
                    pair[1].format.name(),
                    pair[1].max_spans,
                    pair[0].format.name(),
                    pair[0].max_spans,
                )));
            }
        }
    }
    for format in ModulationFormat::ALL {
        let reaches: Vec<(CfmVariant, usize)> = chain
            .iter()
            .filter_map(|&v| {
                entries
                    .iter()
                    .find(|e| e.variant == v && e.format == format)
                    .map(|e| (v, e.max_spans))
            })
            .collect();
        for pair in reaches.windows(2) {
            if pair[1].1 < pair[0].1 {
                return Err(Failure::Validation(format!(
                    "reach ordering violated: {} under {} ({} spans) falls below {} ({} spans)",
                    format.name(),
                    pair[1].0.name(),
                    pair[1].1,
                    pair[0].0.name(),
                    pair[0].1,
                )));
            }
        }
    }
    Ok(())
}

fn cmd_reach_table(
    params: &CfmParams,
    out_dir: Option<&Path>,
    args: ReachArgs,
) -> Result<(), Failure> {
    let mut cfg: ReachConfig = load_config(args.config.as_deref())?;
    if let Some(v) = args.variant {
        cfg.variant = v;
    }
    if let Some(v) = args.nf_offset_db {
        cfg.nf_offset_db = v;
    }
    let variants = parse_variants(&cfg.variant)?;
    let entries = reach_table(params, &variants, cfg.nf_offset_db)?;
    check_reach_ordering(&entries)?;

    let config_echo = serde_json::to_string(&cfg).map_err(QotError::from)?;
    let manifest = RunManifest::new(params, 0, &config_echo);
    let (columns, rows) = reach_table_rows(&entries);
    let table = write_table(&manifest, &columns, &rows);
    print!("{table}");
    eprintln!("data-digest reach-table={}", data_digest(&table));
    if let Some(dir) = out_dir {
        write_output(dir, "reach-table.csv", &table)?;
    }
    Ok(())
}

fn cmd_link_study(
    params: &CfmParams,
    out_dir: Option<&Path>,
    threads: usize,
    args: StudyArgs,
) -> Result<(), Failure> {
    let mut cfg: StudyFileConfig = load_config(args.config.as_deref())?;
    if let Some(v) = args.variant {
        cfg.variant = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.n_high_mfl {
        cfg.n_high_mfl = v;
    }
    if let Some(v) = args.n_qpsk {
        cfg.n_qpsk = v;
    }
    if let Some(v) = args.n_bpsk {
        cfg.n_bpsk = v;
    }
    if let Some(v) = args.max_busy {
        cfg.max_busy = v;
    }
    if let Some(v) = args.initial_spans {
        cfg.initial_spans = v;
    }
    if let Some(v) = args.rel_tolerance {
        cfg.rel_tolerance = v;
    }
    if let Some(v) = args.max_subdivisions {
        cfg.max_subdivisions = v;
    }

    let study_config = StudyConfig {
        n_high_mfl: cfg.n_high_mfl,
        n_qpsk: cfg.n_qpsk,
        n_bpsk: cfg.n_bpsk,
        variants: parse_variants(&cfg.variant)?,
        quad: QuadratureSpec {
            rel_tolerance: cfg.rel_tolerance,
            max_subdivisions: cfg.max_subdivisions,
            island_padding_hz: cfg.island_padding_hz,
        },
        seed: cfg.seed,
        max_busy: cfg.max_busy,
        initial_spans: cfg.initial_spans,
    };
    let report = run_study(params, &study_config, threads)?;

    let config_echo = serde_json::to_string(&cfg).map_err(QotError::from)?;
    let manifest = RunManifest::new(params, cfg.seed, &config_echo);
    let (stat_cols, stat_rows) = study_stats_table(&report);
    let stats_table = write_table(&manifest, &stat_cols, &stat_rows);
    print!("{stats_table}");
    let (sample_cols, sample_rows) = study_table(&report);
    let samples_table = write_table(&manifest, &sample_cols, &sample_rows);
    eprintln!(
        "data-digest samples={} stats={}",
        data_digest(&samples_table),
        data_digest(&stats_table)
    );
    for ex in &report.excluded {
        eprintln!("excluded sample {} ({}): {}", ex.sample_id, ex.class.name(), ex.reason);
    }
    eprintln!("excluded={} of {}", report.excluded.len(), report.excluded.len() + report.rows.len() / study_config.variants.len().max(1));
    if let Some(dir) = out_dir {
        write_output(dir, "link-study-samples.csv", &samples_table)?;
        write_output(dir, "link-study-stats.csv", &stats_table)?;
    }
    Ok(())
}

fn cmd_netsim(
    params: &CfmParams,
    out_dir: Option<&Path>,
    threads: usize,
    args: NetsimArgs,
) -> Result<(), Failure> {
    let mut cfg: NetsimConfig = load_config(args.config.as_deref())?;
    if let Some(v) = args.topology {
        cfg.topology = v;
    }
    if let Some(v) = args.variant {
        cfg.variant = v;
    }
    if let Some(v) = args.otl {
        cfg.otls = v;
    }
    if let Some(v) = args.seed {
        cfg.seeds = v;
    }
    if let Some(v) = args.n_requests {
        cfg.n_requests = v;
    }
    if let Some(v) = args.k_paths {
        cfg.k_paths = v;
    }
    if let Some(v) = args.policy {
        cfg.policy = v;
    }
    if cfg.otls.is_empty() || cfg.seeds.is_empty() {
        return Err(Failure::Config("netsim needs at least one otl and one seed".into()));
    }

    let topo = match cfg.topology.trim().to_ascii_lowercase().as_str() {
        "itb" => Topology::itb(),
        "usb" => Topology::usb(),
        _ => Topology::from_file(Path::new(&cfg.topology))
            .map_err(|e| Failure::Config(format!("topology {}: {e}", cfg.topology)))?,
    };
    let variants = parse_variants(&cfg.variant)?;
    let policy = parse_policy(&cfg.policy)?;

    let mut points = Vec::new();
    for &otl in &cfg.otls {
        for &variant in &variants {
            for &seed in &cfg.seeds {
                points.push(GridPoint { variant, otl_erlang: otl, seed });
            }
        }
    }
    let metrics = run_grid(&topo, params, &points, cfg.n_requests, cfg.k_paths, policy, threads)?;

    let config_echo = serde_json::to_string(&cfg).map_err(QotError::from)?;
    let manifest = RunManifest::new(params, cfg.seeds[0], &config_echo);
    let (columns, rows) = netsim_table(&points, &metrics);
    let table = write_table(&manifest, &columns, &rows);
    print!("{table}");
    eprintln!("data-digest netsim={}", data_digest(&table));
    if let Some(dir) = out_dir {
        write_output(dir, "netsim.csv", &table)?;
    }
    Ok(())
}

/// One self-check outcome. `value` is the measured deviation, `allow` its
/// allowance; the check passes when value <= allow. Tolerance-governed
/// checks accept an allowance override from `--tolerance`; identity checks
/// (bitwise or counting) always demand exact zero.
struct Check {
    name: &'static str,
    value: f64,
    allow: f64,
    tolerance_governed: bool,
    detail: String,
}

fn check_constants_digest(params: &CfmParams) -> Check {
    let shipped = CfmParams::shipped().sha256_hex();
    let loaded = params.sha256_hex();
    let matches = loaded == shipped;
    Check {
        name: "constants-digest",
        value: if matches { 0.0 } else { 1.0 },
        allow: 0.0,
        tolerance_governed: false,
        detail: if matches {
            format!("sha256:{loaded} matches the shipped set")
        } else {
            format!("sha256:{loaded} differs from shipped sha256:{shipped}")
        },
    }
}

fn check_ber_thresholds() -> Result<Check, Failure> {
    let mut worst = 0.0f64;
    let mut worst_name = ModulationFormat::ALL[0].name();
    for format in ModulationFormat::ALL {
        let computed = ber_threshold_gsnr_db(format, FEC_BER_LIMIT)?;
        let dev = (computed - format.gsnr_threshold_db()).abs();
        if dev > worst {
            worst = dev;
            worst_name = format.name();
        }
    }
    Ok(Check {
        name: "ber-thresholds",
        value: worst,
        allow: 0.4,
        tolerance_governed: true,
        detail: format!("worst format {worst_name}, dB"),
    })
}

fn check_logon_stationarity(params: &CfmParams) -> Result<Check, Failure> {
    let span = FiberSpan::reference(REFERENCE_SPAN_LENGTH_M);
    let path = LinkPath::homogeneous(span, LOGON_REFERENCE_SPANS)?;
    let mut worst = 0.0f64;
    let mut worst_name = CfmVariant::ALL[0].name();
    for variant in CfmVariant::ALL {
        let plan = ChannelPlan::full_cband(ModulationFormat::Pm16Qam, 1e-3);
        let p_opt = logon_power_w(variant, params, &path, &plan)?;
        let opt_plan = ChannelPlan::full_cband(ModulationFormat::Pm16Qam, p_opt);
        let report = path_gsnr(variant, params, &path, &opt_plan)?;
        let dev = (report.nli_total_w / report.ase_total_w - 0.5).abs();
        if dev > worst {
            worst = dev;
            worst_name = variant.name();
        }
    }
    Ok(Check {
        name: "logon-stationarity",
        value: worst,
        allow: 1e-6,
        tolerance_governed: true,
        detail: format!("worst variant {worst_name}, |NLI/ASE - 1/2| at the closed-form optimum"),
    })
}

fn check_reduction_identities(params: &CfmParams) -> Result<Check, Failure> {
    let lengths_km = [80.0, 100.0, 60.0];
    let spans: Vec<FiberSpan> = lengths_km.iter().map(|&km| FiberSpan::reference(km * 1e3)).collect();
    let path = LinkPath::new(vec![spans])?;
    let plan = ChannelPlan::center_loaded(9, ModulationFormat::Pm16Qam, 1.2e-3)?
        .with_gaussian_statistics();
    let w1 = path_nli(CfmVariant::WoMdct1, params, &path, &plan)?;
    let w2 = path_nli(CfmVariant::WoMdct2, params, &path, &plan)?;
    let m1 = path_nli(CfmVariant::Mct1, params, &path, &plan)?;
    let m2 = path_nli(CfmVariant::Mct2, params, &path, &plan)?;
    let md = path_nli(CfmVariant::Mdct, params, &path, &plan)?;
    let mut violations = 0.0;
    let mut failed = Vec::new();
    if m1.to_bits() != w1.to_bits() {
        violations += 1.0;
        failed.push("MCT-1=WoMDCT-1");
    }
    if m2.to_bits() != w2.to_bits() {
        violations += 1.0;
        failed.push("MCT-2=WoMDCT-2");
    }
    if md.to_bits() != w1.to_bits() {
        violations += 1.0;
        failed.push("MDCT=WoMDCT-1");
    }
    Ok(Check {
        name: "reduction-identities",
        value: violations,
        allow: 0.0,
        tolerance_governed: false,
        detail: if failed.is_empty() {
            "all three Gaussian reductions are bitwise".into()
        } else {
            format!("violated: {}", failed.join(", "))
        },
    })
}

fn check_power_homogeneity(params: &CfmParams) -> Result<Check, Failure> {
    let span = FiberSpan::reference(REFERENCE_SPAN_LENGTH_M);
    let base = 8e-4;
    let mut worst = 0.0f64;
    let mut worst_name = CfmVariant::ALL[0].name();
    for variant in CfmVariant::ALL {
        let lo = ChannelPlan::center_loaded(5, ModulationFormat::Pm16Qam, base)?;
        let hi = ChannelPlan::center_loaded(5, ModulationFormat::Pm16Qam, 2.0 * base)?;
        let n_lo = span_nli(variant, params, &span, &lo, &[])?.total_w;
        let n_hi = span_nli(variant, params, &span, &hi, &[])?.total_w;
        let dev = (n_hi / n_lo / 8.0 - 1.0).abs();
        if dev > worst {
            worst = dev;
            worst_name = variant.name();
        }
    }
    Ok(Check {
        name: "power-homogeneity",
        value: worst,
        allow: 1e-9,
        tolerance_governed: true,
        detail: format!("worst variant {worst_name}, relative error of the doubled-power ratio"),
    })
}

fn check_oracle_agreement(params: &CfmParams) -> Result<Check, Failure> {
    // Densely packed combs put interferer islands in the oscillation regime
    // that the default budget refuses; quadruple it for the self-check.
    let spec = QuadratureSpec { max_subdivisions: 1024, ..QuadratureSpec::default() };
    let mut worst = 0.0f64;
    let mut worst_cell = String::new();
    for &length_km in &[60.0, 80.0, 100.0, 120.0] {
        let span = FiberSpan::reference(length_km * 1e3);
        for &n_busy in &[1usize, 5, 15] {
            let plan = ChannelPlan::center_loaded(n_busy, ModulationFormat::Pm16Qam, 1e-3)?
                .with_gaussian_statistics();
            let oracle = span_nli_quadrature(&span, &plan, &spec)?.nli_power_w;
            for variant in CfmVariant::ALL {
                let cfm = span_nli(variant, params, &span, &plan, &[])?.total_w;
                let dev = linear_to_db(oracle / cfm).abs();
                if dev > worst {
                    worst = dev;
                    worst_cell =
                        format!("{} at {length_km} km, {n_busy} busy", variant.name());
                }
            }
        }
    }
    Ok(Check {
        name: "oracle-agreement",
        value: worst,
        allow: 0.5,
        tolerance_governed: true,
        detail: format!("worst cell {worst_cell}, |10 log10(oracle/closed form)| dB"),
    })
}

fn check_design_ordering(params: &CfmParams) -> Result<Check, Failure> {
    let chain = [
        CfmVariant::WoMdct2,
        CfmVariant::WoMdct1,
        CfmVariant::Mct2,
        CfmVariant::Mct1,
        CfmVariant::Mdct,
    ];
    let mut powers_dbm = Vec::new();
    for &variant in &chain {
        powers_dbm.push(watts_to_dbm(design_power_w(variant, params)?));
    }
    let mut min_gap = f64::INFINITY;
    for pair in powers_dbm.windows(2) {
        min_gap = min_gap.min(pair[1] - pair[0]);
    }
    Ok(Check {
        name: "design-ordering",
        value: if min_gap > 0.0 { 0.0 } else { 1.0 },
        allow: 0.0,
        tolerance_governed: false,
        detail: format!(
            "design powers ascend WoMDCT-2 to MDCT, smallest step {:.6} dB",
            min_gap
        ),
    })
}

fn check_reach_chain(params: &CfmParams) -> Result<Check, Failure> {
    let entries = reach_table(params, &CfmVariant::ALL, 0.0)?;
    let ok = check_reach_ordering(&entries).is_ok();
    Ok(Check {
        name: "reach-chain",
        value: if ok { 0.0 } else { 1.0 },
        allow: 0.0,
        tolerance_governed: false,
        detail: if ok {
            "reach shrinks with format level and never shrinks along the variant chain".into()
        } else {
            match check_reach_ordering(&entries) {
                Err(f) => f.message(),
                Ok(()) => unreachable!(),
            }
        },
    })
}

fn cmd_validate(params: &CfmParams, args: ValidateArgs) -> Result<(), Failure> {
    if let Some(t) = args.tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Failure::Config("--tolerance must be finite and nonnegative".into()));
        }
    }
    let checks = vec![
        check_constants_digest(params),
        check_ber_thresholds()?,
        check_logon_stationarity(params)?,
        check_reduction_identities(params)?,
        check_power_homogeneity(params)?,
        check_oracle_agreement(params)?,
        check_design_ordering(params)?,
        check_reach_chain(params)?,
    ];
    let mut failures = 0usize;
    for check in &checks {
        let allow = if check.tolerance_governed {
            args.tolerance.unwrap_or(check.allow)
        } else {
            check.allow
        };
        let pass = check.value <= allow;
        if !pass {
            failures += 1;
        }
        println!(
            "check {}: value={:.9} allow={:.9} margin={:.9} {} ({})",
            check.name,
            check.value,
            allow,
            allow - check.value,
            if pass { "PASS" } else { "FAIL" },
            check.detail,
        );
    }
    if failures == 0 {
        println!("validate: PASS ({} checks)", checks.len());
        Ok(())
    } else {
        println!("validate: FAIL ({failures} of {} checks)", checks.len());
        Err(Failure::Validation(format!("{failures} self-checks failed")))
    }
}
