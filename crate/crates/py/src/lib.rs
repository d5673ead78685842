//! Python bindings for the QoT workbench core.
//!
//! The module mirrors the main operations of the Rust crate: closed-form
//! GSNR and LOGON power of a lightpath, BER thresholds, transparent reach,
//! the quadrature oracle, the deviation study, and the dynamic network
//! simulation. All quantities are SI (W, Hz, m) except the explicit dB and
//! dBm arguments.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use qot_core::cfm::{span_nli as core_span_nli, CfmVariant};
use qot_core::error::QotError;
use qot_core::gsnr::{
    ber_threshold_gsnr_db as core_ber_threshold, logon_power_w, path_gsnr, path_gsnr_ase_only,
    pre_fec_ber as core_pre_fec_ber, reach_table as core_reach_table, FEC_BER_LIMIT,
};
use qot_core::media::{ChannelPlan, FiberSpan, LinkPath, ModulationFormat};
use qot_core::net::{run_simulation, MflPolicy, NetConfig, Topology};
use qot_core::oracle::{span_nli_quadrature, QuadratureSpec};
use qot_core::params::CfmParams;
use qot_core::study::{run_study, StudyConfig};
use qot_core::units::{db_to_linear, dbm_to_watts, watts_to_dbm};

fn to_py_err(e: QotError) -> PyErr {
    match e {
        QotError::OracleNonConvergence(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_variant(name: &str) -> PyResult<CfmVariant> {
    CfmVariant::from_name(name).map_err(to_py_err)
}

/// Accepts both "PM-16QAM" and the bare "16qam" shorthand.
fn parse_format(name: &str) -> PyResult<ModulationFormat> {
    ModulationFormat::from_name(name)
        .or_else(|_| ModulationFormat::from_name(&format!("PM-{name}")))
        .map_err(to_py_err)
}

fn parse_policy(name: &str) -> PyResult<MflPolicy> {
    let squash: String = name
        .chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase();
    match squash.as_str() {
        "worstcase" | "worstcasefullload" | "fullload" => Ok(MflPolicy::WorstCaseFullLoad),
        "currentload" | "current" => Ok(MflPolicy::CurrentLoad),
        _ => Err(PyValueError::new_err(format!(
            "unknown policy '{name}' (expected worst-case or current-load)"
        ))),
    }
}

fn path_from_km(span_lengths_km: &[f64]) -> PyResult<LinkPath> {
    if span_lengths_km.is_empty() {
        return Err(PyValueError::new_err("the path needs at least one span"));
    }
    let spans: Vec<FiberSpan> = span_lengths_km.iter().map(|&km| FiberSpan::reference(km * 1e3)).collect();
    LinkPath::new(vec![spans]).map_err(to_py_err)
}

fn load_topology(name: &str) -> PyResult<Topology> {
    match name.trim().to_ascii_lowercase().as_str() {
        "itb" => Ok(Topology::itb()),
        "usb" => Ok(Topology::usb()),
        _ => Topology::from_file(std::path::Path::new(name)).map_err(to_py_err),
    }
}

/// Names of the five model variants.
#[pyfunction]
fn variants() -> Vec<&'static str> {
    CfmVariant::ALL.iter().map(|v| v.name()).collect()
}

/// Names of the six modulation formats, lowest level first.
#[pyfunction]
fn formats() -> Vec<&'static str> {
    ModulationFormat::ALL.iter().map(|f| f.name()).collect()
}

/// SHA-256 digest of the shipped model constants.
#[pyfunction]
fn constants_digest() -> String {
    CfmParams::shipped().sha256_hex()
}

/// Excess kurtosis of a format's unit-power constellation.
#[pyfunction]
fn excess_kurtosis(format: &str) -> PyResult<f64> {
    Ok(parse_format(format)?.excess_kurtosis())
}

/// GSNR in dB at which the format reaches `target_ber`.
#[pyfunction]
#[pyo3(signature = (format, target_ber=FEC_BER_LIMIT))]
fn ber_threshold_gsnr_db(format: &str, target_ber: f64) -> PyResult<f64> {
    core_ber_threshold(parse_format(format)?, target_ber).map_err(to_py_err)
}

/// Pre-FEC bit error ratio of the format at the given GSNR.
#[pyfunction]
fn pre_fec_ber(format: &str, gsnr_db: f64) -> PyResult<f64> {
    Ok(core_pre_fec_ber(parse_format(format)?, db_to_linear(gsnr_db)))
}

/// Closed-form optimum launch power in dBm for a center-loaded comb.
#[pyfunction]
#[pyo3(signature = (variant, span_lengths_km, format="PM-16QAM", n_busy=60))]
fn logon_power_dbm(
    variant: &str,
    span_lengths_km: Vec<f64>,
    format: &str,
    n_busy: usize,
) -> PyResult<f64> {
    let variant = parse_variant(variant)?;
    let path = path_from_km(&span_lengths_km)?;
    let plan = ChannelPlan::center_loaded(n_busy, parse_format(format)?, 1e-3).map_err(to_py_err)?;
    let params = CfmParams::shipped();
    Ok(watts_to_dbm(logon_power_w(variant, &params, &path, &plan).map_err(to_py_err)?))
}

/// GSNR of a lightpath. The launch power defaults to the LOGON optimum
/// (0 dBm when NLI is excluded). Returns a dict with the dB value, the
/// power actually used, and the accumulated noise powers in W.
#[pyfunction]
#[pyo3(signature = (variant, span_lengths_km, format="PM-16QAM", n_busy=60, power_dbm=None, include_nli=true))]
fn gsnr<'py>(
    py: Python<'py>,
    variant: &str,
    span_lengths_km: Vec<f64>,
    format: &str,
    n_busy: usize,
    power_dbm: Option<f64>,
    include_nli: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let variant = parse_variant(variant)?;
    let format = parse_format(format)?;
    let path = path_from_km(&span_lengths_km)?;
    let params = CfmParams::shipped();
    let (power_w, report) = if include_nli {
        let power_w = match power_dbm {
            Some(dbm) => dbm_to_watts(dbm),
            None => {
                let probe = ChannelPlan::center_loaded(n_busy, format, 1e-3).map_err(to_py_err)?;
                logon_power_w(variant, &params, &path, &probe).map_err(to_py_err)?
            }
        };
        let plan = ChannelPlan::center_loaded(n_busy, format, power_w).map_err(to_py_err)?;
        (power_w, path_gsnr(variant, &params, &path, &plan).map_err(to_py_err)?)
    } else {
        let power_w = dbm_to_watts(power_dbm.unwrap_or(0.0));
        let plan = ChannelPlan::center_loaded(n_busy, format, power_w).map_err(to_py_err)?;
        (power_w, path_gsnr_ase_only(&path, &plan).map_err(to_py_err)?)
    };
    let out = PyDict::new(py);
    out.set_item("variant", variant.name())?;
    out.set_item("format", format.name())?;
    out.set_item("gsnr_db", report.gsnr_db())?;
    out.set_item("launch_power_dbm", watts_to_dbm(power_w))?;
    out.set_item("ase_w", report.ase_total_w)?;
    out.set_item("nli_w", report.nli_total_w)?;
    Ok(out)
}

/// Transparent reach of every (variant, format) pair at the design power,
/// as a list of dicts ordered by variant then by format level.
#[pyfunction]
#[pyo3(signature = (nf_offset_db=0.0))]
fn reach_table<'py>(py: Python<'py>, nf_offset_db: f64) -> PyResult<Bound<'py, PyList>> {
    let params = CfmParams::shipped();
    let entries = core_reach_table(&params, &CfmVariant::ALL, nf_offset_db).map_err(to_py_err)?;
    let out = PyList::empty(py);
    for e in entries {
        let d = PyDict::new(py);
        d.set_item("variant", e.variant.name())?;
        d.set_item("format", e.format.name())?;
        d.set_item("max_spans", e.max_spans)?;
        d.set_item("logon_power_dbm", e.logon_power_dbm)?;
        out.append(d)?;
    }
    Ok(out)
}

/// Closed-form NLI power of the CUT over one span, in W. `accumulated_km`
/// is the fiber length already traversed (it only matters to MDCT);
/// `gaussian` zeroes the constellation kurtosis.
#[pyfunction]
#[pyo3(signature = (variant, span_length_km, format="PM-16QAM", n_busy=1, power_dbm=0.0, accumulated_km=0.0, gaussian=false))]
fn span_nli_w(
    variant: &str,
    span_length_km: f64,
    format: &str,
    n_busy: usize,
    power_dbm: f64,
    accumulated_km: f64,
    gaussian: bool,
) -> PyResult<f64> {
    let variant = parse_variant(variant)?;
    let span = FiberSpan::reference(span_length_km * 1e3);
    let mut plan = ChannelPlan::center_loaded(n_busy, parse_format(format)?, dbm_to_watts(power_dbm))
        .map_err(to_py_err)?;
    if gaussian {
        plan = plan.with_gaussian_statistics();
    }
    let before: Vec<FiberSpan> = if accumulated_km > 0.0 {
        vec![FiberSpan::reference(accumulated_km * 1e3)]
    } else {
        Vec::new()
    };
    let params = CfmParams::shipped();
    Ok(core_span_nli(variant, &params, &span, &plan, &before).map_err(to_py_err)?.total_w)
}

/// Quadrature-oracle NLI power of the CUT over one span, in W.
#[pyfunction]
#[pyo3(signature = (span_length_km, format="PM-16QAM", n_busy=1, power_dbm=0.0, rel_tolerance=1e-3, max_subdivisions=1024))]
fn oracle_span_nli_w(
    span_length_km: f64,
    format: &str,
    n_busy: usize,
    power_dbm: f64,
    rel_tolerance: f64,
    max_subdivisions: u32,
) -> PyResult<f64> {
    let span = FiberSpan::reference(span_length_km * 1e3);
    let plan = ChannelPlan::center_loaded(n_busy, parse_format(format)?, dbm_to_watts(power_dbm))
        .map_err(to_py_err)?;
    let spec = QuadratureSpec { rel_tolerance, max_subdivisions, ..QuadratureSpec::default() };
    Ok(span_nli_quadrature(&span, &plan, &spec).map_err(to_py_err)?.nli_power_w)
}

/// Run the closed form vs oracle deviation study and return the per-group
/// statistics as a list of dicts, plus one "excluded" count per run.
#[pyfunction]
#[pyo3(signature = (n_high_mfl=16, n_qpsk=2, n_bpsk=2, seed=1, max_busy=15, initial_spans=10, variant="all", rel_tolerance=1e-3, max_subdivisions=1024, threads=0))]
#[allow(clippy::too_many_arguments)]
fn link_study<'py>(
    py: Python<'py>,
    n_high_mfl: usize,
    n_qpsk: usize,
    n_bpsk: usize,
    seed: u64,
    max_busy: usize,
    initial_spans: usize,
    variant: &str,
    rel_tolerance: f64,
    max_subdivisions: u32,
    threads: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let variants = if variant.trim().eq_ignore_ascii_case("all") {
        CfmVariant::ALL.to_vec()
    } else {
        vec![parse_variant(variant)?]
    };
    let config = StudyConfig {
        n_high_mfl,
        n_qpsk,
        n_bpsk,
        variants,
        quad: QuadratureSpec { rel_tolerance, max_subdivisions, ..QuadratureSpec::default() },
        seed,
        max_busy,
        initial_spans,
    };
    let threads = if threads == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        threads
    };
    let params = CfmParams::shipped();
    let report = run_study(&params, &config, threads).map_err(to_py_err)?;
    let stats = PyList::empty(py);
    for (class, variant, s) in &report.stats {
        let d = PyDict::new(py);
        d.set_item("class", class.name())?;
        d.set_item("variant", variant.name())?;
        d.set_item("n", s.n)?;
        d.set_item("rmse_db", s.rmse_db)?;
        d.set_item("mae_db", s.mae_db)?;
        d.set_item("std_db", s.std_db)?;
        stats.append(d)?;
    }
    let out = PyDict::new(py);
    out.set_item("stats", stats)?;
    out.set_item("n_rows", report.rows.len())?;
    out.set_item("excluded", report.excluded.len())?;
    Ok(out)
}

/// Run one dynamic-traffic simulation cell and return its metrics.
#[pyfunction]
#[pyo3(signature = (topology="itb", variant="mdct", otl_erlang=300.0, n_requests=1000, seed=1, k_paths=3, policy="worst-case"))]
#[allow(clippy::too_many_arguments)]
fn run_netsim<'py>(
    py: Python<'py>,
    topology: &str,
    variant: &str,
    otl_erlang: f64,
    n_requests: usize,
    seed: u64,
    k_paths: usize,
    policy: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let topo = load_topology(topology)?;
    let mut config = NetConfig::new(parse_variant(variant)?, otl_erlang, n_requests, seed);
    config.k_paths = k_paths;
    config.policy = parse_policy(policy)?;
    let params = CfmParams::shipped();
    let m = run_simulation(&topo, &params, &config).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("topology", topo.name())?;
    out.set_item("offered", m.offered)?;
    out.set_item("accepted", m.accepted)?;
    out.set_item("blocked", m.blocked)?;
    out.set_item("offered_bandwidth_gbps", m.offered_bandwidth_gbps)?;
    out.set_item("blocked_bandwidth_gbps", m.blocked_bandwidth_gbps)?;
    out.set_item("bbp", m.bbp)?;
    out.set_item("mean_gsnr_db", m.mean_arrival_gsnr_db)?;
    out.set_item("mfl_usage", m.mfl_usage.to_vec())?;
    Ok(out)
}

#[pymodule]
fn qot_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("FEC_BER_LIMIT", FEC_BER_LIMIT)?;
    m.add_function(wrap_pyfunction!(variants, m)?)?;
    m.add_function(wrap_pyfunction!(formats, m)?)?;
    m.add_function(wrap_pyfunction!(constants_digest, m)?)?;
    m.add_function(wrap_pyfunction!(excess_kurtosis, m)?)?;
    m.add_function(wrap_pyfunction!(ber_threshold_gsnr_db, m)?)?;
    m.add_function(wrap_pyfunction!(pre_fec_ber, m)?)?;
    m.add_function(wrap_pyfunction!(logon_power_dbm, m)?)?;
    m.add_function(wrap_pyfunction!(gsnr, m)?)?;
    m.add_function(wrap_pyfunction!(reach_table, m)?)?;
    m.add_function(wrap_pyfunction!(span_nli_w, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_span_nli_w, m)?)?;
    m.add_function(wrap_pyfunction!(link_study, m)?)?;
    m.add_function(wrap_pyfunction!(run_netsim, m)?)?;
    Ok(())
}
