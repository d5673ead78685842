//! Core library of the QoT workbench: fiber and comb modeling, closed-form
//! NLI estimators, a quadrature reference for the GN integral, GSNR and
//! launch-power optimization, a model-accuracy study harness, and a dynamic
//! network simulator.

pub mod cfm;
pub mod error;
pub mod gsnr;
pub mod media;
pub mod net;
pub mod oracle;
pub mod params;
pub mod report;
pub mod rng;
pub mod study;
pub mod units;

pub use cfm::{
    accumulated_dispersion_decay, path_nli, span_nli, span_nli_coefficient, CfmVariant,
    NliBreakdown,
};
pub use error::{QotError, Result};
pub use gsnr::{
    ber_threshold_gsnr_db, logon_power_grid_dbm, logon_power_w, path_gsnr, path_gsnr_ase_only,
    pre_fec_ber, reach_table, refine_span_count, GsnrReport, ReachEntry, FEC_BER_LIMIT,
};
pub use media::{Channel, ChannelPlan, FiberSpan, LinkPath, ModulationFormat};
pub use oracle::{
    fwm_kernel, path_nli_quadrature, span_nli_quadrature, OracleResult, QuadratureSpec,
};
pub use params::CfmParams;
pub use study::{
    run_study, sample_link, stats, DeltaStats, LinkSample, SampleClass, StudyConfig, StudyReport,
    StudyRow,
};
