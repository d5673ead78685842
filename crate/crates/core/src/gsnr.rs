//! GSNR accumulation, launch-power optimization, pre-FEC BER thresholds,
//! and transparent-reach tabulation.
//!
//! Noise contributions are incoherent per span: each span adds its own ASE
//! (from the amplifier that exactly compensates it) and its own NLI term.
//! The GSNR of a path is the CUT launch power over the accumulated noise.

use serde::{Deserialize, Serialize};

use crate::cfm::{span_nli, CfmVariant};
use crate::error::{QotError, Result};
use crate::media::{ChannelPlan, FiberSpan, LinkPath, ModulationFormat};
use crate::params::CfmParams;
use crate::units::{dbm_to_watts, linear_to_db, watts_to_dbm, PLANCK_J_S};

/// Pre-FEC BER limit of the reference soft-decision code.
pub const FEC_BER_LIMIT: f64 = 3.8e-3;

/// Default launch-power grid for the optimizer, in dBm.
pub const LOGON_GRID_MIN_DBM: f64 = -5.0;
pub const LOGON_GRID_MAX_DBM: f64 = 5.0;
pub const LOGON_GRID_STEP_DB: f64 = 0.01;

/// Number of reference spans on which per-variant design powers are fixed.
pub const LOGON_REFERENCE_SPANS: usize = 10;

/// Noise added by one span's amplifier in the CUT bandwidth, in W.
pub fn span_ase_power(span: &FiberSpan, center_hz: f64, symbol_rate_baud: f64) -> f64 {
    let nf_lin = 10f64.powf(span.noise_figure_db / 10.0);
    PLANCK_J_S * center_hz * nf_lin * (span.gain_linear() - 1.0) * symbol_rate_baud
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpanContribution {
    pub ase_w: f64,
    pub nli_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GsnrReport {
    /// CUT launch power in W.
    pub p_ch_w: f64,
    pub ase_total_w: f64,
    pub nli_total_w: f64,
    /// Linear GSNR; zero when the CUT carries no power.
    pub gsnr_linear: f64,
    pub per_span: Vec<SpanContribution>,
}

impl GsnrReport {
    pub fn gsnr_db(&self) -> f64 {
        linear_to_db(self.gsnr_linear)
    }
}

/// GSNR of the CUT over a path, including NLI from the given model variant.
pub fn path_gsnr(
    variant: CfmVariant,
    params: &CfmParams,
    path: &LinkPath,
    plan: &ChannelPlan,
) -> Result<GsnrReport> {
    let cut = plan.cut();
    let spans = path.spans();
    let mut per_span = Vec::with_capacity(spans.len());
    let mut ase_total = 0.0;
    let mut nli_total = 0.0;
    for i in 0..spans.len() {
        let ase = span_ase_power(&spans[i], cut.center_frequency_hz, cut.symbol_rate_baud);
        let nli = span_nli(variant, params, &spans[i], plan, &spans[..i])?.total_w;
        ase_total += ase;
        nli_total += nli;
        per_span.push(SpanContribution { ase_w: ase, nli_w: nli });
    }
    let p = cut.launch_power_w;
    let denom = ase_total + nli_total;
    Ok(GsnrReport {
        p_ch_w: p,
        ase_total_w: ase_total,
        nli_total_w: nli_total,
        gsnr_linear: if denom > 0.0 { p / denom } else { 0.0 },
        per_span,
    })
}

/// GSNR with nonlinear interference disabled: launch power over ASE alone.
pub fn path_gsnr_ase_only(path: &LinkPath, plan: &ChannelPlan) -> Result<GsnrReport> {
    let cut = plan.cut();
    let spans = path.spans();
    let mut per_span = Vec::with_capacity(spans.len());
    let mut ase_total = 0.0;
    for span in spans {
        let ase = span_ase_power(span, cut.center_frequency_hz, cut.symbol_rate_baud);
        ase_total += ase;
        per_span.push(SpanContribution { ase_w: ase, nli_w: 0.0 });
    }
    let p = cut.launch_power_w;
    Ok(GsnrReport {
        p_ch_w: p,
        ase_total_w: ase_total,
        nli_total_w: 0.0,
        gsnr_linear: if ase_total > 0.0 { p / ase_total } else { 0.0 },
        per_span,
    })
}

/// Closed-form optimal uniform launch power: with NLI cubic in power,
/// GSNR = P / (ase + eta P^3) peaks at P = (ase / (2 eta))^(1/3).
pub fn logon_power_w(
    variant: CfmVariant,
    params: &CfmParams,
    path: &LinkPath,
    plan: &ChannelPlan,
) -> Result<f64> {
    let probe_power = 1e-3;
    let probe = plan.with_uniform_power(probe_power);
    let report = path_gsnr(variant, params, path, &probe)?;
    let eta = report.nli_total_w / probe_power.powi(3);
    if !(eta > 0.0) {
        return Err(QotError::ModelDomain(
            "launch-power optimum undefined without nonlinear interference".into(),
        ));
    }
    Ok((report.ase_total_w / (2.0 * eta)).cbrt())
}

/// Grid-search launch-power optimum over uniform comb powers, in dBm.
/// Scans [lo_dbm, hi_dbm] in step_db increments and returns the argmax.
pub fn logon_power_grid_dbm(
    variant: CfmVariant,
    params: &CfmParams,
    path: &LinkPath,
    plan: &ChannelPlan,
    lo_dbm: f64,
    hi_dbm: f64,
    step_db: f64,
) -> Result<f64> {
    if !(step_db > 0.0 && hi_dbm > lo_dbm) {
        return Err(QotError::InvalidParameter(
            "grid requires hi > lo and a positive step".into(),
        ));
    }
    let steps = ((hi_dbm - lo_dbm) / step_db).round() as usize;
    let mut best_dbm = lo_dbm;
    let mut best_gsnr = f64::NEG_INFINITY;
    for i in 0..=steps {
        let p_dbm = lo_dbm + step_db * i as f64;
        let probe = plan.with_uniform_power(dbm_to_watts(p_dbm));
        let gsnr = path_gsnr(variant, params, path, &probe)?.gsnr_linear;
        if gsnr > best_gsnr {
            best_gsnr = gsnr;
            best_dbm = p_dbm;
        }
    }
    Ok(best_dbm)
}

/// Q function.
fn q_func(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Pre-FEC bit error ratio of a format at a linear GSNR.
pub fn pre_fec_ber(format: ModulationFormat, gsnr_linear: f64) -> f64 {
    let g = gsnr_linear.max(0.0);
    match format {
        ModulationFormat::PmBpsk => 0.5 * libm::erfc(g.sqrt()),
        ModulationFormat::PmQpsk => q_func(g.sqrt()),
        ModulationFormat::Pm8Qam => 4.0 / 3.0 * q_func((3.0 * g / 7.0).sqrt()),
        ModulationFormat::Pm16Qam => 0.75 * q_func((g / 5.0).sqrt()),
        ModulationFormat::Pm32Qam => 0.8 * q_func((3.0 * g / 31.0).sqrt()),
        ModulationFormat::Pm64Qam => 7.0 / 12.0 * q_func((g / 21.0).sqrt()),
    }
}

/// GSNR, in dB, at which a format reaches the target pre-FEC BER.
/// Bisection over [0, 30] dB; the BER families are strictly decreasing.
pub fn ber_threshold_gsnr_db(format: ModulationFormat, target_ber: f64) -> Result<f64> {
    if !(target_ber > 0.0 && target_ber < 0.5) {
        return Err(QotError::InvalidParameter(format!(
            "target BER must lie in (0, 0.5), got {target_ber}"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 30.0f64);
    let ber_at = |db: f64| pre_fec_ber(format, 10f64.powf(db / 10.0));
    if ber_at(lo) < target_ber || ber_at(hi) > target_ber {
        return Err(QotError::ModelDomain(format!(
            "target BER {target_ber} out of bracket for {}",
            format.name()
        )));
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if ber_at(mid) > target_ber {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Cumulative noise of a span sequence, position by position: returns
/// (cumulative ASE, cumulative NLI) after n spans for n = 1..=len.
fn noise_prefix(
    variant: CfmVariant,
    params: &CfmParams,
    spans: &[FiberSpan],
    plan: &ChannelPlan,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let cut = plan.cut();
    let mut ase_cum = Vec::with_capacity(spans.len());
    let mut nli_cum = Vec::with_capacity(spans.len());
    let (mut ase, mut nli) = (0.0, 0.0);
    for i in 0..spans.len() {
        ase += span_ase_power(&spans[i], cut.center_frequency_hz, cut.symbol_rate_baud);
        nli += span_nli(variant, params, &spans[i], plan, &spans[..i])?.total_w;
        ase_cum.push(ase);
        nli_cum.push(nli);
    }
    Ok((ase_cum, nli_cum))
}

fn gsnr_db_at(p: f64, ase_cum: &[f64], nli_cum: &[f64], n: usize) -> f64 {
    linear_to_db(p / (ase_cum[n - 1] + nli_cum[n - 1]))
}

/// Largest prefix length n of the span sequence whose path GSNR stays at
/// or above the threshold; zero when even one span falls short. GSNR is
/// strictly decreasing in prefix length, so a binary search suffices.
pub fn refine_span_count(
    variant: CfmVariant,
    params: &CfmParams,
    spans: &[FiberSpan],
    plan: &ChannelPlan,
    threshold_db: f64,
) -> Result<usize> {
    if spans.is_empty() {
        return Ok(0);
    }
    let p = plan.cut().launch_power_w;
    let (ase_cum, nli_cum) = noise_prefix(variant, params, spans, plan)?;
    if gsnr_db_at(p, &ase_cum, &nli_cum, 1) < threshold_db {
        return Ok(0);
    }
    let (mut lo, mut hi) = (1usize, spans.len());
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if gsnr_db_at(p, &ase_cum, &nli_cum, mid) >= threshold_db {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

/// One row of a transparent-reach table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReachEntry {
    pub variant: CfmVariant,
    pub format: ModulationFormat,
    pub max_spans: usize,
    pub logon_power_dbm: f64,
}

/// Hard cap on the transparent-reach search.
pub const REACH_SPAN_CAP: usize = 1000;

/// Transparent reach of every format under every requested variant, on the
/// reference 80 km span at the variant's design power. The design power is
/// one number per variant: the closed-form optimum of the fully loaded
/// PM-16QAM comb on a ten-span reference path.
pub fn reach_table(
    params: &CfmParams,
    variants: &[CfmVariant],
    nf_offset_db: f64,
) -> Result<Vec<ReachEntry>> {
    let mut span = FiberSpan::reference(80e3);
    span.noise_figure_db += nf_offset_db;
    let mut out = Vec::new();
    for &variant in variants {
        let design_plan = ChannelPlan::full_cband(ModulationFormat::Pm16Qam, 1e-3);
        let ref_path = LinkPath::homogeneous(span, LOGON_REFERENCE_SPANS)?;
        let p_design = logon_power_w(variant, params, &ref_path, &design_plan)?;
        let reach_spans = LinkPath::homogeneous(span, REACH_SPAN_CAP)?;
        for format in ModulationFormat::ALL {
            let plan = ChannelPlan::full_cband(format, p_design);
            let reach = refine_span_count(
                variant,
                params,
                reach_spans.spans(),
                &plan,
                format.gsnr_threshold_db(),
            )?;
            out.push(ReachEntry {
                variant,
                format,
                max_spans: reach,
                logon_power_dbm: watts_to_dbm(p_design),
            });
        }
    }
    Ok(out)
}
