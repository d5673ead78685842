//! Closed-form per-span NLI models.
//!
//! Five incoherent model variants share one evaluation path. Two backbones
//! produce the uncorrected NLI: an asinh family (WoMDCT-1, MCT-1, MDCT) and
//! an atan family (WoMDCT-2, MCT-2). The MCT variants subtract a
//! kurtosis-proportional correction per interferer. MDCT additionally carries
//! a self-channel correction whose weight decays with the dispersion
//! accumulated before the span under evaluation; the interferer correction
//! persists, which is what makes MDCT converge to MCT-1 on long links.
//!
//! All functions are pure; evaluation across (span, sample) pairs can run
//! fully in parallel.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{QotError, Result};
use crate::media::{ChannelPlan, FiberSpan, LinkPath};
use crate::params::CfmParams;

/// The five closed-form model variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CfmVariant {
    WoMdct1,
    WoMdct2,
    Mct1,
    Mct2,
    Mdct,
}

impl CfmVariant {
    pub const ALL: [CfmVariant; 5] = [
        CfmVariant::WoMdct1,
        CfmVariant::WoMdct2,
        CfmVariant::Mct1,
        CfmVariant::Mct2,
        CfmVariant::Mdct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CfmVariant::WoMdct1 => "WoMDCT-1",
            CfmVariant::WoMdct2 => "WoMDCT-2",
            CfmVariant::Mct1 => "MCT-1",
            CfmVariant::Mct2 => "MCT-2",
            CfmVariant::Mdct => "MDCT",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        let key: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Self::ALL
            .iter()
            .copied()
            .find(|v| {
                v.name()
                    .chars()
                    .filter(|c| c.is_ascii_alphanumeric())
                    .collect::<String>()
                    .to_ascii_lowercase()
                    == key
            })
            .ok_or_else(|| QotError::InvalidParameter(format!("unknown variant '{name}'")))
    }

    /// True for the asinh-backbone variants.
    pub fn uses_asinh_backbone(self) -> bool {
        matches!(self, CfmVariant::WoMdct1 | CfmVariant::Mct1 | CfmVariant::Mdct)
    }

    /// True for variants carrying the interferer kurtosis correction.
    pub fn has_interferer_correction(self) -> bool {
        matches!(self, CfmVariant::Mct1 | CfmVariant::Mct2 | CfmVariant::Mdct)
    }

    /// True for the variant carrying the decaying self correction.
    pub fn has_self_correction(self) -> bool {
        matches!(self, CfmVariant::Mdct)
    }

    /// True when per-span NLI depends on the span's position in the path.
    pub fn is_position_dependent(self) -> bool {
        self.has_self_correction()
    }
}

/// Per-span NLI of the CUT, split into its contributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NliBreakdown {
    /// Self-channel interference power in W.
    pub sci_w: f64,
    /// Cross-channel contributions as (interferer ordinal, power in W).
    pub xpm_per_interferer_w: Vec<(usize, f64)>,
    /// Signed kurtosis correction in W (nonpositive for the shipped formats).
    pub correction_w: f64,
    /// sci + sum(xpm) + correction, in W.
    pub total_w: f64,
}

/// Self-channel kernel asinh(0.5 pi^2 |beta2| l_eff_a R^2).
pub fn psi_self(span: &FiberSpan, cut_rate_baud: f64) -> Result<f64> {
    if span.beta2_s2_per_m == 0.0 {
        return Err(QotError::ModelDomain(
            "zero dispersion is outside the model family's validity".into(),
        ));
    }
    let lea = span.asymptotic_effective_length_m();
    Ok((0.5 * PI * PI * span.abs_beta2() * lea * cut_rate_baud * cut_rate_baud).asinh())
}

/// Cross-channel kernel: difference of asinh terms across the interferer's
/// band edges as seen from the CUT.
pub fn psi_cross(
    span: &FiberSpan,
    cut_rate_baud: f64,
    interferer_rate_baud: f64,
    delta_f_hz: f64,
) -> Result<f64> {
    if span.beta2_s2_per_m == 0.0 {
        return Err(QotError::ModelDomain(
            "zero dispersion is outside the model family's validity".into(),
        ));
    }
    if delta_f_hz + 1e-9 < (cut_rate_baud + interferer_rate_baud) / 2.0 {
        return Err(QotError::ModelDomain(format!(
            "channels overlap: spacing {delta_f_hz} Hz is below the half-rate sum"
        )));
    }
    let k = PI * PI * span.abs_beta2() * span.asymptotic_effective_length_m() * cut_rate_baud;
    let hi = (k * (delta_f_hz + interferer_rate_baud / 2.0)).asinh();
    let lo = (k * (delta_f_hz - interferer_rate_baud / 2.0)).asinh();
    Ok(hi - lo)
}

/// Decay weight of the MDCT self correction after traversing `spans_before`:
/// rho = 1 / (1 + sigma_d |beta2| R^2 L_acc), with rho(empty) = 1.
pub fn accumulated_dispersion_decay(
    params: &CfmParams,
    spans_before: &[FiberSpan],
    cut_rate_baud: f64,
) -> f64 {
    let l_acc: f64 = spans_before.iter().map(|s| s.length_m).sum();
    let beta2 = spans_before
        .first()
        .map(|s| s.abs_beta2())
        .unwrap_or(0.0);
    decay_from_accumulated(params, beta2 * l_acc, cut_rate_baud)
}

fn decay_from_accumulated(params: &CfmParams, beta2_times_length: f64, rate: f64) -> f64 {
    1.0 / (1.0 + params.dispersion_decay_coefficient * beta2_times_length * rate * rate)
}

/// Prefactor of the asinh family for a contribution scaled by 1/R_k^2.
fn asinh_prefactor(span: &FiberSpan, r_k: f64) -> f64 {
    let le = span.effective_length_m();
    let g2 = span.gamma_per_w_m * span.gamma_per_w_m;
    (8.0 / 27.0) * g2 * le * le
        / (PI * span.abs_beta2() * span.asymptotic_effective_length_m() * r_k * r_k)
}

/// Shared shape of the atan cross family: the backbone uses the CUT rate in
/// the atan argument, the kurtosis correction uses the interferer rate.
fn atan_family(
    coefficient: f64,
    span: &FiberSpan,
    r_k: f64,
    delta_f_hz: f64,
    atan_rate: f64,
) -> f64 {
    let a = span.alpha_p();
    let one_minus = a * span.effective_length_m();
    let g2 = span.gamma_per_w_m * span.gamma_per_w_m;
    let phi = 4.0 * PI * PI * span.abs_beta2() * delta_f_hz;
    coefficient * g2 * one_minus * one_minus / (r_k * a * phi)
        * (phi * atan_rate / (2.0 * a)).atan()
}

/// Per-span NLI of the CUT under `variant`. `spans_before` holds the spans
/// already traversed by the lightpath (empty for the first span); only MDCT
/// reads it.
pub fn span_nli(
    variant: CfmVariant,
    params: &CfmParams,
    span: &FiberSpan,
    plan: &ChannelPlan,
    spans_before: &[FiberSpan],
) -> Result<NliBreakdown> {
    params.validate()?;
    let cut = plan.cut();
    let p_cut = cut.launch_power_w;
    let r_cut = cut.symbol_rate_baud;

    let sci_w = asinh_prefactor(span, r_cut) * psi_self(span, r_cut)? * p_cut.powi(3);

    let mut xpm_per_interferer_w = Vec::new();
    let mut xpm_sum = 0.0f64;
    let mut correction_w = 0.0f64;
    for (ordinal, ch) in plan.interferers() {
        let p_k = ch.launch_power_w;
        let r_k = ch.symbol_rate_baud;
        let delta_f = (ch.center_frequency_hz - cut.center_frequency_hz).abs();
        let pp = p_cut * p_k * p_k;

        let xpm = if variant.uses_asinh_backbone() {
            params.cross_multiplicity
                * asinh_prefactor(span, r_k)
                * psi_cross(span, r_cut, r_k, delta_f)?
                * pp
        } else {
            atan_family(params.atan_coefficient, span, r_k, delta_f, r_cut) * pp
        };
        xpm_per_interferer_w.push((ordinal, xpm));
        xpm_sum += xpm;

        if variant.has_interferer_correction() {
            correction_w += ch.excess_kurtosis
                * atan_family(params.kurtosis_coefficient, span, r_k, delta_f, r_k)
                * pp;
        }
    }

    if variant.has_self_correction() {
        let rho = accumulated_dispersion_decay(params, spans_before, r_cut);
        correction_w += rho * cut.excess_kurtosis * params.self_kurtosis_coefficient * sci_w;
    }

    let total_w = sci_w + xpm_sum + correction_w;
    if p_cut > 0.0 && !(total_w > 0.0) {
        return Err(QotError::ModelDomain(format!(
            "corrected NLI is nonpositive ({total_w} W); coefficients outside the \
             model's validity"
        )));
    }
    Ok(NliBreakdown {
        sci_w,
        xpm_per_interferer_w,
        correction_w,
        total_w,
    })
}

/// Total NLI of the CUT over a lightpath: incoherent sum of per-span values.
/// The local per-span powers equal the launch powers (transparency).
pub fn path_nli(
    variant: CfmVariant,
    params: &CfmParams,
    path: &LinkPath,
    plan: &ChannelPlan,
) -> Result<f64> {
    let spans = path.spans();
    let mut total = 0.0;
    for i in 0..spans.len() {
        total += span_nli(variant, params, &spans[i], plan, &spans[..i])?.total_w;
    }
    Ok(total)
}

/// First-span NLI coefficient eta = NLI / P^3 of the CUT under a uniform
/// launch power, in 1/W^2. The closed forms are cubic in a uniform power, so
/// eta does not depend on the probe power used.
pub fn span_nli_coefficient(
    variant: CfmVariant,
    params: &CfmParams,
    span: &FiberSpan,
    plan: &ChannelPlan,
) -> Result<f64> {
    let probe_w = 1e-3;
    let uniform = plan.with_uniform_power(probe_w);
    let nli = span_nli(variant, params, span, &uniform, &[])?.total_w;
    Ok(nli / probe_w.powi(3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::{ModulationFormat, DEFAULT_SYMBOL_RATE_BAUD};
    use crate::rng::stream_rng;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    fn ref_span() -> FiberSpan {
        FiberSpan::reference(80e3)
    }

    fn two_channel_plan(power_w: f64) -> ChannelPlan {
        // Deterministic adjacent busy pair: the CUT and its upper neighbor.
        let plan = ChannelPlan::full_cband(ModulationFormat::Pm16Qam, power_w);
        let cut = plan.cut_index();
        let keep = [cut, cut + 1];
        let chans: Vec<_> = plan
            .channels()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut c = *c;
                c.busy = keep.contains(&i);
                c
            })
            .collect();
        ChannelPlan::new(chans, cut).unwrap()
    }

    #[test]
    fn psi_self_pinned_value_and_limits() {
        let span = ref_span();
        let v = psi_self(&span, DEFAULT_SYMBOL_RATE_BAUD).unwrap();
        assert!(close(v, 2.8897356, 1e-6), "psi_self {v}");
        assert_eq!(psi_self(&span, 0.0).unwrap(), 0.0);
        // Strictly increasing in the rate.
        assert!(psi_self(&span, 32e9).unwrap() < v);
        // Strictly increasing in l_eff_a (lower attenuation).
        let lower_att =
            FiberSpan::new(80e3, 0.18, -21.45e-27, 1.31e-3, 6.0, 0).unwrap();
        assert!(psi_self(&lower_att, DEFAULT_SYMBOL_RATE_BAUD).unwrap() > v);
        // Large-argument asymptote: doubling l_eff_a adds about ln 2.
        let half_att = FiberSpan::new(80e3, 0.105, -21.45e-27, 1.31e-3, 6.0, 0).unwrap();
        let dv = psi_self(&half_att, DEFAULT_SYMBOL_RATE_BAUD).unwrap() - v;
        assert!((dv - std::f64::consts::LN_2).abs() < 0.01, "delta {dv}");
        // Zero dispersion is rejected.
        let zero_b2 = FiberSpan::new(80e3, 0.21, 0.0, 1.31e-3, 6.0, 0).unwrap();
        assert!(psi_self(&zero_b2, DEFAULT_SYMBOL_RATE_BAUD).is_err());
    }

    #[test]
    fn psi_cross_pinned_value_and_monotonicity() {
        let span = ref_span();
        let r = DEFAULT_SYMBOL_RATE_BAUD;
        let v75 = psi_cross(&span, r, r, 75e9).unwrap();
        assert!(close(v75, 0.91018905, 1e-6), "psi_cross {v75}");
        assert!(v75 > 0.0);
        assert!(v75 < psi_self(&span, r).unwrap());
        let v150 = psi_cross(&span, r, r, 150e9).unwrap();
        assert!(v150 < v75);
        // Degenerate interferer contributes nothing.
        assert!(psi_cross(&span, r, 1.0, 75e9).unwrap() < 1e-9);
        // Overlapping channels are rejected.
        assert!(psi_cross(&span, r, r, 60e9).is_err());
    }

    #[test]
    fn single_channel_sci_pinned_value() {
        let p = CfmParams::shipped();
        let span = ref_span();
        let power = 1.285e-3;
        let mut rng = stream_rng(0, 1);
        let plan =
            ChannelPlan::build_cband_plan(1, ModulationFormat::Pm16Qam, power, &mut rng).unwrap();
        let b = span_nli(CfmVariant::WoMdct1, &p, &span, &plan, &[]).unwrap();
        assert!(b.xpm_per_interferer_w.is_empty());
        assert_eq!(b.correction_w, 0.0);
        assert!(close(b.total_w, 2.23936e-7, 1e-4), "sci {}", b.total_w);
        let eta = b.total_w / power.powi(3);
        assert!(close(eta, 105.5395, 1e-4), "eta {eta}");
    }

    #[test]
    fn single_channel_mdct_self_correction() {
        let p = CfmParams::shipped();
        let span = ref_span();
        let mut rng = stream_rng(0, 1);
        let plan =
            ChannelPlan::build_cband_plan(1, ModulationFormat::Pm16Qam, 1.285e-3, &mut rng)
                .unwrap();
        let w1 = span_nli(CfmVariant::WoMdct1, &p, &span, &plan, &[]).unwrap();
        let md = span_nli(CfmVariant::Mdct, &p, &span, &plan, &[]).unwrap();
        assert!(md.xpm_per_interferer_w.is_empty());
        // First span: correction = phi * c_self * sci, with rho = 1.
        let expect = -0.68 * 0.2 * w1.sci_w;
        assert!(close(md.correction_w, expect, 1e-12));
        assert!(close(md.total_w, w1.total_w + expect, 1e-12));
    }

    #[test]
    fn decay_pinned_value_and_monotonicity() {
        let p = CfmParams::shipped();
        assert_eq!(accumulated_dispersion_decay(&p, &[], DEFAULT_SYMBOL_RATE_BAUD), 1.0);
        let one = [ref_span()];
        let rho1 = accumulated_dispersion_decay(&p, &one, DEFAULT_SYMBOL_RATE_BAUD);
        assert!(close(rho1, 0.0280226, 1e-4), "rho {rho1}");
        let two = [ref_span(), ref_span()];
        let rho2 = accumulated_dispersion_decay(&p, &two, DEFAULT_SYMBOL_RATE_BAUD);
        assert!(rho2 < rho1 && rho2 > 0.0);
    }

    #[test]
    fn gaussian_reduction_is_bitwise() {
        let p = CfmParams::shipped();
        let span = ref_span();
        let mut rng = stream_rng(5, 2);
        let plan =
            ChannelPlan::build_cband_plan(12, ModulationFormat::Pm64Qam, 1.1e-3, &mut rng)
                .unwrap()
                .with_gaussian_statistics();
        let before = [ref_span(); 3];
        let w1 = span_nli(CfmVariant::WoMdct1, &p, &span, &plan, &before).unwrap();
        let m1 = span_nli(CfmVariant::Mct1, &p, &span, &plan, &before).unwrap();
        let md = span_nli(CfmVariant::Mdct, &p, &span, &plan, &before).unwrap();
        let w2 = span_nli(CfmVariant::WoMdct2, &p, &span, &plan, &before).unwrap();
        let m2 = span_nli(CfmVariant::Mct2, &p, &span, &plan, &before).unwrap();
        assert_eq!(w1.total_w.to_bits(), m1.total_w.to_bits());
        assert_eq!(w1.total_w.to_bits(), md.total_w.to_bits());
        assert_eq!(w2.total_w.to_bits(), m2.total_w.to_bits());
    }

    #[test]
    fn correction_sign_orders_variants() {
        let p = CfmParams::shipped();
        let span = ref_span();
        for fmt in ModulationFormat::ALL {
            let mut rng = stream_rng(9, fmt.level() as u64);
            let plan = ChannelPlan::build_cband_plan(15, fmt, 1.2e-3, &mut rng).unwrap();
            let w1 = span_nli(CfmVariant::WoMdct1, &p, &span, &plan, &[]).unwrap().total_w;
            let w2 = span_nli(CfmVariant::WoMdct2, &p, &span, &plan, &[]).unwrap().total_w;
            let m1 = span_nli(CfmVariant::Mct1, &p, &span, &plan, &[]).unwrap().total_w;
            let m2 = span_nli(CfmVariant::Mct2, &p, &span, &plan, &[]).unwrap().total_w;
            let md = span_nli(CfmVariant::Mdct, &p, &span, &plan, &[]).unwrap().total_w;
            assert!(m1 <= w1 && m2 <= w2, "{}", fmt.name());
            assert!(md <= m1, "{}", fmt.name());
            assert!(md > 0.0);
        }
    }

    #[test]
    fn breakdown_sums_and_positivity() {
        let p = CfmParams::shipped();
        let span = ref_span();
        let mut rng = stream_rng(3, 0);
        let plan =
            ChannelPlan::build_cband_plan(10, ModulationFormat::PmBpsk, 1.3e-3, &mut rng).unwrap();
        for v in CfmVariant::ALL {
            let b = span_nli(v, &p, &span, &plan, &[]).unwrap();
            let xpm: f64 = b.xpm_per_interferer_w.iter().map(|(_, w)| w).sum();
            assert!(close(b.sci_w + xpm + b.correction_w, b.total_w, 1e-12));
            assert!(b.sci_w >= 0.0);
            assert!(b.xpm_per_interferer_w.iter().all(|&(_, w)| w >= 0.0));
            assert!(b.total_w > 0.0, "{}", v.name());
        }
    }

    #[test]
    fn pathological_coefficients_are_rejected() {
        let mut p = CfmParams::shipped();
        p.self_kurtosis_coefficient = 1.5;
        let span = ref_span();
        let mut rng = stream_rng(0, 3);
        // Single BPSK channel, phi = -1: eta_sci * (1 - 1.5) < 0.
        let plan =
            ChannelPlan::build_cband_plan(1, ModulationFormat::PmBpsk, 1e-3, &mut rng).unwrap();
        assert!(span_nli(CfmVariant::Mdct, &p, &span, &plan, &[]).is_err());
    }

    #[test]
    fn path_additivity_and_mdct_bounds() {
        let p = CfmParams::shipped();
        let span = ref_span();
        let plan = ChannelPlan::full_cband(ModulationFormat::Pm16Qam, 1.3e-3);
        let n = 7;
        let path = LinkPath::homogeneous(span, n).unwrap();

        let w1_single = span_nli(CfmVariant::WoMdct1, &p, &span, &plan, &[]).unwrap().total_w;
        let w1_path = path_nli(CfmVariant::WoMdct1, &p, &path, &plan).unwrap();
        assert!(close(w1_path, n as f64 * w1_single, 1e-12));

        let md_first = span_nli(CfmVariant::Mdct, &p, &span, &plan, &[]).unwrap().total_w;
        let md_path = path_nli(CfmVariant::Mdct, &p, &path, &plan).unwrap();
        // Corrections are negative and the self term decays, so the total sits
        // between n times MDCT's own first span and n times the uncorrected value.
        assert!(md_path > n as f64 * md_first);
        assert!(md_path < n as f64 * w1_single);

        // Heterogeneous two-span path equals the sum of its two independent spans.
        let path2 = LinkPath::from_span_lengths_m(&[50e3, 120e3]).unwrap();
        let s50 = FiberSpan::reference(50e3);
        let s120 = FiberSpan::reference(120e3);
        let sum = span_nli(CfmVariant::WoMdct1, &p, &s50, &plan, &[]).unwrap().total_w
            + span_nli(CfmVariant::WoMdct1, &p, &s120, &plan, &[]).unwrap().total_w;
        assert!(close(path_nli(CfmVariant::WoMdct1, &p, &path2, &plan).unwrap(), sum, 1e-12));
    }

    #[test]
    fn mdct_converges_to_mct1_with_span_count() {
        let p = CfmParams::shipped();
        let span = ref_span();
        let plan = ChannelPlan::full_cband(ModulationFormat::Pm16Qam, 1.3e-3);
        let mut prev_gap = f64::INFINITY;
        for n in [1usize, 2, 4, 8, 16, 32] {
            let path = LinkPath::homogeneous(span, n).unwrap();
            let m1 = path_nli(CfmVariant::Mct1, &p, &path, &plan).unwrap();
            let md = path_nli(CfmVariant::Mdct, &p, &path, &plan).unwrap();
            // Gap in dB between the two NLI totals, decreasing toward zero.
            let gap = 10.0 * (m1 / md).log10();
            assert!(gap > 0.0);
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap < 0.02, "gap at 32 spans {prev_gap} dB");
    }

    #[test]
    fn cubic_homogeneity() {
        let p = CfmParams::shipped();
        let span = ref_span();
        let mut rng = stream_rng(12, 0);
        let plan =
            ChannelPlan::build_cband_plan(9, ModulationFormat::Pm32Qam, 0.9e-3, &mut rng).unwrap();
        for v in CfmVariant::ALL {
            let base = span_nli(v, &p, &span, &plan, &[]).unwrap().total_w;
            for c in [0.25, 0.5, 2.0, 3.7] {
                let scaled_plan = plan.with_power_scaled(c);
                let scaled = span_nli(v, &p, &span, &scaled_plan, &[]).unwrap().total_w;
                let c3: f64 = c * c * c;
                assert!(
                    close(scaled, c3 * base, 1e-9),
                    "{} c={c}: {scaled} vs {}",
                    v.name(),
                    c3 * base
                );
            }
        }
    }

    #[test]
    fn backbone_consistency_at_wide_spacing() {
        // At 20 symbol rates of spacing the two cross families agree within 20%.
        let p = CfmParams::shipped();
        let span = ref_span();
        let r = DEFAULT_SYMBOL_RATE_BAUD;
        let df = 20.0 * r;
        let asinh_term = p.cross_multiplicity
            * super::asinh_prefactor(&span, r)
            * psi_cross(&span, r, r, df).unwrap();
        let atan_term = super::atan_family(p.atan_coefficient, &span, r, df, r);
        let ratio = asinh_term / atan_term;
        assert!((0.8..=1.2).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn two_channel_xpm_pinned_value() {
        let p = CfmParams::shipped();
        let span = ref_span();
        let plan = two_channel_plan(1e-3);
        let b = span_nli(CfmVariant::WoMdct1, &p, &span, &plan, &[]).unwrap();
        assert_eq!(b.xpm_per_interferer_w.len(), 1);
        // eta_xpm at 75 GHz spacing with unit multiplicity.
        let eta = b.xpm_per_interferer_w[0].1 / 1e-9;
        assert!(close(eta, 33.242, 1e-3), "eta_xpm {eta}");
    }

    #[test]
    fn variant_names_round_trip() {
        for v in CfmVariant::ALL {
            assert_eq!(CfmVariant::from_name(v.name()).unwrap(), v);
        }
        assert_eq!(CfmVariant::from_name("womdct1").unwrap(), CfmVariant::WoMdct1);
        assert_eq!(CfmVariant::from_name("MCT-2").unwrap(), CfmVariant::Mct2);
        assert!(CfmVariant::from_name("EGN").is_err());
    }
}
