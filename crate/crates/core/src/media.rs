//! Media and channel data model: fiber spans, modulation formats, channel
//! plans, and lightpath span sequences.
//!
//! All types are immutable value objects after construction and can be shared
//! freely between worker threads.

use serde::{Deserialize, Serialize};

use crate::error::{QotError, Result};
use crate::rng::{uniform_index, StreamRng};
use crate::units::attenuation_to_alpha_p;

/// Reference fiber attenuation in dB/km.
pub const REFERENCE_ATTENUATION_DB_PER_KM: f64 = 0.21;
/// Reference group velocity dispersion in s^2/m (negative for standard
/// single-mode fiber in the C-band).
pub const REFERENCE_BETA2_S2_PER_M: f64 = -21.45e-27;
/// Reference nonlinearity coefficient in (W*m)^-1.
pub const REFERENCE_GAMMA_PER_W_M: f64 = 1.31e-3;
/// Reference amplifier noise figure in dB.
pub const REFERENCE_NOISE_FIGURE_DB: f64 = 6.0;
/// Reference span length in meters.
pub const REFERENCE_SPAN_LENGTH_M: f64 = 80e3;

/// Number of channel slots in the C-band build.
pub const CBAND_CHANNELS: usize = 60;
/// Center frequency of the first (lowest) slot in Hz.
pub const CBAND_FIRST_CENTER_HZ: f64 = 191.61e12;
/// Uniform slot width in Hz.
pub const CBAND_SLOT_WIDTH_HZ: f64 = 75e9;
/// Default symbol rate in baud.
pub const DEFAULT_SYMBOL_RATE_BAUD: f64 = 64e9;

/// Center frequency of slot `index` on the C-band grid.
pub fn cband_center_hz(index: usize) -> f64 {
    CBAND_FIRST_CENTER_HZ + index as f64 * CBAND_SLOT_WIDTH_HZ
}

/// One amplified fiber span. The booster at the span end exactly compensates
/// the span loss (transparency), so gain_dB = attenuation * length_km.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberSpan {
    pub length_m: f64,
    pub attenuation_db_per_km: f64,
    pub beta2_s2_per_m: f64,
    pub gamma_per_w_m: f64,
    pub noise_figure_db: f64,
    pub span_index_in_link: usize,
}

impl FiberSpan {
    pub fn new(
        length_m: f64,
        attenuation_db_per_km: f64,
        beta2_s2_per_m: f64,
        gamma_per_w_m: f64,
        noise_figure_db: f64,
        span_index_in_link: usize,
    ) -> Result<Self> {
        if !(length_m.is_finite() && length_m > 0.0) {
            return Err(QotError::InvalidParameter(format!(
                "span length must be positive, got {length_m} m"
            )));
        }
        attenuation_to_alpha_p(attenuation_db_per_km)?;
        if !(gamma_per_w_m.is_finite() && gamma_per_w_m > 0.0) {
            return Err(QotError::InvalidParameter(format!(
                "gamma must be positive, got {gamma_per_w_m}"
            )));
        }
        if !(noise_figure_db.is_finite() && noise_figure_db >= 0.0) {
            return Err(QotError::InvalidParameter(format!(
                "noise figure must be nonnegative, got {noise_figure_db} dB"
            )));
        }
        if !beta2_s2_per_m.is_finite() {
            return Err(QotError::InvalidParameter("beta2 must be finite".into()));
        }
        Ok(FiberSpan {
            length_m,
            attenuation_db_per_km,
            beta2_s2_per_m,
            gamma_per_w_m,
            noise_figure_db,
            span_index_in_link,
        })
    }

    /// A span of the reference fiber with the given length.
    pub fn reference(length_m: f64) -> Self {
        FiberSpan::new(
            length_m,
            REFERENCE_ATTENUATION_DB_PER_KM,
            REFERENCE_BETA2_S2_PER_M,
            REFERENCE_GAMMA_PER_W_M,
            REFERENCE_NOISE_FIGURE_DB,
            0,
        )
        .expect("reference span parameters are valid")
    }

    /// Power attenuation coefficient in Np/m.
    pub fn alpha_p(&self) -> f64 {
        attenuation_to_alpha_p(self.attenuation_db_per_km)
            .expect("validated at construction")
    }

    /// Transparency amplifier gain, linear.
    pub fn gain_linear(&self) -> f64 {
        (self.alpha_p() * self.length_m).exp()
    }

    /// Transparency amplifier gain in dB; exactly attenuation * length_km.
    pub fn gain_db(&self) -> f64 {
        self.attenuation_db_per_km * self.length_m / 1000.0
    }

    /// Effective length (1 - e^(-alpha_p L)) / alpha_p in meters.
    pub fn effective_length_m(&self) -> f64 {
        let a = self.alpha_p();
        (1.0 - (-a * self.length_m).exp()) / a
    }

    /// Asymptotic effective length 1 / alpha_p in meters.
    pub fn asymptotic_effective_length_m(&self) -> f64 {
        1.0 / self.alpha_p()
    }

    /// |beta2| in s^2/m; the sign is carried in the data for provenance only.
    pub fn abs_beta2(&self) -> f64 {
        self.beta2_s2_per_m.abs()
    }
}

/// The six polarization-multiplexed modulation formats, by level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModulationFormat {
    PmBpsk,
    PmQpsk,
    Pm8Qam,
    Pm16Qam,
    Pm32Qam,
    Pm64Qam,
}

impl ModulationFormat {
    pub const ALL: [ModulationFormat; 6] = [
        ModulationFormat::PmBpsk,
        ModulationFormat::PmQpsk,
        ModulationFormat::Pm8Qam,
        ModulationFormat::Pm16Qam,
        ModulationFormat::Pm32Qam,
        ModulationFormat::Pm64Qam,
    ];

    /// Format level 1..=6.
    pub fn level(self) -> u8 {
        match self {
            ModulationFormat::PmBpsk => 1,
            ModulationFormat::PmQpsk => 2,
            ModulationFormat::Pm8Qam => 3,
            ModulationFormat::Pm16Qam => 4,
            ModulationFormat::Pm32Qam => 5,
            ModulationFormat::Pm64Qam => 6,
        }
    }

    pub fn from_level(level: u8) -> Result<Self> {
        if level == 0 {
            return Err(QotError::InvalidParameter("format levels start at 1".into()));
        }
        Self::ALL
            .get(level as usize - 1)
            .copied()
            .ok_or_else(|| QotError::InvalidParameter(format!("no format level {level}")))
    }

    pub fn name(self) -> &'static str {
        match self {
            ModulationFormat::PmBpsk => "PM-BPSK",
            ModulationFormat::PmQpsk => "PM-QPSK",
            ModulationFormat::Pm8Qam => "PM-8QAM",
            ModulationFormat::Pm16Qam => "PM-16QAM",
            ModulationFormat::Pm32Qam => "PM-32QAM",
            ModulationFormat::Pm64Qam => "PM-64QAM",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| QotError::InvalidParameter(format!("unknown format '{name}'")))
    }

    /// Bits per symbol across both polarizations.
    pub fn bits_per_symbol(self) -> u32 {
        2 * self.level() as u32
    }

    /// Net bit rate per carrier in Gb/s.
    pub fn rate_per_carrier_gbps(self) -> f64 {
        92.0 * self.level() as f64
    }

    /// Operative GSNR threshold in dB used by the simulations.
    pub fn gsnr_threshold_db(self) -> f64 {
        match self {
            ModulationFormat::PmBpsk => 5.52,
            ModulationFormat::PmQpsk => 8.53,
            ModulationFormat::Pm8Qam => 12.51,
            ModulationFormat::Pm16Qam => 15.19,
            ModulationFormat::Pm32Qam => 18.19,
            ModulationFormat::Pm64Qam => 21.12,
        }
    }

    /// Constellation points (one polarization tributary), unit mean energy.
    pub fn constellation(self) -> Vec<(f64, f64)> {
        let raw: Vec<(f64, f64)> = match self {
            ModulationFormat::PmBpsk => vec![(1.0, 0.0), (-1.0, 0.0)],
            ModulationFormat::PmQpsk => square_grid(&[-1.0, 1.0]),
            // Rectangular 2x4 grid.
            ModulationFormat::Pm8Qam => {
                let mut pts = Vec::new();
                for i in [-3.0, -1.0, 1.0, 3.0] {
                    for q in [-1.0, 1.0] {
                        pts.push((i, q));
                    }
                }
                pts
            }
            ModulationFormat::Pm16Qam => square_grid(&[-3.0, -1.0, 1.0, 3.0]),
            // Cross constellation: 6x6 grid minus the four corners.
            ModulationFormat::Pm32Qam => {
                let axis: [f64; 6] = [-5.0, -3.0, -1.0, 1.0, 3.0, 5.0];
                let mut pts = Vec::new();
                for i in axis {
                    for q in axis {
                        if i.abs() == 5.0 && q.abs() == 5.0 {
                            continue;
                        }
                        pts.push((i, q));
                    }
                }
                pts
            }
            ModulationFormat::Pm64Qam => {
                square_grid(&[-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0])
            }
        };
        normalize_energy(raw)
    }

    /// Excess kurtosis of the constellation, computed from the points.
    pub fn excess_kurtosis(self) -> f64 {
        excess_kurtosis(&self.constellation())
    }
}

fn square_grid(axis: &[f64]) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(axis.len() * axis.len());
    for &i in axis {
        for &q in axis {
            pts.push((i, q));
        }
    }
    pts
}

fn normalize_energy(points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mean_e: f64 =
        points.iter().map(|(i, q)| i * i + q * q).sum::<f64>() / points.len() as f64;
    let s = mean_e.sqrt();
    points.into_iter().map(|(i, q)| (i / s, q / s)).collect()
}

/// Excess kurtosis E[|a|^4] / E[|a|^2]^2 - 2 of a point set; invariant under
/// global scaling and rotation.
pub fn excess_kurtosis(points: &[(f64, f64)]) -> f64 {
    assert!(!points.is_empty(), "kurtosis of an empty point set");
    let n = points.len() as f64;
    let m2: f64 = points.iter().map(|(i, q)| i * i + q * q).sum::<f64>() / n;
    let m4: f64 = points
        .iter()
        .map(|(i, q)| {
            let e = i * i + q * q;
            e * e
        })
        .sum::<f64>()
        / n;
    assert!(m2 > 0.0, "kurtosis of a zero-power point set");
    m4 / (m2 * m2) - 2.0
}

/// One slot of a channel plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub center_frequency_hz: f64,
    pub symbol_rate_baud: f64,
    pub slot_width_hz: f64,
    pub launch_power_w: f64,
    pub format: ModulationFormat,
    /// Cached excess kurtosis of the carried format (overridable for
    /// Gaussian-statistics studies).
    pub excess_kurtosis: f64,
    pub busy: bool,
}

/// An ordered, slot-disjoint comb of channels with a designated channel under
/// test (CUT).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelPlan {
    channels: Vec<Channel>,
    cut_index: usize,
}

impl ChannelPlan {
    pub fn new(channels: Vec<Channel>, cut_index: usize) -> Result<Self> {
        if channels.is_empty() {
            return Err(QotError::InvalidPlan("no channels".into()));
        }
        for w in channels.windows(2) {
            if w[1].center_frequency_hz <= w[0].center_frequency_hz {
                return Err(QotError::InvalidPlan(
                    "channels must be sorted by center frequency".into(),
                ));
            }
            let upper = w[0].center_frequency_hz + w[0].slot_width_hz / 2.0;
            let lower = w[1].center_frequency_hz - w[1].slot_width_hz / 2.0;
            if upper > lower + 1e-3 {
                return Err(QotError::InvalidPlan("overlapping slots".into()));
            }
        }
        for (i, ch) in channels.iter().enumerate() {
            if !(ch.launch_power_w.is_finite() && ch.launch_power_w >= 0.0) {
                return Err(QotError::InvalidPlan(format!(
                    "channel {i} launch power must be nonnegative"
                )));
            }
            if ch.symbol_rate_baud <= 0.0 || ch.symbol_rate_baud > ch.slot_width_hz {
                return Err(QotError::InvalidPlan(format!(
                    "channel {i} symbol rate must lie in (0, slot width]"
                )));
            }
        }
        match channels.get(cut_index) {
            Some(c) if c.busy => Ok(ChannelPlan { channels, cut_index }),
            Some(_) => Err(QotError::InvalidPlan("CUT channel is not busy".into())),
            None => Err(QotError::InvalidPlan("CUT index out of range".into())),
        }
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn cut_index(&self) -> usize {
        self.cut_index
    }

    pub fn cut(&self) -> &Channel {
        &self.channels[self.cut_index]
    }

    /// Busy channels other than the CUT, with their ordinals.
    pub fn interferers(&self) -> impl Iterator<Item = (usize, &Channel)> {
        self.channels
            .iter()
            .enumerate()
            .filter(move |(i, c)| *i != self.cut_index && c.busy)
    }

    pub fn busy_count(&self) -> usize {
        self.channels.iter().filter(|c| c.busy).count()
    }

    /// Returns a copy with every channel's launch power set to `power_w`.
    pub fn with_uniform_power(&self, power_w: f64) -> ChannelPlan {
        let mut plan = self.clone();
        for ch in &mut plan.channels {
            ch.launch_power_w = power_w;
        }
        plan
    }

    /// Returns a copy with every launch power multiplied by `factor`.
    pub fn with_power_scaled(&self, factor: f64) -> ChannelPlan {
        let mut plan = self.clone();
        for ch in &mut plan.channels {
            ch.launch_power_w *= factor;
        }
        plan
    }

    /// Returns a copy with every channel's excess kurtosis forced to zero
    /// (circular-Gaussian signal statistics).
    pub fn with_gaussian_statistics(&self) -> ChannelPlan {
        let mut plan = self.clone();
        for ch in &mut plan.channels {
            ch.excess_kurtosis = 0.0;
        }
        plan
    }

    /// Fully loaded C-band plan: all 60 slots busy with `format` at
    /// `launch_power_w`, CUT at the central slot.
    pub fn full_cband(format: ModulationFormat, launch_power_w: f64) -> ChannelPlan {
        let phi = format.excess_kurtosis();
        let channels = (0..CBAND_CHANNELS)
            .map(|i| Channel {
                center_frequency_hz: cband_center_hz(i),
                symbol_rate_baud: DEFAULT_SYMBOL_RATE_BAUD,
                slot_width_hz: CBAND_SLOT_WIDTH_HZ,
                launch_power_w,
                format,
                excess_kurtosis: phi,
                busy: true,
            })
            .collect();
        ChannelPlan::new(channels, CBAND_CHANNELS / 2 - 1)
            .expect("full C-band plan is structurally valid")
    }

    /// C-band plan with `n_busy` channels packed outward from the central
    /// slot, all carrying `format` at `launch_power_w`; the CUT sits at the
    /// central slot. The deterministic worst-case counterpart of
    /// [`ChannelPlan::build_cband_plan`].
    pub fn center_loaded(
        n_busy: usize,
        format: ModulationFormat,
        launch_power_w: f64,
    ) -> Result<ChannelPlan> {
        if n_busy == 0 || n_busy > CBAND_CHANNELS {
            return Err(QotError::InvalidPlan(format!(
                "busy channel count must be in 1..={CBAND_CHANNELS}, got {n_busy}"
            )));
        }
        let cut_slot = CBAND_CHANNELS / 2 - 1;
        let mut busy = vec![false; CBAND_CHANNELS];
        busy[cut_slot] = true;
        let (mut lo, mut hi) = (cut_slot, cut_slot);
        let mut placed = 1;
        while placed < n_busy {
            if hi + 1 < CBAND_CHANNELS {
                hi += 1;
                busy[hi] = true;
                placed += 1;
            }
            if placed < n_busy && lo > 0 {
                lo -= 1;
                busy[lo] = true;
                placed += 1;
            }
        }
        let phi = format.excess_kurtosis();
        let channels: Vec<Channel> = (0..CBAND_CHANNELS)
            .map(|i| Channel {
                center_frequency_hz: cband_center_hz(i),
                symbol_rate_baud: DEFAULT_SYMBOL_RATE_BAUD,
                slot_width_hz: CBAND_SLOT_WIDTH_HZ,
                launch_power_w,
                format,
                excess_kurtosis: phi,
                busy: busy[i],
            })
            .collect();
        ChannelPlan::new(channels, cut_slot)
    }

    /// C-band plan with `n_busy` busy slots chosen uniformly at random and the
    /// CUT drawn uniformly among the busy slots.
    pub fn build_cband_plan(
        n_busy: usize,
        format: ModulationFormat,
        launch_power_w: f64,
        rng: &mut StreamRng,
    ) -> Result<ChannelPlan> {
        if n_busy == 0 || n_busy > CBAND_CHANNELS {
            return Err(QotError::InvalidPlan(format!(
                "busy channel count must be in 1..={CBAND_CHANNELS}, got {n_busy}"
            )));
        }
        // Partial Fisher-Yates over the slot indices.
        let mut slots: Vec<usize> = (0..CBAND_CHANNELS).collect();
        for i in 0..n_busy {
            let j = i + uniform_index(rng, CBAND_CHANNELS - i);
            slots.swap(i, j);
        }
        let mut busy: Vec<usize> = slots[..n_busy].to_vec();
        busy.sort_unstable();
        let cut_slot = busy[uniform_index(rng, n_busy)];

        let phi = format.excess_kurtosis();
        let channels: Vec<Channel> = (0..CBAND_CHANNELS)
            .map(|i| Channel {
                center_frequency_hz: cband_center_hz(i),
                symbol_rate_baud: DEFAULT_SYMBOL_RATE_BAUD,
                slot_width_hz: CBAND_SLOT_WIDTH_HZ,
                launch_power_w,
                format,
                excess_kurtosis: phi,
                busy: busy.binary_search(&i).is_ok(),
            })
            .collect();
        ChannelPlan::new(channels, cut_slot)
    }
}

/// The span sequence of a lightpath, grouped by link ordinal.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkPath {
    spans: Vec<FiberSpan>,
    /// Start offset of each link's first span within `spans`.
    link_offsets: Vec<usize>,
}

impl LinkPath {
    pub fn new(links: Vec<Vec<FiberSpan>>) -> Result<Self> {
        let mut spans = Vec::new();
        let mut link_offsets = Vec::with_capacity(links.len());
        for link in links {
            link_offsets.push(spans.len());
            for (s, mut span) in link.into_iter().enumerate() {
                span.span_index_in_link = s;
                spans.push(span);
            }
        }
        if spans.is_empty() {
            return Err(QotError::InvalidParameter(
                "a lightpath needs at least one span".into(),
            ));
        }
        Ok(LinkPath { spans, link_offsets })
    }

    /// Single-link path of reference-fiber spans with the given lengths.
    pub fn from_span_lengths_m(lengths_m: &[f64]) -> Result<Self> {
        let link: Vec<FiberSpan> = lengths_m
            .iter()
            .map(|&l| {
                FiberSpan::new(
                    l,
                    REFERENCE_ATTENUATION_DB_PER_KM,
                    REFERENCE_BETA2_S2_PER_M,
                    REFERENCE_GAMMA_PER_W_M,
                    REFERENCE_NOISE_FIGURE_DB,
                    0,
                )
            })
            .collect::<Result<_>>()?;
        LinkPath::new(vec![link])
    }

    /// Homogeneous single-link path: `n` identical copies of `span`.
    pub fn homogeneous(span: FiberSpan, n: usize) -> Result<Self> {
        LinkPath::new(vec![vec![span; n]])
    }

    pub fn spans(&self) -> &[FiberSpan] {
        &self.spans
    }

    pub fn n_spans(&self) -> usize {
        self.spans.len()
    }

    pub fn n_links(&self) -> usize {
        self.link_offsets.len()
    }

    pub fn total_length_m(&self) -> f64 {
        self.spans.iter().map(|s| s.length_m).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::units::db_to_linear;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn transparency_gain_is_exact() {
        for lk in [50.0, 80.0, 101.3, 120.0] {
            let span = FiberSpan::reference(lk * 1e3);
            assert!((span.gain_db() - 0.21 * lk).abs() < 1e-12);
            // gain_linear agrees with the dB figure to representation noise
            let from_db = db_to_linear(span.gain_db());
            assert!(close(span.gain_linear(), from_db, 1e-12));
        }
        let span = FiberSpan::reference(80e3);
        assert!(close(span.gain_linear(), 47.863, 1e-4));
    }

    #[test]
    fn effective_lengths_reference_values() {
        let span = FiberSpan::reference(80e3);
        assert!(close(span.effective_length_m(), 20248.6, 1e-4));
        assert!(close(span.asymptotic_effective_length_m(), 20680.7, 1e-4));
        assert!(span.effective_length_m() < span.length_m);
        assert!(span.effective_length_m() < span.asymptotic_effective_length_m());
    }

    #[test]
    fn effective_length_short_span_limit() {
        let span = FiberSpan::reference(0.5);
        assert!(close(span.effective_length_m(), 0.5, 1e-4));
    }

    #[test]
    fn span_domain_checks() {
        assert!(FiberSpan::new(0.0, 0.21, -21.45e-27, 1.31e-3, 6.0, 0).is_err());
        assert!(FiberSpan::new(80e3, 0.0, -21.45e-27, 1.31e-3, 6.0, 0).is_err());
        assert!(FiberSpan::new(80e3, 0.21, -21.45e-27, 0.0, 6.0, 0).is_err());
        assert!(FiberSpan::new(80e3, 0.21, -21.45e-27, 1.31e-3, -1.0, 0).is_err());
    }

    #[test]
    fn kurtosis_matches_brute_force_expectations() {
        let cases = [
            (ModulationFormat::PmBpsk, -1.0),
            (ModulationFormat::PmQpsk, -1.0),
            (ModulationFormat::Pm8Qam, -0.5555555555555556),
            (ModulationFormat::Pm16Qam, -0.68),
            (ModulationFormat::Pm32Qam, -0.69),
            (ModulationFormat::Pm64Qam, -0.6190476190476191),
        ];
        for (fmt, phi) in cases {
            assert!(
                close(fmt.excess_kurtosis(), phi, 1e-12),
                "{}: {} vs {}",
                fmt.name(),
                fmt.excess_kurtosis(),
                phi
            );
        }
    }

    #[test]
    fn kurtosis_scale_and_rotation_invariance() {
        let pts = ModulationFormat::Pm16Qam.constellation();
        let phi = excess_kurtosis(&pts);
        for c in [0.1, 3.0, -2.5] {
            let scaled: Vec<_> = pts.iter().map(|(i, q)| (c * i, c * q)).collect();
            assert!(close(excess_kurtosis(&scaled), phi, 1e-12));
        }
        let (s, co) = (0.6f64.sin(), 0.6f64.cos());
        let rotated: Vec<_> = pts
            .iter()
            .map(|(i, q)| (co * i - s * q, s * i + co * q))
            .collect();
        assert!(close(excess_kurtosis(&rotated), phi, 1e-12));
    }

    #[test]
    fn kurtosis_gaussian_sample_is_near_zero() {
        // Box-Muller circular Gaussian cloud; kurtosis converges to 0.
        let mut rng = stream_rng(11, 0);
        let mut pts = Vec::with_capacity(20000);
        for _ in 0..20000 {
            let u1: f64 = crate::rng::uniform_f64(&mut rng).max(1e-12);
            let u2: f64 = crate::rng::uniform_f64(&mut rng);
            let r = (-2.0 * u1.ln()).sqrt();
            let th = 2.0 * std::f64::consts::PI * u2;
            pts.push((r * th.cos(), r * th.sin()));
        }
        assert!(excess_kurtosis(&pts).abs() < 0.05);
    }

    #[test]
    fn format_metadata() {
        let rates: Vec<f64> = ModulationFormat::ALL
            .iter()
            .map(|f| f.rate_per_carrier_gbps())
            .collect();
        assert_eq!(rates, vec![92.0, 184.0, 276.0, 368.0, 460.0, 552.0]);
        let mut prev = f64::NEG_INFINITY;
        for f in ModulationFormat::ALL {
            assert!(f.gsnr_threshold_db() > prev);
            prev = f.gsnr_threshold_db();
            assert!(f.excess_kurtosis() <= 0.0);
            assert_eq!(ModulationFormat::from_level(f.level()).unwrap(), f);
            assert_eq!(ModulationFormat::from_name(f.name()).unwrap(), f);
        }
        assert!(ModulationFormat::from_level(0).is_err());
        assert!(ModulationFormat::from_level(7).is_err());
        assert!(ModulationFormat::from_name("PM-128QAM").is_err());
    }

    #[test]
    fn grid_geometry() {
        assert_eq!(cband_center_hz(0), 191.61e12);
        for i in 1..CBAND_CHANNELS {
            let step = cband_center_hz(i) - cband_center_hz(i - 1);
            assert!((step - 75e9).abs() < 1.0);
        }
        // 60 slots of 75 GHz fit inside a 4.8 THz C-band window.
        let width = cband_center_hz(CBAND_CHANNELS - 1) - cband_center_hz(0)
            + CBAND_SLOT_WIDTH_HZ;
        assert!(width <= 4.8e12 + 1.0);
    }

    #[test]
    fn full_plan_structure() {
        let plan = ChannelPlan::full_cband(ModulationFormat::Pm16Qam, 1e-3);
        assert_eq!(plan.busy_count(), CBAND_CHANNELS);
        assert_eq!(plan.interferers().count(), CBAND_CHANNELS - 1);
        assert!(plan.cut().busy);
        assert!(close(plan.cut().excess_kurtosis, -0.68, 1e-12));
    }

    #[test]
    fn random_plan_counts_and_determinism() {
        let mut rng = stream_rng(42, 7);
        let plan =
            ChannelPlan::build_cband_plan(6, ModulationFormat::PmQpsk, 1e-3, &mut rng).unwrap();
        assert_eq!(plan.busy_count(), 6);
        assert!(plan.cut().busy);

        let mut rng2 = stream_rng(42, 7);
        let plan2 =
            ChannelPlan::build_cband_plan(6, ModulationFormat::PmQpsk, 1e-3, &mut rng2).unwrap();
        assert_eq!(plan, plan2);

        let mut rng3 = stream_rng(42, 8);
        let plan3 =
            ChannelPlan::build_cband_plan(6, ModulationFormat::PmQpsk, 1e-3, &mut rng3).unwrap();
        assert_ne!(plan, plan3);

        assert!(ChannelPlan::build_cband_plan(0, ModulationFormat::PmQpsk, 1e-3, &mut rng)
            .is_err());
        assert!(ChannelPlan::build_cband_plan(61, ModulationFormat::PmQpsk, 1e-3, &mut rng)
            .is_err());
        let mut rng4 = stream_rng(1, 0);
        let full =
            ChannelPlan::build_cband_plan(60, ModulationFormat::PmQpsk, 1e-3, &mut rng4).unwrap();
        assert_eq!(full.busy_count(), 60);
    }

    #[test]
    fn plan_validation_rejects_bad_structures() {
        let mk = |f: f64, busy: bool| Channel {
            center_frequency_hz: f,
            symbol_rate_baud: 64e9,
            slot_width_hz: 75e9,
            launch_power_w: 1e-3,
            format: ModulationFormat::PmQpsk,
            excess_kurtosis: -1.0,
            busy,
        };
        // unsorted
        assert!(ChannelPlan::new(vec![mk(193e12, true), mk(192e12, true)], 0).is_err());
        // overlapping
        assert!(ChannelPlan::new(vec![mk(192e12, true), mk(192.05e12, true)], 0).is_err());
        // idle CUT
        assert!(ChannelPlan::new(vec![mk(192e12, false), mk(192.075e12, true)], 0).is_err());
        // out-of-range CUT
        assert!(ChannelPlan::new(vec![mk(192e12, true)], 3).is_err());
        // negative power
        let mut bad = mk(192e12, true);
        bad.launch_power_w = -1e-3;
        assert!(ChannelPlan::new(vec![bad], 0).is_err());
    }

    #[test]
    fn link_path_structure() {
        let path = LinkPath::from_span_lengths_m(&[50e3, 120e3]).unwrap();
        assert_eq!(path.n_spans(), 2);
        assert_eq!(path.n_links(), 1);
        assert!(close(path.total_length_m(), 170e3, 1e-12));

        let two_links = LinkPath::new(vec![
            vec![FiberSpan::reference(80e3); 2],
            vec![FiberSpan::reference(60e3); 3],
        ])
        .unwrap();
        assert_eq!(two_links.n_spans(), 5);
        assert_eq!(two_links.n_links(), 2);
        assert_eq!(two_links.spans()[3].span_index_in_link, 1);

        assert!(LinkPath::new(vec![]).is_err());
        assert!(LinkPath::from_span_lengths_m(&[]).is_err());
    }
}
