//! Link-level Monte-Carlo accuracy study: randomized partially loaded
//! heterogeneous-span links, closed-form GSNR against the quadrature
//! reference, and RMSE/MAE/STD per modulation class.

use serde::{Deserialize, Serialize};

use crate::cfm::CfmVariant;
use crate::error::{QotError, Result};
use crate::gsnr::{path_gsnr, refine_span_count, span_ase_power, logon_power_w};
use crate::media::{ChannelPlan, FiberSpan, LinkPath, ModulationFormat};
use crate::oracle::{span_nli_quadrature, QuadratureSpec};
use crate::params::CfmParams;
use crate::rng::{stream_rng, uniform_f64, uniform_index, StreamRng};
use crate::units::{dbm_to_watts, linear_to_db, watts_to_dbm};

/// Modulation class of a sample batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SampleClass {
    /// Levels 3 through 6 (PM-8QAM to PM-64QAM), drawn uniformly.
    HighMfl,
    Qpsk,
    Bpsk,
}

impl SampleClass {
    pub const ALL: [SampleClass; 3] = [SampleClass::HighMfl, SampleClass::Qpsk, SampleClass::Bpsk];

    pub fn name(self) -> &'static str {
        match self {
            SampleClass::HighMfl => "highMFL",
            SampleClass::Qpsk => "QPSK",
            SampleClass::Bpsk => "BPSK",
        }
    }

    fn draw_format(self, rng: &mut StreamRng) -> ModulationFormat {
        match self {
            SampleClass::HighMfl => {
                ModulationFormat::from_level(3 + uniform_index(rng, 4) as u8).unwrap()
            }
            SampleClass::Qpsk => ModulationFormat::PmQpsk,
            SampleClass::Bpsk => ModulationFormat::PmBpsk,
        }
    }
}

/// One randomized point-to-point link. Covers the twelve varied
/// attributes: per-channel launch powers, busy-channel count, fiber loss,
/// dispersion, nonlinearity coefficient, channel spacing, symbol rate,
/// channel center frequencies, per-channel kurtosis correction factor,
/// amplifier noise figure, span lengths, and span count. The comb-related
/// attributes live inside the channel plan.
#[derive(Debug, Clone)]
pub struct LinkSample {
    pub sample_id: u64,
    pub class: SampleClass,
    pub format: ModulationFormat,
    pub launch_power_dbm: f64,
    pub n_busy: usize,
    pub loading_pct: f64,
    pub span_lengths_m: Vec<f64>,
    pub plan: ChannelPlan,
    pub attenuation_db_per_km: f64,
    pub beta2_s2_per_m: f64,
    pub gamma_per_w_m: f64,
    pub noise_figure_db: f64,
}

impl LinkSample {
    pub fn n_spans(&self) -> usize {
        self.span_lengths_m.len()
    }

    pub fn path(&self) -> Result<LinkPath> {
        LinkPath::from_span_lengths_m(&self.span_lengths_m)
    }
}

/// Study configuration. The full-scale run is 500 + 5 + 5 samples with no
/// caps; desk-scale runs shrink the counts and cap channels and spans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub n_high_mfl: usize,
    pub n_qpsk: usize,
    pub n_bpsk: usize,
    pub variants: Vec<CfmVariant>,
    pub quad: QuadratureSpec,
    pub seed: u64,
    /// Upper cap on busy channels (60 disables the cap).
    pub max_busy: usize,
    /// Spans drawn before refinement (the refined count never exceeds it).
    pub initial_spans: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            n_high_mfl: 500,
            n_qpsk: 5,
            n_bpsk: 5,
            variants: CfmVariant::ALL.to_vec(),
            quad: QuadratureSpec::default(),
            seed: 1,
            max_busy: 60,
            initial_spans: 100,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_high_mfl + self.n_qpsk + self.n_bpsk == 0 {
            return Err(QotError::Config("study has no samples".into()));
        }
        if self.variants.is_empty() {
            return Err(QotError::Config("study has no variants".into()));
        }
        if !(1..=60).contains(&self.max_busy) {
            return Err(QotError::Config(format!(
                "max_busy must lie in 1..=60, got {}",
                self.max_busy
            )));
        }
        if self.initial_spans == 0 {
            return Err(QotError::Config("initial_spans must be positive".into()));
        }
        self.quad.validate()
    }
}

/// The variant that fixes launch power and refined span count of a sample,
/// shared across all compared variants so they see the same link.
pub const BASELINE_VARIANT: CfmVariant = CfmVariant::WoMdct1;

/// Draw one sample. Deterministic in the rng state.
pub fn sample_link(
    rng: &mut StreamRng,
    class: SampleClass,
    sample_id: u64,
    params: &CfmParams,
    max_busy: usize,
    initial_spans: usize,
) -> Result<LinkSample> {
    let format = class.draw_format(rng);
    let lengths_m: Vec<f64> = (0..initial_spans)
        .map(|_| 1e3 * (50.0 + 70.0 * uniform_f64(rng)))
        .collect();
    let loading_pct = 10.0 + 90.0 * uniform_f64(rng);
    let n_busy = (((loading_pct / 100.0) * 60.0).round() as usize)
        .clamp(1, 60)
        .min(max_busy);
    let plan = ChannelPlan::build_cband_plan(n_busy, format, 1e-3, rng)?;

    // Launch power: closed-form optimum of the drawn path under the
    // baseline variant, snapped to the 0.01 dBm grid inside [-5, 5] dBm.
    let path = LinkPath::from_span_lengths_m(&lengths_m)?;
    let p_opt = logon_power_w(BASELINE_VARIANT, params, &path, &plan)?;
    let launch_power_dbm = (watts_to_dbm(p_opt) / 0.01).round() * 0.01;
    let launch_power_dbm = launch_power_dbm.clamp(-5.0, 5.0);
    let plan = plan.with_uniform_power(dbm_to_watts(launch_power_dbm));

    // Refine the span count to the reach of the sample's own format.
    let refined = refine_span_count(
        BASELINE_VARIANT,
        params,
        path.spans(),
        &plan,
        format.gsnr_threshold_db(),
    )?
    .max(1);
    let span_lengths_m = lengths_m[..refined].to_vec();

    let reference = FiberSpan::reference(80e3);
    Ok(LinkSample {
        sample_id,
        class,
        format,
        launch_power_dbm,
        n_busy,
        loading_pct,
        span_lengths_m,
        plan,
        attenuation_db_per_km: reference.attenuation_db_per_km,
        beta2_s2_per_m: reference.beta2_s2_per_m,
        gamma_per_w_m: reference.gamma_per_w_m,
        noise_figure_db: reference.noise_figure_db,
    })
}

/// One evaluated (sample, variant) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub sample_id: u64,
    pub class: SampleClass,
    pub variant: CfmVariant,
    pub mfl: u8,
    pub n_spans: usize,
    pub loading_pct: f64,
    pub gsnr_oracle_db: f64,
    pub gsnr_cfm_db: f64,
    pub delta_db: f64,
}

/// Aggregate deviation statistics; population definitions throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaStats {
    pub rmse_db: f64,
    pub mae_db: f64,
    pub std_db: f64,
    pub n: usize,
    pub per_sample: Vec<(u64, f64)>,
}

/// Deviation statistics of a delta set: rmse = sqrt(mean of squares),
/// mae = mean of absolute values, std = population standard deviation.
pub fn stats(per_sample: &[(u64, f64)]) -> Result<DeltaStats> {
    if per_sample.is_empty() {
        return Err(QotError::InvalidParameter(
            "statistics need at least one delta".into(),
        ));
    }
    let n = per_sample.len() as f64;
    let mean = per_sample.iter().map(|(_, d)| d).sum::<f64>() / n;
    let mean_sq = per_sample.iter().map(|(_, d)| d * d).sum::<f64>() / n;
    let mae = per_sample.iter().map(|(_, d)| d.abs()).sum::<f64>() / n;
    let rmse = mean_sq.sqrt();
    // Cauchy-Schwarz guarantees rmse >= mae; tolerate only rounding dust.
    assert!(rmse >= mae - 1e-12, "rmse {rmse} < mae {mae}");
    let rmse = rmse.max(mae);
    let std = (mean_sq - mean * mean).max(0.0).sqrt();
    Ok(DeltaStats {
        rmse_db: rmse,
        mae_db: mae,
        std_db: std,
        n: per_sample.len(),
        per_sample: per_sample.to_vec(),
    })
}

/// A sample the oracle could not integrate to tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedSample {
    pub sample_id: u64,
    pub class: SampleClass,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub rows: Vec<StudyRow>,
    /// Keyed by (class, variant) in enumeration order.
    pub stats: Vec<(SampleClass, CfmVariant, DeltaStats)>,
    pub excluded: Vec<ExcludedSample>,
}

fn sample_stream(class: SampleClass, index: usize) -> u64 {
    let base = match class {
        SampleClass::HighMfl => 0u64,
        SampleClass::Qpsk => 1 << 40,
        SampleClass::Bpsk => 2 << 40,
    };
    base + index as u64
}

/// Evaluate one sample against every variant. The oracle runs once per
/// sample; closed forms are per variant.
fn evaluate_sample(
    sample: &LinkSample,
    params: &CfmParams,
    variants: &[CfmVariant],
    quad: &QuadratureSpec,
) -> Result<Vec<StudyRow>> {
    let path = sample.path()?;
    let cut = sample.plan.cut();
    let mut ase_total = 0.0;
    let mut nli_oracle = 0.0;
    for i in 0..path.n_spans() {
        let span = &path.spans()[i];
        ase_total += span_ase_power(span, cut.center_frequency_hz, cut.symbol_rate_baud);
        nli_oracle += span_nli_quadrature(span, &sample.plan, quad)?.nli_power_w;
    }
    let gsnr_oracle_db = linear_to_db(cut.launch_power_w / (ase_total + nli_oracle));

    let mut rows = Vec::with_capacity(variants.len());
    for &variant in variants {
        let gsnr_cfm_db = path_gsnr(variant, params, &path, &sample.plan)?.gsnr_db();
        rows.push(StudyRow {
            sample_id: sample.sample_id,
            class: sample.class,
            variant,
            mfl: sample.format.level(),
            n_spans: sample.n_spans(),
            loading_pct: sample.loading_pct,
            gsnr_oracle_db,
            gsnr_cfm_db,
            delta_db: gsnr_oracle_db - gsnr_cfm_db,
        });
    }
    Ok(rows)
}

enum SampleOutcome {
    Rows(Vec<StudyRow>),
    Excluded(ExcludedSample),
}

fn run_one(
    params: &CfmParams,
    config: &StudyConfig,
    class: SampleClass,
    index: usize,
) -> Result<SampleOutcome> {
    let stream = sample_stream(class, index);
    let mut rng = stream_rng(config.seed, stream);
    let sample = sample_link(
        &mut rng,
        class,
        stream,
        params,
        config.max_busy,
        config.initial_spans,
    )?;
    match evaluate_sample(&sample, params, &config.variants, &config.quad) {
        Ok(rows) => Ok(SampleOutcome::Rows(rows)),
        Err(QotError::OracleNonConvergence(reason)) => Ok(SampleOutcome::Excluded(
            ExcludedSample {
                sample_id: sample.sample_id,
                class: sample.class,
                reason,
            },
        )),
        Err(e) => Err(e),
    }
}

/// Run the full study. Samples are independent and processed by a pool of
/// worker threads; results are reduced in sample order, so the report is
/// deterministic for a given config regardless of thread count.
pub fn run_study(params: &CfmParams, config: &StudyConfig, threads: usize) -> Result<StudyReport> {
    config.validate()?;
    let work: Vec<(SampleClass, usize)> = SampleClass::ALL
        .iter()
        .flat_map(|&class| {
            let count = match class {
                SampleClass::HighMfl => config.n_high_mfl,
                SampleClass::Qpsk => config.n_qpsk,
                SampleClass::Bpsk => config.n_bpsk,
            };
            (0..count).map(move |i| (class, i))
        })
        .collect();

    let threads = threads.max(1).min(work.len().max(1));
    let mut outcomes: Vec<Option<Result<SampleOutcome>>> = Vec::new();
    outcomes.resize_with(work.len(), || None);
    {
        let outcomes = std::sync::Mutex::new(&mut outcomes);
        let next = std::sync::atomic::AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= work.len() {
                        break;
                    }
                    let (class, index) = work[i];
                    let outcome = run_one(params, config, class, index);
                    outcomes.lock().unwrap()[i] = Some(outcome);
                });
            }
        });
    }

    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for outcome in outcomes {
        match outcome.expect("worker filled every slot")? {
            SampleOutcome::Rows(r) => rows.extend(r),
            SampleOutcome::Excluded(x) => excluded.push(x),
        }
    }

    let mut per_group: Vec<(SampleClass, CfmVariant, DeltaStats)> = Vec::new();
    for &class in &SampleClass::ALL {
        for &variant in &config.variants {
            let deltas: Vec<(u64, f64)> = rows
                .iter()
                .filter(|r| r.class == class && r.variant == variant)
                .map(|r| (r.sample_id, r.delta_db))
                .collect();
            if !deltas.is_empty() {
                per_group.push((class, variant, stats(&deltas)?));
            }
        }
    }

    Ok(StudyReport {
        rows,
        stats: per_group,
        excluded,
    })
}
