//! Dynamic traffic simulation: Poisson arrivals, exponential holding times,
//! QoT-driven format selection at the worst-case operating point, and
//! first-fit spectrum assignment over k=3 candidate paths.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cfm::CfmVariant;
use crate::error::{QotError, Result};
use crate::gsnr::{logon_power_w, path_gsnr, LOGON_REFERENCE_SPANS};
use crate::media::{
    ChannelPlan, FiberSpan, LinkPath, ModulationFormat, CBAND_CHANNELS, REFERENCE_SPAN_LENGTH_M,
};
use crate::net::routing::{yen_k_shortest, RoutePath};
use crate::net::spectrum::{SpectrumState, SLICES_PER_LINK};
use crate::net::topology::Topology;
use crate::rng::{exp_variate, stream_rng, uniform_index};

/// Request bit rates in Gb/s, drawn uniformly.
pub const BITRATES_GBPS: [f64; 5] = [200.0, 400.0, 600.0, 800.0, 1000.0];
/// Slices occupied by one 75 GHz carrier (6 x 12.5 GHz).
pub const SLICES_PER_CARRIER: usize = 6;
/// Candidate paths per request.
pub const DEFAULT_K_PATHS: usize = 3;

/// One connection request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Request {
    pub src: usize,
    pub dst: usize,
    pub bitrate_gbps: f64,
    pub arrival_time: f64,
    pub holding_time: f64,
}

/// Transceivers and slices needed to carry `bitrate_gbps` with `format`.
pub fn carriers_and_slices(bitrate_gbps: f64, format: ModulationFormat) -> (usize, usize) {
    let carriers = (bitrate_gbps / format.rate_per_carrier_gbps()).ceil().max(1.0) as usize;
    (carriers, SLICES_PER_CARRIER * carriers)
}

/// How the feasibility GSNR of a route is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MflPolicy {
    /// Full C-band comb at the design power: the admitted format stays
    /// feasible no matter how the network fills up later.
    WorstCaseFullLoad,
    /// Comb loaded to the route's current worst-link occupancy. Admits
    /// higher formats on empty networks but offers no end-of-life margin.
    CurrentLoad,
}

/// Design launch power of `variant`: the closed-form optimum on the
/// reference 10 x 80 km line under a fully loaded PM-16QAM comb.
pub fn design_power_w(variant: CfmVariant, params: &crate::params::CfmParams) -> Result<f64> {
    let span = FiberSpan::reference(REFERENCE_SPAN_LENGTH_M);
    let path = LinkPath::homogeneous(span, LOGON_REFERENCE_SPANS)?;
    let plan = ChannelPlan::full_cband(ModulationFormat::Pm16Qam, 1e-3);
    logon_power_w(variant, params, &path, &plan)
}

fn center_loaded_plan(n_busy: usize, format: ModulationFormat, power_w: f64) -> ChannelPlan {
    ChannelPlan::center_loaded(n_busy, format, power_w)
        .expect("center-loaded plan is structurally valid")
}

/// Highest format whose threshold the route clears when `n_busy` channels
/// are lit at the design power, with the route's feasibility GSNR in dB.
/// None if even the lowest format fails; a zero-hop route carries the top
/// format trivially.
pub fn select_mfl(
    variant: CfmVariant,
    params: &crate::params::CfmParams,
    topo: &Topology,
    route_links: &[usize],
    design_power_w: f64,
    n_busy: usize,
) -> Result<Option<(ModulationFormat, f64)>> {
    if route_links.is_empty() {
        return Ok(Some((ModulationFormat::Pm64Qam, f64::INFINITY)));
    }
    let path = topo.link_path(route_links)?;
    for level in (1..=6u8).rev() {
        let format = ModulationFormat::from_level(level)?;
        let plan = center_loaded_plan(n_busy.clamp(1, CBAND_CHANNELS), format, design_power_w);
        let gsnr_db = path_gsnr(variant, params, &path, &plan)?.gsnr_db();
        if gsnr_db >= format.gsnr_threshold_db() {
            return Ok(Some((format, gsnr_db)));
        }
    }
    Ok(None)
}

/// Configuration of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetConfig {
    pub variant: CfmVariant,
    /// Offered traffic load in Erlang (arrival rate times unit mean holding).
    pub otl_erlang: f64,
    pub n_requests: usize,
    pub seed: u64,
    pub k_paths: usize,
    pub policy: MflPolicy,
}

impl NetConfig {
    pub fn new(variant: CfmVariant, otl_erlang: f64, n_requests: usize, seed: u64) -> Self {
        NetConfig {
            variant,
            otl_erlang,
            n_requests,
            seed,
            k_paths: DEFAULT_K_PATHS,
            policy: MflPolicy::WorstCaseFullLoad,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.otl_erlang.is_finite() && self.otl_erlang > 0.0) {
            return Err(QotError::Config("offered load must be positive".into()));
        }
        if self.n_requests == 0 {
            return Err(QotError::Config("n_requests must be positive".into()));
        }
        if self.k_paths == 0 {
            return Err(QotError::Config("k_paths must be positive".into()));
        }
        Ok(())
    }
}

/// Aggregate outcome of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimMetrics {
    pub offered: usize,
    pub accepted: usize,
    pub blocked: usize,
    pub offered_bandwidth_gbps: f64,
    pub blocked_bandwidth_gbps: f64,
    /// Bandwidth blocking probability: blocked over offered bandwidth.
    pub bbp: f64,
    /// Mean feasibility GSNR of the selected route over accepted requests.
    pub mean_arrival_gsnr_db: f64,
    /// Accepted requests per format level (index 0 = level 1).
    pub mfl_usage: [usize; 6],
}

struct Departure {
    time: f64,
    seq: usize,
    directed: Vec<usize>,
    start: usize,
    width: usize,
}

impl PartialEq for Departure {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Departure {}
impl PartialOrd for Departure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Departure {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap: reverse so the earliest departure surfaces first.
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Occupancy-derived busy-channel count for the current-load policy.
fn current_load_channels(spectrum: &SpectrumState, directed: &[usize]) -> usize {
    let worst = directed
        .iter()
        .map(|&d| spectrum.occupied(d))
        .max()
        .unwrap_or(0);
    let fraction = worst as f64 / SLICES_PER_LINK as f64;
    ((fraction * CBAND_CHANNELS as f64).ceil() as usize).clamp(1, CBAND_CHANNELS)
}

/// Run one simulation. Single-threaded and bit-reproducible: every request
/// draws from its own seed-derived stream, and the event loop is a pure
/// function of the configuration.
pub fn run_simulation(
    topo: &Topology,
    params: &crate::params::CfmParams,
    config: &NetConfig,
) -> Result<SimMetrics> {
    config.validate()?;
    let p_design = design_power_w(config.variant, params)?;
    let n_nodes = topo.n_nodes();

    let mut route_cache: HashMap<(usize, usize), Vec<RoutePath>> = HashMap::new();
    let mut qot_cache: HashMap<Vec<usize>, Option<(ModulationFormat, f64)>> = HashMap::new();
    let mut spectrum = SpectrumState::new(topo.n_links());
    let mut departures: BinaryHeap<Departure> = BinaryHeap::new();

    let mut clock = 0.0f64;
    let mut accepted = 0usize;
    let mut blocked = 0usize;
    let mut offered_bw = 0.0f64;
    let mut blocked_bw = 0.0f64;
    let mut gsnr_sum = 0.0f64;
    let mut mfl_usage = [0usize; 6];

    for i in 0..config.n_requests {
        let mut rng = stream_rng(config.seed, i as u64);
        clock += exp_variate(&mut rng, 1.0 / config.otl_erlang);
        while departures.peek().is_some_and(|d| d.time <= clock) {
            let d = departures.pop().expect("peeked entry exists");
            spectrum.release(&d.directed, d.start, d.width);
        }

        let src = uniform_index(&mut rng, n_nodes);
        let mut dst = uniform_index(&mut rng, n_nodes - 1);
        if dst >= src {
            dst += 1;
        }
        let bitrate = BITRATES_GBPS[uniform_index(&mut rng, BITRATES_GBPS.len())];
        let holding = exp_variate(&mut rng, 1.0);
        offered_bw += bitrate;

        if !route_cache.contains_key(&(src, dst)) {
            route_cache.insert((src, dst), yen_k_shortest(topo, src, dst, config.k_paths));
        }
        let routes = route_cache[&(src, dst)].clone();

        let mut placed = false;
        for route in &routes {
            let directed = route.directed_links(topo);
            let choice = match config.policy {
                MflPolicy::WorstCaseFullLoad => {
                    if !qot_cache.contains_key(&route.nodes) {
                        let c = select_mfl(
                            config.variant,
                            params,
                            topo,
                            &route.links,
                            p_design,
                            CBAND_CHANNELS,
                        )?;
                        qot_cache.insert(route.nodes.clone(), c);
                    }
                    qot_cache[&route.nodes]
                }
                MflPolicy::CurrentLoad => {
                    let n_busy = current_load_channels(&spectrum, &directed);
                    select_mfl(config.variant, params, topo, &route.links, p_design, n_busy)?
                }
            };
            let Some((format, gsnr_db)) = choice else {
                continue;
            };
            let (_carriers, width) = carriers_and_slices(bitrate, format);
            if let Some(start) = spectrum.first_fit(&directed, width) {
                spectrum.allocate(&directed, start, width);
                departures.push(Departure {
                    time: clock + holding,
                    seq: i,
                    directed,
                    start,
                    width,
                });
                accepted += 1;
                mfl_usage[format.level() as usize - 1] += 1;
                gsnr_sum += gsnr_db;
                placed = true;
                break;
            }
        }
        if !placed {
            blocked += 1;
            blocked_bw += bitrate;
        }
    }

    Ok(SimMetrics {
        offered: config.n_requests,
        accepted,
        blocked,
        offered_bandwidth_gbps: offered_bw,
        blocked_bandwidth_gbps: blocked_bw,
        bbp: blocked_bw / offered_bw,
        mean_arrival_gsnr_db: if accepted > 0 {
            gsnr_sum / accepted as f64
        } else {
            0.0
        },
        mfl_usage,
    })
}

/// One cell of a simulation campaign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub variant: CfmVariant,
    pub otl_erlang: f64,
    pub seed: u64,
}

/// Run independent cells on a thread pool; results keep the input order.
pub fn run_grid(
    topo: &Topology,
    params: &crate::params::CfmParams,
    points: &[GridPoint],
    n_requests: usize,
    k_paths: usize,
    policy: MflPolicy,
    threads: usize,
) -> Result<Vec<SimMetrics>> {
    let threads = threads.max(1).min(points.len().max(1));
    let mut results: Vec<Option<Result<SimMetrics>>> = Vec::new();
    results.resize_with(points.len(), || None);
    {
        let results = std::sync::Mutex::new(&mut results);
        let next = std::sync::atomic::AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= points.len() {
                        break;
                    }
                    let p = points[i];
                    let config = NetConfig {
                        variant: p.variant,
                        otl_erlang: p.otl_erlang,
                        n_requests,
                        seed: p.seed,
                        k_paths,
                        policy,
                    };
                    let out = run_simulation(topo, params, &config);
                    results.lock().unwrap()[i] = Some(out);
                });
            }
        });
    }
    results
        .into_iter()
        .map(|r| r.expect("worker filled every slot"))
        .collect()
}
