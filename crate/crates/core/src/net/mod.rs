//! Dynamic elastic-optical-network simulation: topologies, k-shortest-path
//! routing, flexible-grid spectrum assignment, QoT-driven format selection,
//! and a Poisson traffic loop.

pub mod routing;
pub mod sim;
pub mod spectrum;
pub mod topology;

pub use routing::{yen_k_shortest, RoutePath};
pub use sim::{
    carriers_and_slices, design_power_w, run_grid, run_simulation, select_mfl, GridPoint,
    MflPolicy, NetConfig, Request, SimMetrics, BITRATES_GBPS, DEFAULT_K_PATHS,
    SLICES_PER_CARRIER,
};
pub use spectrum::{SpectrumState, SLICES_PER_LINK, SLICE_WIDTH_HZ};
pub use topology::{Link, Topology};
