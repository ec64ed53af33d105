//! Closed-form link-budget and task-offloading latency models for
//! IRS-assisted mobile edge computing, plus the scenario loader,
//! Monte Carlo fading helpers, and figure-dataset generators built on them.
//!
//! The [`model`] module is pure math: every operation is a function of its
//! arguments and returns a typed [`ModelError`] instead of producing
//! infinities on degenerate input. [`scenario`] turns a config file into
//! validated model types, and [`experiments`] sweeps those over grids.

pub mod error;
pub mod experiments;
pub mod fading;
pub mod model;
pub mod scenario;
pub mod units;

pub use error::ModelError;
pub use fading::{mean_throughput_from_samples, mean_throughput_mc, FadingSampler, McEstimate};
pub use model::{
    calibrate_interference, local_latency, max_local_data_for_deadline,
    min_bandwidth_for_deadline, offload_latency, received_power_direct, received_power_irs,
    scattering_gain, segment_distance, snr, throughput, ComputeTask, DirectLink, IrsLink,
    IrsPanel, OffloadLatency, Point3, Processor, RadioEnvironment,
};
pub use scenario::{
    expand_sweep, load_scenario, GainInterpretation, Scenario, ScenarioConfig, ScenarioError,
    SweepPoint, SweepSpec, SweepVariable,
};
