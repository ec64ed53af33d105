//! Closed-form link budget (direct and IRS-reflected) and computation
//! latency models, with their inversions.
//!
//! All quantities are SI base units in `f64`: watts, hertz, meters,
//! seconds, bits per second. Task sizes are whole bytes and are converted
//! to bits exactly once, inside the latency operations.

mod compute;
mod irs;
mod radio;

pub use compute::{
    local_latency, max_local_data_for_deadline, min_bandwidth_for_deadline, offload_latency,
    ComputeTask, OffloadLatency, Processor,
};
pub use irs::{received_power_irs, scattering_gain, segment_distance, IrsLink, IrsPanel, Point3};
pub use radio::{
    calibrate_interference, received_power_direct, snr, throughput, DirectLink, RadioEnvironment,
};
