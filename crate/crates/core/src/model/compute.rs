use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, ModelError};
use crate::units::BITS_PER_BYTE;

/// A computation task: input size, cycle density and completion deadline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComputeTask {
    pub data_bytes: u64,
    pub cycles_per_bit: f64,
    pub deadline_s: f64,
}

impl ComputeTask {
    pub fn new(data_bytes: u64, cycles_per_bit: f64, deadline_s: f64) -> Result<Self, ModelError> {
        require_positive("cycles_per_bit", cycles_per_bit)?;
        require_positive("deadline_s", deadline_s)?;
        Ok(Self {
            data_bytes,
            cycles_per_bit,
            deadline_s,
        })
    }

    pub fn bits(&self) -> f64 {
        self.data_bytes as f64 * BITS_PER_BYTE
    }

    pub fn cycles(&self) -> f64 {
        self.bits() * self.cycles_per_bit
    }

    pub fn with_data_bytes(self, data_bytes: u64) -> Self {
        Self { data_bytes, ..self }
    }
}

/// A CPU (UE) or edge server (MEC) with some capacity already in use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Processor {
    pub total_hz: f64,
    pub occupied_hz: f64,
}

impl Processor {
    pub fn new(total_hz: f64, occupied_hz: f64) -> Result<Self, ModelError> {
        let cpu = Self {
            total_hz,
            occupied_hz,
        };
        cpu.free_hz()?;
        Ok(cpu)
    }

    pub fn idle(total_hz: f64) -> Result<Self, ModelError> {
        Self::new(total_hz, 0.0)
    }

    /// Cycles per second still available, or an error if none are.
    pub fn free_hz(&self) -> Result<f64, ModelError> {
        require_positive("total_hz", self.total_hz)?;
        require_non_negative("occupied_hz", self.occupied_hz)?;
        if self.occupied_hz >= self.total_hz {
            return Err(ModelError::SaturatedProcessor {
                total_hz: self.total_hz,
                occupied_hz: self.occupied_hz,
            });
        }
        Ok(self.total_hz - self.occupied_hz)
    }
}

/// Offloading latency split into its two addends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffloadLatency {
    pub transmission_s: f64,
    pub processing_s: f64,
}

impl OffloadLatency {
    pub fn total_s(&self) -> f64 {
        self.transmission_s + self.processing_s
    }
}

/// Time to process the task on the device itself.
pub fn local_latency(task: &ComputeTask, cpu: &Processor) -> Result<f64, ModelError> {
    let free = cpu.free_hz()?;
    Ok(task.cycles() / free)
}

/// Uplink transmission plus edge processing time.
///
/// Downlink delivery of the result is not modelled.
pub fn offload_latency(
    task: &ComputeTask,
    uplink_rate_bps: f64,
    mec: &Processor,
) -> Result<OffloadLatency, ModelError> {
    require_positive("uplink_rate_bps", uplink_rate_bps)?;
    let free = mec.free_hz()?;
    Ok(OffloadLatency {
        transmission_s: task.bits() / uplink_rate_bps,
        processing_s: task.cycles() / free,
    })
}

/// Smallest uplink bandwidth at which offloading meets `task.deadline_s`.
///
/// Closed form: the deadline minus the processing term is the transmission
/// budget, which fixes the rate and hence `B = rate / log2(1 + snr)`.
/// An empty task needs no bandwidth and returns 0.
pub fn min_bandwidth_for_deadline(
    task: &ComputeTask,
    snr: f64,
    mec: &Processor,
) -> Result<f64, ModelError> {
    require_non_negative("snr", snr)?;
    require_positive("deadline_s", task.deadline_s)?;
    let processing_s = task.cycles() / mec.free_hz()?;
    if task.data_bytes == 0 {
        return Ok(0.0);
    }
    let budget_s = task.deadline_s - processing_s;
    if budget_s <= 0.0 {
        return Err(ModelError::InfeasibleDeadline {
            processing_s,
            deadline_s: task.deadline_s,
        });
    }
    let spectral_efficiency = (1.0 + snr).log2();
    if spectral_efficiency <= 0.0 {
        return Err(ModelError::Domain {
            quantity: "snr",
            value: snr,
            requirement: "must be > 0 to carry any data",
        });
    }
    Ok(task.bits() / budget_s / spectral_efficiency)
}

/// Largest whole number of bytes the CPU can process within `deadline_s`.
pub fn max_local_data_for_deadline(
    cpu: &Processor,
    cycles_per_bit: f64,
    deadline_s: f64,
) -> Result<u64, ModelError> {
    require_positive("cycles_per_bit", cycles_per_bit)?;
    require_non_negative("deadline_s", deadline_s)?;
    let free = cpu.free_hz()?;
    let fits = |bytes: u64| (bytes as f64 * BITS_PER_BYTE * cycles_per_bit) / free <= deadline_s;
    let mut bytes = (deadline_s * free / (BITS_PER_BYTE * cycles_per_bit)).floor() as u64;
    // Settle rounding of the closed form against the forward model.
    while bytes > 0 && !fits(bytes) {
        bytes -= 1;
    }
    while fits(bytes + 1) {
        bytes += 1;
    }
    Ok(bytes)
}
