use std::fmt;
use std::str::FromStr;

use super::{Scenario, ScenarioError};

/// Largest grid any sweep may expand to.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Quantity varied by a [`SweepSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Uplink bandwidth of both the direct and IRS links.
    BandwidthHz,
    /// Task input size.
    DataBytes,
    /// Direct-link distance only.
    DistanceM,
    /// UE-BS separation: direct distance, and `d1 = d2 = separation / 2`.
    SeparationM,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            Self::BandwidthHz => "bandwidth_hz",
            Self::DataBytes => "data_bytes",
            Self::DistanceM => "distance_m",
            Self::SeparationM => "separation_m",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bandwidth_hz" => Ok(Self::BandwidthHz),
            "data_bytes" => Ok(Self::DataBytes),
            "distance_m" => Ok(Self::DistanceM),
            "separation_m" => Ok(Self::SeparationM),
            other => Err(format!(
                "unknown sweep variable {other:?} (expected bandwidth_hz|data_bytes|distance_m|separation_m)"
            )),
        }
    }
}

/// Inclusive arithmetic grid over one variable, with optional `key=value`
/// overrides applied to the base scenario first.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub value: f64,
    pub scenario: Scenario,
}

/// `start, start + step, ..., <= stop`. Points are computed as
/// `start + i * step` so no error accumulates along the grid.
pub fn inclusive_grid(key: &str, start: f64, stop: f64, step: f64) -> Result<Vec<f64>, ScenarioError> {
    let invalid = |message: String| ScenarioError::InvalidValue {
        key: key.to_owned(),
        line: None,
        message,
    };
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(invalid("grid bounds must be finite".to_owned()));
    }
    if step <= 0.0 {
        return Err(invalid(format!("step {step} must be > 0")));
    }
    if start > stop {
        return Err(invalid(format!("start {start} exceeds stop {stop}")));
    }
    // Tolerate stop landing a hair under start + k*step.
    let points = ((stop - start) / step + 1e-9).floor() + 1.0;
    if points > MAX_GRID_POINTS as f64 {
        return Err(ScenarioError::GridOverflow {
            key: key.to_owned(),
            points,
            limit: MAX_GRID_POINTS,
        });
    }
    Ok((0..points as usize).map(|i| start + i as f64 * step).collect())
}

/// Expands a sweep into validated scenarios, in ascending order of the
/// swept variable.
pub fn expand_sweep(spec: &SweepSpec, base: &Scenario) -> Result<Vec<SweepPoint>, ScenarioError> {
    let values = inclusive_grid(spec.variable.name(), spec.start, spec.stop, spec.step)?;
    let base = base.with_overrides(&spec.overrides)?;
    values
        .into_iter()
        .enumerate()
        .map(|(index, value)| {
            let scenario = base.modified(|cfg| match spec.variable {
                SweepVariable::BandwidthHz => {
                    cfg.direct.bandwidth_hz = value;
                    cfg.irs.bandwidth_hz = value;
                }
                SweepVariable::DataBytes => {
                    // Non-integral sizes are caught below.
                    let bytes = value as u64;
                    cfg.compute.data_bytes_min = bytes;
                    cfg.compute.data_bytes_max = bytes;
                }
                SweepVariable::DistanceM => cfg.direct.distance_m = value,
                SweepVariable::SeparationM => {
                    cfg.direct.distance_m = value;
                    cfg.irs.d1_m = value / 2.0;
                    cfg.irs.d2_m = value / 2.0;
                }
            })?;
            if spec.variable == SweepVariable::DataBytes && (value < 0.0 || value.fract() != 0.0) {
                return Err(ScenarioError::InvalidValue {
                    key: "data_bytes".to_owned(),
                    line: None,
                    message: format!("{value} is not a whole number of bytes"),
                });
            }
            Ok(SweepPoint {
                index,
                value,
                scenario,
            })
        })
        .collect()
}
