use thiserror::Error;

/// Errors raised by the closed-form model operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// An input lies outside the domain of the formula (zero distance,
    /// negative power, non-finite value, ...).
    #[error("{quantity} = {value} is outside the valid domain ({requirement})")]
    Domain {
        quantity: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// The processor has no free cycles left.
    #[error("processor saturated: occupied {occupied_hz} Hz >= total {total_hz} Hz")]
    SaturatedProcessor { total_hz: f64, occupied_hz: f64 },

    /// No finite bandwidth can meet the deadline because edge processing
    /// alone already takes at least as long.
    #[error(
        "deadline {deadline_s} s is infeasible: processing term alone takes {processing_s} s"
    )]
    InfeasibleDeadline { processing_s: f64, deadline_s: f64 },

    /// Calibration target cannot be reached with the given link.
    #[error("calibration infeasible: {reason}")]
    InfeasibleCalibration { reason: String },
}

pub(crate) fn require_positive(quantity: &'static str, value: f64) -> Result<f64, ModelError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ModelError::Domain {
            quantity,
            value,
            requirement: "must be finite and > 0",
        })
    }
}

pub(crate) fn require_non_negative(
    quantity: &'static str,
    value: f64,
) -> Result<f64, ModelError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(ModelError::Domain {
            quantity,
            value,
            requirement: "must be finite and >= 0",
        })
    }
}
