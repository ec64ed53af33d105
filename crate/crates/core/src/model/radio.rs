use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, ModelError};
use crate::units;

/// Propagation environment shared by the direct and IRS links.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioEnvironment {
    /// Interference-plus-noise power seen by the receiver, in watts.
    pub interference_power_w: f64,
    pub path_loss_exponent: f64,
    pub carrier_frequency_hz: f64,
    /// Always `SPEED_OF_LIGHT / carrier_frequency_hz`.
    pub wavelength_m: f64,
}

impl RadioEnvironment {
    pub fn new(
        interference_power_w: f64,
        path_loss_exponent: f64,
        carrier_frequency_hz: f64,
    ) -> Result<Self, ModelError> {
        require_positive("interference_power_w", interference_power_w)?;
        require_positive("path_loss_exponent", path_loss_exponent)?;
        require_positive("carrier_frequency_hz", carrier_frequency_hz)?;
        Ok(Self {
            interference_power_w,
            path_loss_exponent,
            carrier_frequency_hz,
            wavelength_m: units::wavelength_m(carrier_frequency_hz),
        })
    }
}

/// Uplink from the UE straight to the base station.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectLink {
    pub tx_power_w: f64,
    pub bandwidth_hz: f64,
    pub distance_m: f64,
    /// Channel power gain `h`; 1.0 is the Rayleigh mean.
    pub fading_coeff: f64,
}

impl DirectLink {
    pub fn new(
        tx_power_w: f64,
        bandwidth_hz: f64,
        distance_m: f64,
        fading_coeff: f64,
    ) -> Result<Self, ModelError> {
        let link = Self {
            tx_power_w,
            bandwidth_hz,
            distance_m,
            fading_coeff,
        };
        link.validate()?;
        Ok(link)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        require_positive("tx_power_w", self.tx_power_w)?;
        require_positive("bandwidth_hz", self.bandwidth_hz)?;
        require_positive("distance_m", self.distance_m)?;
        require_non_negative("fading_coeff", self.fading_coeff)?;
        Ok(())
    }

    pub fn with_fading(self, fading_coeff: f64) -> Self {
        Self {
            fading_coeff,
            ..self
        }
    }
}

/// Received power on the direct path: `P_t * h / D^alpha`.
pub fn received_power_direct(link: &DirectLink, env: &RadioEnvironment) -> Result<f64, ModelError> {
    require_positive("distance_m", link.distance_m)?;
    require_non_negative("tx_power_w", link.tx_power_w)?;
    require_non_negative("fading_coeff", link.fading_coeff)?;
    require_positive("path_loss_exponent", env.path_loss_exponent)?;
    Ok(link.tx_power_w * link.fading_coeff / link.distance_m.powf(env.path_loss_exponent))
}

/// Linear signal-to-interference ratio.
pub fn snr(received_power_w: f64, env: &RadioEnvironment) -> Result<f64, ModelError> {
    require_positive("interference_power_w", env.interference_power_w)?;
    require_non_negative("received_power_w", received_power_w)?;
    Ok(received_power_w / env.interference_power_w)
}

/// Shannon rate `B * log2(1 + snr)` in bits per second.
pub fn throughput(bandwidth_hz: f64, snr: f64) -> Result<f64, ModelError> {
    require_positive("bandwidth_hz", bandwidth_hz)?;
    require_non_negative("snr", snr)?;
    Ok(bandwidth_hz * (1.0 + snr).log2())
}

/// Solves for the interference power that makes the direct link deliver
/// `observed_rate_bps`.
///
/// Only the path-loss exponent of the environment is needed; the returned
/// value is meant to be stored as `interference_power_w`.
pub fn calibrate_interference(
    link: &DirectLink,
    path_loss_exponent: f64,
    observed_rate_bps: f64,
) -> Result<f64, ModelError> {
    require_positive("bandwidth_hz", link.bandwidth_hz)?;
    if !(observed_rate_bps.is_finite() && observed_rate_bps > 0.0) {
        return Err(ModelError::InfeasibleCalibration {
            reason: format!("observed rate {observed_rate_bps} b/s must be finite and > 0"),
        });
    }
    let probe = RadioEnvironment {
        interference_power_w: 1.0,
        path_loss_exponent,
        carrier_frequency_hz: f64::NAN,
        wavelength_m: f64::NAN,
    };
    let received = received_power_direct(link, &probe)?;
    if received <= 0.0 {
        return Err(ModelError::InfeasibleCalibration {
            reason: "received power is zero, no interference level yields a positive rate"
                .to_owned(),
        });
    }
    // 2^(R/B) - 1 without cancellation for small spectral efficiencies.
    let required_snr = (observed_rate_bps / link.bandwidth_hz * std::f64::consts::LN_2).exp_m1();
    if !required_snr.is_finite() {
        return Err(ModelError::InfeasibleCalibration {
            reason: format!(
                "spectral efficiency {} b/s/Hz needs an unrepresentable SNR",
                observed_rate_bps / link.bandwidth_hz
            ),
        });
    }
    let n = received / required_snr;
    if !(n.is_finite() && n > 0.0) {
        return Err(ModelError::InfeasibleCalibration {
            reason: format!("solved interference power {n} W is not positive and finite"),
        });
    }
    Ok(n)
}
