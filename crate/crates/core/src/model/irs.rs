use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::radio::RadioEnvironment;
use crate::error::{require_positive, ModelError};

/// A point in the deployment frame, meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Point3 {
    fn from([x, y, z]: [f64; 3]) -> Self {
        Self { x, y, z }
    }
}

/// Euclidean length of the segment between two points.
pub fn segment_distance(a: Point3, b: Point3) -> f64 {
    let (dx, dy, dz) = (a.x - b.x, a.y - b.y, a.z - b.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Passive reflecting panel of `elements_m x elements_n` identical elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrsPanel {
    pub elements_m: u32,
    pub elements_n: u32,
    pub element_len_x_m: f64,
    pub element_len_y_m: f64,
    /// Reflection amplitude in (0, 1]. Enters the received power squared.
    pub amplitude: f64,
}

impl IrsPanel {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.elements_m == 0 {
            return Err(ModelError::Domain {
                quantity: "elements_m",
                value: 0.0,
                requirement: "must be >= 1",
            });
        }
        if self.elements_n == 0 {
            return Err(ModelError::Domain {
                quantity: "elements_n",
                value: 0.0,
                requirement: "must be >= 1",
            });
        }
        require_positive("element_len_x_m", self.element_len_x_m)?;
        require_positive("element_len_y_m", self.element_len_y_m)?;
        if !(self.amplitude > 0.0 && self.amplitude <= 1.0) {
            return Err(ModelError::Domain {
                quantity: "amplitude",
                value: self.amplitude,
                requirement: "must lie in (0, 1]",
            });
        }
        Ok(())
    }
}

/// UE -> IRS -> BS uplink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrsLink {
    pub tx_power_w: f64,
    pub bandwidth_hz: f64,
    /// Transmit antenna gain as a linear power ratio.
    pub tx_gain: f64,
    /// Receive antenna gain as a linear power ratio.
    pub rx_gain: f64,
    pub theta_t_rad: f64,
    pub theta_r_rad: f64,
    /// UE to IRS distance.
    pub d1_m: f64,
    /// IRS to BS distance.
    pub d2_m: f64,
    pub panel: IrsPanel,
}

impl IrsLink {
    pub fn validate(&self) -> Result<(), ModelError> {
        require_positive("irs.tx_power_w", self.tx_power_w)?;
        require_positive("irs.bandwidth_hz", self.bandwidth_hz)?;
        require_positive("tx_gain", self.tx_gain)?;
        require_positive("rx_gain", self.rx_gain)?;
        require_positive("d1_m", self.d1_m)?;
        require_positive("d2_m", self.d2_m)?;
        for (quantity, angle) in [("theta_t_rad", self.theta_t_rad), ("theta_r_rad", self.theta_r_rad)]
        {
            if !(0.0..PI / 2.0).contains(&angle) {
                return Err(ModelError::Domain {
                    quantity,
                    value: angle,
                    requirement: "must lie in [0, pi/2)",
                });
            }
        }
        self.panel.validate()
    }

    /// Splits a total UE-BS separation evenly across both segments.
    pub fn with_separation(self, separation_m: f64) -> Self {
        Self {
            d1_m: separation_m / 2.0,
            d2_m: separation_m / 2.0,
            ..self
        }
    }
}

/// Per-element aperture gain `4 pi d_x d_y / lambda^2`.
pub fn scattering_gain(panel: &IrsPanel, wavelength_m: f64) -> Result<f64, ModelError> {
    require_positive("wavelength_m", wavelength_m)?;
    Ok(4.0 * PI * panel.element_len_x_m * panel.element_len_y_m / (wavelength_m * wavelength_m))
}

/// Received power through the reflecting panel.
///
/// ```text
///        P_t G_t G_r G M^2 N^2 d_x d_y lambda^2 cos(theta_t) cos(theta_r) A^2
/// P_r = ---------------------------------------------------------------------
///                             64 pi^3 (d1 d2)^2
/// ```
///
/// with `G` the scattering gain of a single element. Only the segment
/// distances are guarded; the remaining factors are evaluated as given so
/// degenerate panels (e.g. zero amplitude) yield zero power.
pub fn received_power_irs(link: &IrsLink, env: &RadioEnvironment) -> Result<f64, ModelError> {
    require_positive("d1_m", link.d1_m)?;
    require_positive("d2_m", link.d2_m)?;
    let panel = &link.panel;
    let lambda = env.wavelength_m;
    let g = scattering_gain(panel, lambda)?;
    let m = f64::from(panel.elements_m);
    let n = f64::from(panel.elements_n);
    let numerator = link.tx_power_w
        * link.tx_gain
        * link.rx_gain
        * g
        * (m * m)
        * (n * n)
        * panel.element_len_x_m
        * panel.element_len_y_m
        * (lambda * lambda)
        * link.theta_t_rad.cos()
        * link.theta_r_rad.cos()
        * (panel.amplitude * panel.amplitude);
    let path = link.d1_m * link.d2_m;
    Ok(numerator / (64.0 * PI.powi(3) * path * path))
}
