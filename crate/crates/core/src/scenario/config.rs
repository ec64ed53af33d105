//! On-disk config schema. Values are in the units named by each key's
//! suffix; conversion to model units happens in [`super::Scenario`].
//!
//! Every omitted key takes the reference deployment default listed here.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// How the `*_gain_db` keys are read.
///
/// `Db` converts 20 dB to a linear factor of 100. `Linear` takes the number
/// as the linear factor itself (20 dB -> 20).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainInterpretation {
    #[default]
    Db,
    Linear,
}

impl GainInterpretation {
    pub fn to_linear(self, value: f64) -> f64 {
        match self {
            Self::Db => crate::units::db_to_linear(value),
            Self::Linear => value,
        }
    }
}

impl fmt::Display for GainInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Db => "db",
            Self::Linear => "linear",
        })
    }
}

impl FromStr for GainInterpretation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "db" => Ok(Self::Db),
            "linear" => Ok(Self::Linear),
            other => Err(format!("unknown gain interpretation {other:?} (expected db|linear)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub environment: EnvironmentSection,
    pub calibration: CalibrationSection,
    pub direct: DirectSection,
    pub irs: IrsSection,
    pub geometry: GeometrySection,
    pub compute: ComputeSection,
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvironmentSection {
    /// When absent, solved from the `[calibration]` anchor at load time.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interference_power_w: Option<f64>,
    pub path_loss_exponent: f64,
    pub carrier_frequency_hz: f64,
}

impl Default for EnvironmentSection {
    fn default() -> Self {
        Self {
            interference_power_w: None,
            path_loss_exponent: 5.5,
            carrier_frequency_hz: 120e9,
        }
    }
}

/// Direct-link operating point whose rate pins the interference power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationSection {
    pub anchor_rate_bps: f64,
    pub anchor_bandwidth_hz: f64,
    pub anchor_distance_m: f64,
}

impl Default for CalibrationSection {
    fn default() -> Self {
        Self {
            anchor_rate_bps: 2.001e6,
            anchor_bandwidth_hz: 1e6,
            anchor_distance_m: 200.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DirectSection {
    pub tx_power_w: f64,
    pub bandwidth_hz: f64,
    pub distance_m: f64,
    pub fading_coeff: f64,
}

impl Default for DirectSection {
    fn default() -> Self {
        Self {
            tx_power_w: 5.0,
            bandwidth_hz: 1e6,
            distance_m: 200.0,
            fading_coeff: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IrsSection {
    pub tx_power_w: f64,
    pub bandwidth_hz: f64,
    pub tx_gain_db: f64,
    pub rx_gain_db: f64,
    pub gain_interpretation: GainInterpretation,
    pub elements_m: u32,
    pub elements_n: u32,
    /// Element length and width. The reference table prints "0.0038 mm";
    /// it is read as 3.8 mm, i.e. about 1.5 wavelengths at 120 GHz.
    pub element_len_x_m: f64,
    pub element_len_y_m: f64,
    pub theta_t_deg: f64,
    pub theta_r_deg: f64,
    /// Reflection coefficient (amplitude), squared in the link budget.
    pub amplitude: f64,
    pub d1_m: f64,
    pub d2_m: f64,
}

impl Default for IrsSection {
    fn default() -> Self {
        Self {
            tx_power_w: 2.0,
            bandwidth_hz: 1e6,
            tx_gain_db: 20.0,
            rx_gain_db: 20.0,
            gain_interpretation: GainInterpretation::Db,
            elements_m: 100,
            elements_n: 100,
            element_len_x_m: 0.0038,
            element_len_y_m: 0.0038,
            theta_t_deg: 45.0,
            theta_r_deg: 45.0,
            amplitude: 0.9,
            d1_m: 100.0,
            d2_m: 100.0,
        }
    }
}

/// Deployment layout. Informational: link distances come from
/// `direct.distance_m` and `irs.d1_m`/`irs.d2_m`, not from these points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    pub cell_side_m: f64,
    pub bs_position_m: [f64; 3],
    pub irs_position_m: [f64; 3],
}

impl Default for GeometrySection {
    fn default() -> Self {
        Self {
            cell_side_m: 200.0,
            bs_position_m: [0.0, 0.0, 8.0],
            irs_position_m: [100.0, 100.0, 8.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComputeSection {
    pub data_bytes_min: u64,
    pub data_bytes_max: u64,
    pub data_bytes_step: u64,
    pub cycles_per_bit: f64,
    pub ue_cpu_hz: Vec<f64>,
    pub ue_occupied_hz: f64,
    pub mec_total_hz: f64,
    pub mec_per_user_hz: f64,
    pub mec_occupied_hz: f64,
    pub concurrent_users: u32,
    pub deadline_s: f64,
}

impl Default for ComputeSection {
    fn default() -> Self {
        Self {
            data_bytes_min: 5000,
            data_bytes_max: 20000,
            data_bytes_step: 250,
            cycles_per_bit: 1000.0,
            ue_cpu_hz: vec![2e9, 3e9, 4e9],
            ue_occupied_hz: 0.0,
            mec_total_hz: 80e9,
            mec_per_user_hz: 8e9,
            mec_occupied_hz: 0.0,
            concurrent_users: 1,
            deadline_s: 0.030,
        }
    }
}

/// Grids used by the figure datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub bandwidth_min_hz: f64,
    pub bandwidth_max_hz: f64,
    pub bandwidth_step_hz: f64,
    pub separation_min_m: f64,
    pub separation_max_m: f64,
    pub separation_step_m: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            bandwidth_min_hz: 1e6,
            bandwidth_max_hz: 10e6,
            bandwidth_step_hz: 0.25e6,
            separation_min_m: 10.0,
            separation_max_m: 200.0,
            separation_step_m: 5.0,
        }
    }
}

/// Every accepted `section.key`, in rendering order.
pub const KNOWN_KEYS: &[(&str, &[&str])] = &[
    (
        "environment",
        &["interference_power_w", "path_loss_exponent", "carrier_frequency_hz"],
    ),
    (
        "calibration",
        &["anchor_rate_bps", "anchor_bandwidth_hz", "anchor_distance_m"],
    ),
    ("direct", &["tx_power_w", "bandwidth_hz", "distance_m", "fading_coeff"]),
    (
        "irs",
        &[
            "tx_power_w",
            "bandwidth_hz",
            "tx_gain_db",
            "rx_gain_db",
            "gain_interpretation",
            "elements_m",
            "elements_n",
            "element_len_x_m",
            "element_len_y_m",
            "theta_t_deg",
            "theta_r_deg",
            "amplitude",
            "d1_m",
            "d2_m",
        ],
    ),
    ("geometry", &["cell_side_m", "bs_position_m", "irs_position_m"]),
    (
        "compute",
        &[
            "data_bytes_min",
            "data_bytes_max",
            "data_bytes_step",
            "cycles_per_bit",
            "ue_cpu_hz",
            "ue_occupied_hz",
            "mec_total_hz",
            "mec_per_user_hz",
            "mec_occupied_hz",
            "concurrent_users",
            "deadline_s",
        ],
    ),
    (
        "sweep",
        &[
            "bandwidth_min_hz",
            "bandwidth_max_hz",
            "bandwidth_step_hz",
            "separation_min_m",
            "separation_max_m",
            "separation_step_m",
        ],
    ),
];

const UNIT_SUFFIXES: &[&str] = &[
    "_db", "_hz", "_w", "_m", "_bytes", "_bps", "_s", "_deg", "_rad", "_mm", "_ghz", "_mhz",
    "_dbm", "_km",
];

fn stem(key: &str) -> &str {
    UNIT_SUFFIXES
        .iter()
        .find_map(|suffix| key.strip_suffix(suffix))
        .unwrap_or(key)
}

/// For an unknown key, the known key in the same section that differs only
/// by its unit suffix, if any.
pub fn suffix_mismatch(section: &str, key: &str) -> Option<&'static str> {
    let keys = KNOWN_KEYS.iter().find(|(s, _)| *s == section)?.1;
    let wanted = stem(key);
    keys.iter().copied().find(|known| *known != key && stem(known) == wanted)
}

pub fn is_known_section(section: &str) -> bool {
    KNOWN_KEYS.iter().any(|(s, _)| *s == section)
}

pub fn is_known_key(section: &str, key: &str) -> bool {
    KNOWN_KEYS
        .iter()
        .any(|(s, keys)| *s == section && keys.contains(&key))
}
