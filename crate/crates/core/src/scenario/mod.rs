//! Scenario loading: config text -> validated model inputs.
//!
//! The config is TOML (or the same structure as JSON). Keys carry their
//! unit as a suffix (`_db`, `_hz`, `_w`, `_m`, `_bytes`, `_s`, `_deg`);
//! unknown keys are rejected so a mistyped suffix never silently falls back
//! to a default. Omitted keys take the reference deployment values from
//! [`ScenarioConfig::default`].

mod config;
mod sweep;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use config::{
    CalibrationSection, ComputeSection, DirectSection, EnvironmentSection, GainInterpretation,
    GeometrySection, IrsSection, ScenarioConfig, SweepSection, KNOWN_KEYS,
};
pub use sweep::{expand_sweep, inclusive_grid, SweepPoint, SweepSpec, SweepVariable, MAX_GRID_POINTS};

use crate::model::{
    calibrate_interference, ComputeTask, DirectLink, IrsLink, IrsPanel, Processor,
    RadioEnvironment,
};

/// Above this many concurrent users the MEC pool bound is enforced.
pub const POOL_CHECK_MIN_USERS: u32 = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("syntax error{}: {message}", fmt_line(*line))]
    Syntax { line: Option<usize>, message: String },

    #[error("unknown key `{key}`{}", fmt_line(*line))]
    UnknownKey { key: String, line: Option<usize> },

    #[error("unit-suffix mismatch for `{key}`{}: expected `{expected}`", fmt_line(*line))]
    UnitSuffixMismatch {
        key: String,
        expected: String,
        line: Option<usize>,
    },

    #[error("invalid value for `{key}`{}: {message}", fmt_line(*line))]
    InvalidValue {
        key: String,
        line: Option<usize>,
        message: String,
    },

    #[error("bad override `{arg}`: {message}")]
    Override { arg: String, message: String },

    #[error("grid for `{key}` has {points} points, limit is {limit}")]
    GridOverflow {
        key: String,
        points: f64,
        limit: usize,
    },
}

fn fmt_line(line: Option<usize>) -> String {
    line.map(|l| format!(" at line {l}")).unwrap_or_default()
}

impl ScenarioError {
    fn invalid(key: &str, message: impl Into<String>) -> Self {
        Self::InvalidValue {
            key: key.to_owned(),
            line: None,
            message: message.into(),
        }
    }

    /// Fills in the source line for key-level errors.
    fn located(mut self, text: Option<&str>) -> Self {
        let Some(text) = text else { return self };
        match &mut self {
            Self::UnknownKey { key, line }
            | Self::UnitSuffixMismatch { key, line, .. }
            | Self::InvalidValue { key, line, .. } => {
                if line.is_none() {
                    *line = locate_key(text, key);
                }
            }
            _ => {}
        }
        self
    }
}

/// Config text encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConfigFormat {
    #[default]
    Toml,
    Json,
}

/// A validated scenario: the config it came from plus model-ready values.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub environment: RadioEnvironment,
    pub direct: DirectLink,
    pub irs: IrsLink,
    pub ue_cpus: Vec<Processor>,
    /// Per-user share of the edge server.
    pub mec: Processor,
    pub cycles_per_bit: f64,
    pub deadline_s: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self::from_config(ScenarioConfig::default()).expect("built-in defaults are valid")
    }
}

/// Parses TOML config text into a normalized scenario.
pub fn load_scenario(config_text: &str) -> Result<Scenario, ScenarioError> {
    load_scenario_with::<&str>(config_text, ConfigFormat::Toml, &[])
}

/// Parses config text in `format`, applies `key=value` overrides, then
/// validates.
pub fn load_scenario_with<S: AsRef<str>>(
    config_text: &str,
    format: ConfigFormat,
    overrides: &[S],
) -> Result<Scenario, ScenarioError> {
    let source = (format == ConfigFormat::Toml).then_some(config_text);
    let mut table = parse_table(config_text, format)?;
    for arg in overrides {
        apply_override(&mut table, arg.as_ref())?;
    }
    let config = config_from_table(table).map_err(|e| e.located(source))?;
    Scenario::from_config(config).map_err(|e| e.located(source))
}

fn parse_table(text: &str, format: ConfigFormat) -> Result<toml::Table, ScenarioError> {
    match format {
        ConfigFormat::Toml => toml::from_str::<toml::Table>(text).map_err(|e| {
            ScenarioError::Syntax {
                line: e.span().map(|span| line_of_offset(text, span.start)),
                message: e.message().trim().to_owned(),
            }
        }),
        ConfigFormat::Json => {
            if text.trim().is_empty() {
                return Ok(toml::Table::new());
            }
            let json: serde_json::Value =
                serde_json::from_str(text).map_err(|e| ScenarioError::Syntax {
                    line: Some(e.line()),
                    message: e.to_string(),
                })?;
            match toml::Value::try_from(json) {
                Ok(toml::Value::Table(t)) => Ok(t),
                Ok(_) => Err(ScenarioError::Syntax {
                    line: None,
                    message: "top level must be an object".to_owned(),
                }),
                Err(e) => Err(ScenarioError::Syntax {
                    line: None,
                    message: e.to_string(),
                }),
            }
        }
    }
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// 1-based line where `section.key` is assigned, tracking `[section]`
/// headers.
fn locate_key(text: &str, dotted: &str) -> Option<usize> {
    let (section, key) = dotted.split_once('.').unwrap_or(("", dotted));
    let mut current = "";
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = header.trim();
            if key.is_empty() && current == section {
                return Some(idx + 1);
            }
            continue;
        }
        if current != section {
            continue;
        }
        if let Some((lhs, _)) = line.split_once('=') {
            if lhs.trim() == key {
                return Some(idx + 1);
            }
        }
    }
    None
}

/// Resolves an override key to `(section, key)`. A bare key is accepted
/// when exactly one section defines it.
fn resolve_key(key: &str) -> Result<(String, String), String> {
    if let Some((section, name)) = key.split_once('.') {
        return Ok((section.to_owned(), name.to_owned()));
    }
    let owners: Vec<&str> = KNOWN_KEYS
        .iter()
        .filter(|(_, keys)| keys.contains(&key))
        .map(|(section, _)| *section)
        .collect();
    match owners.as_slice() {
        [section] => Ok(((*section).to_owned(), key.to_owned())),
        [] => Err(format!("unknown key `{key}`")),
        many => Err(format!(
            "key `{key}` is ambiguous, qualify it with one of: {}",
            many.join(", ")
        )),
    }
}

/// Applies one `section.key=value` assignment. The value is parsed as a
/// TOML value, falling back to a bare string.
pub fn apply_override(table: &mut toml::Table, arg: &str) -> Result<(), ScenarioError> {
    let bad = |message: String| ScenarioError::Override {
        arg: arg.to_owned(),
        message,
    };
    let (key, raw) = arg
        .split_once('=')
        .ok_or_else(|| bad("expected key=value".to_owned()))?;
    let (section, name) = resolve_key(key.trim()).map_err(bad)?;
    let raw = raw.trim();
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_owned()));
    let entry = table
        .entry(section.clone())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    match entry {
        toml::Value::Table(t) => {
            t.insert(name, value);
            Ok(())
        }
        _ => Err(bad(format!("`{section}` is not a section"))),
    }
}

fn config_from_table(table: toml::Table) -> Result<ScenarioConfig, ScenarioError> {
    for (section, value) in &table {
        if !config::is_known_section(section) {
            return Err(ScenarioError::UnknownKey {
                key: section.clone(),
                line: None,
            });
        }
        let toml::Value::Table(entries) = value else {
            return Err(ScenarioError::invalid(section, "expected a [section] table"));
        };
        for key in entries.keys() {
            if config::is_known_key(section, key) {
                continue;
            }
            let dotted = format!("{section}.{key}");
            return Err(match config::suffix_mismatch(section, key) {
                Some(expected) => ScenarioError::UnitSuffixMismatch {
                    key: dotted,
                    expected: format!("{section}.{expected}"),
                    line: None,
                },
                None => ScenarioError::UnknownKey {
                    key: dotted,
                    line: None,
                },
            });
        }
    }
    fn section<T: serde::de::DeserializeOwned + Default>(
        table: &toml::Table,
        name: &str,
    ) -> Result<T, ScenarioError> {
        match table.get(name) {
            None => Ok(T::default()),
            Some(value) => value.clone().try_into().map_err(|e: toml::de::Error| {
                // Every field has a default, so the culprit is the first key
                // that fails to deserialize on its own.
                let culprit = value.as_table().and_then(|t| {
                    t.iter().find_map(|(k, v)| {
                        let mut single = toml::Table::new();
                        single.insert(k.clone(), v.clone());
                        toml::Value::Table(single)
                            .try_into::<T>()
                            .err()
                            .map(|err| (k.clone(), err))
                    })
                });
                match culprit {
                    Some((k, err)) => {
                        ScenarioError::invalid(&format!("{name}.{k}"), err.message().trim())
                    }
                    None => ScenarioError::invalid(name, e.message().trim()),
                }
            }),
        }
    }
    Ok(ScenarioConfig {
        environment: section(&table, "environment")?,
        calibration: section(&table, "calibration")?,
        direct: section(&table, "direct")?,
        irs: section(&table, "irs")?,
        geometry: section(&table, "geometry")?,
        compute: section(&table, "compute")?,
        sweep: section(&table, "sweep")?,
    })
}

struct Checker;

impl Checker {
    fn positive(key: &str, value: f64) -> Result<f64, ScenarioError> {
        if value.is_finite() && value > 0.0 {
            Ok(value)
        } else {
            Err(ScenarioError::invalid(key, format!("{value} must be finite and > 0")))
        }
    }

    fn non_negative(key: &str, value: f64) -> Result<f64, ScenarioError> {
        if value.is_finite() && value >= 0.0 {
            Ok(value)
        } else {
            Err(ScenarioError::invalid(key, format!("{value} must be finite and >= 0")))
        }
    }

    fn finite(key: &str, value: f64) -> Result<f64, ScenarioError> {
        if value.is_finite() {
            Ok(value)
        } else {
            Err(ScenarioError::invalid(key, format!("{value} must be finite")))
        }
    }

    fn angle_deg(key: &str, value: f64) -> Result<f64, ScenarioError> {
        if (0.0..90.0).contains(&value) {
            Ok(value.to_radians())
        } else {
            Err(ScenarioError::invalid(key, format!("{value} must lie in [0, 90) degrees")))
        }
    }

    fn processor(key: &str, total_hz: f64, occupied_hz: f64) -> Result<Processor, ScenarioError> {
        Self::positive(key, total_hz)?;
        if !(occupied_hz.is_finite() && occupied_hz >= 0.0 && occupied_hz < total_hz) {
            return Err(ScenarioError::invalid(
                key,
                format!("occupied {occupied_hz} Hz must lie in [0, {total_hz}) Hz"),
            ));
        }
        Ok(Processor {
            total_hz,
            occupied_hz,
        })
    }

    fn grid(key: &str, start: f64, stop: f64, step: f64) -> Result<(), ScenarioError> {
        inclusive_grid(key, start, stop, step).map(|_| ())
    }
}

impl Scenario {
    /// Validates `config` and converts it to model units.
    pub fn from_config(config: ScenarioConfig) -> Result<Self, ScenarioError> {
        type C = Checker;
        let env = &config.environment;
        let path_loss_exponent = C::positive("environment.path_loss_exponent", env.path_loss_exponent)?;
        let carrier = C::positive("environment.carrier_frequency_hz", env.carrier_frequency_hz)?;

        let d = &config.direct;
        let direct = DirectLink {
            tx_power_w: C::positive("direct.tx_power_w", d.tx_power_w)?,
            bandwidth_hz: C::positive("direct.bandwidth_hz", d.bandwidth_hz)?,
            distance_m: C::positive("direct.distance_m", d.distance_m)?,
            fading_coeff: C::non_negative("direct.fading_coeff", d.fading_coeff)?,
        };

        let interference_power_w = match env.interference_power_w {
            Some(n) => C::positive("environment.interference_power_w", n)?,
            None => {
                let cal = &config.calibration;
                let anchor = DirectLink {
                    bandwidth_hz: C::positive("calibration.anchor_bandwidth_hz", cal.anchor_bandwidth_hz)?,
                    distance_m: C::positive("calibration.anchor_distance_m", cal.anchor_distance_m)?,
                    fading_coeff: 1.0,
                    ..direct
                };
                C::positive("calibration.anchor_rate_bps", cal.anchor_rate_bps)?;
                calibrate_interference(&anchor, path_loss_exponent, cal.anchor_rate_bps)
                    .map_err(|e| ScenarioError::invalid("calibration.anchor_rate_bps", e.to_string()))?
            }
        };
        let environment = RadioEnvironment::new(interference_power_w, path_loss_exponent, carrier)
            .map_err(|e| ScenarioError::invalid("environment", e.to_string()))?;

        let i = &config.irs;
        let gain = |key: &str, value: f64| -> Result<f64, ScenarioError> {
            C::finite(key, value)?;
            C::positive(key, i.gain_interpretation.to_linear(value))
        };
        if !(i.amplitude > 0.0 && i.amplitude <= 1.0) {
            return Err(ScenarioError::invalid(
                "irs.amplitude",
                format!("{} must lie in (0, 1]", i.amplitude),
            ));
        }
        for (key, count) in [("irs.elements_m", i.elements_m), ("irs.elements_n", i.elements_n)] {
            if count == 0 {
                return Err(ScenarioError::invalid(key, "must be >= 1"));
            }
        }
        let irs = IrsLink {
            tx_power_w: C::positive("irs.tx_power_w", i.tx_power_w)?,
            bandwidth_hz: C::positive("irs.bandwidth_hz", i.bandwidth_hz)?,
            tx_gain: gain("irs.tx_gain_db", i.tx_gain_db)?,
            rx_gain: gain("irs.rx_gain_db", i.rx_gain_db)?,
            theta_t_rad: C::angle_deg("irs.theta_t_deg", i.theta_t_deg)?,
            theta_r_rad: C::angle_deg("irs.theta_r_deg", i.theta_r_deg)?,
            d1_m: C::positive("irs.d1_m", i.d1_m)?,
            d2_m: C::positive("irs.d2_m", i.d2_m)?,
            panel: IrsPanel {
                elements_m: i.elements_m,
                elements_n: i.elements_n,
                element_len_x_m: C::positive("irs.element_len_x_m", i.element_len_x_m)?,
                element_len_y_m: C::positive("irs.element_len_y_m", i.element_len_y_m)?,
                amplitude: i.amplitude,
            },
        };
        // Angle conversion can round 89.999.. up to pi/2.
        irs.validate()
            .map_err(|e| ScenarioError::invalid("irs", e.to_string()))?;

        let g = &config.geometry;
        C::positive("geometry.cell_side_m", g.cell_side_m)?;
        for v in g.bs_position_m {
            C::finite("geometry.bs_position_m", v)?;
        }
        for v in g.irs_position_m {
            C::finite("geometry.irs_position_m", v)?;
        }

        let c = &config.compute;
        if c.data_bytes_step == 0 {
            return Err(ScenarioError::invalid("compute.data_bytes_step", "must be > 0"));
        }
        if c.data_bytes_min > c.data_bytes_max {
            return Err(ScenarioError::invalid(
                "compute.data_bytes_min",
                format!("{} exceeds data_bytes_max {}", c.data_bytes_min, c.data_bytes_max),
            ));
        }
        let data_points = (c.data_bytes_max - c.data_bytes_min) / c.data_bytes_step + 1;
        if data_points > MAX_GRID_POINTS as u64 {
            return Err(ScenarioError::GridOverflow {
                key: "compute.data_bytes".to_owned(),
                points: data_points as f64,
                limit: MAX_GRID_POINTS,
            });
        }
        let cycles_per_bit = C::positive("compute.cycles_per_bit", c.cycles_per_bit)?;
        let deadline_s = C::positive("compute.deadline_s", c.deadline_s)?;
        if c.ue_cpu_hz.is_empty() {
            return Err(ScenarioError::invalid("compute.ue_cpu_hz", "needs at least one CPU"));
        }
        let ue_cpus = c
            .ue_cpu_hz
            .iter()
            .map(|&hz| C::processor("compute.ue_cpu_hz", hz, c.ue_occupied_hz))
            .collect::<Result<Vec<_>, _>>()?;
        let mec = C::processor("compute.mec_per_user_hz", c.mec_per_user_hz, c.mec_occupied_hz)?;
        C::positive("compute.mec_total_hz", c.mec_total_hz)?;
        if c.concurrent_users == 0 {
            return Err(ScenarioError::invalid("compute.concurrent_users", "must be >= 1"));
        }
        if c.concurrent_users > POOL_CHECK_MIN_USERS
            && f64::from(c.concurrent_users) * c.mec_per_user_hz > c.mec_total_hz
        {
            return Err(ScenarioError::invalid(
                "compute.concurrent_users",
                format!(
                    "{} users x {} Hz exceeds the {} Hz MEC pool",
                    c.concurrent_users, c.mec_per_user_hz, c.mec_total_hz
                ),
            ));
        }

        let s = &config.sweep;
        C::grid("sweep.bandwidth", s.bandwidth_min_hz, s.bandwidth_max_hz, s.bandwidth_step_hz)?;
        C::positive("sweep.bandwidth_min_hz", s.bandwidth_min_hz)?;
        C::grid("sweep.separation", s.separation_min_m, s.separation_max_m, s.separation_step_m)?;
        C::positive("sweep.separation_min_m", s.separation_min_m)?;

        Ok(Self {
            config,
            environment,
            direct,
            irs,
            ue_cpus,
            mec,
            cycles_per_bit,
            deadline_s,
        })
    }

    /// Re-validates after editing the underlying config.
    pub fn modified(&self, edit: impl FnOnce(&mut ScenarioConfig)) -> Result<Self, ScenarioError> {
        let mut config = self.config.clone();
        edit(&mut config);
        Self::from_config(config)
    }

    /// Applies `key=value` overrides on top of this scenario's config.
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self, ScenarioError> {
        if overrides.is_empty() {
            return Ok(self.clone());
        }
        let mut table = toml::Table::try_from(&self.config).map_err(|e| ScenarioError::Syntax {
            line: None,
            message: e.to_string(),
        })?;
        for arg in overrides {
            apply_override(&mut table, arg.as_ref())?;
        }
        Self::from_config(config_from_table(table)?)
    }

    /// Serializes the config back to TOML. Loading the result yields an
    /// equal scenario.
    pub fn render(&self) -> String {
        toml::to_string(&self.config).expect("config is always representable as TOML")
    }

    /// SHA-256 of the rendered config, hex encoded.
    pub fn fingerprint(&self) -> String {
        Sha256::digest(self.render().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// True when the interference power was solved from the anchor rather
    /// than given explicitly.
    pub fn interference_is_calibrated(&self) -> bool {
        self.config.environment.interference_power_w.is_none()
    }

    pub fn task(&self, data_bytes: u64) -> ComputeTask {
        ComputeTask {
            data_bytes,
            cycles_per_bit: self.cycles_per_bit,
            deadline_s: self.deadline_s,
        }
    }

    pub fn data_grid(&self) -> Vec<u64> {
        let c = &self.config.compute;
        (c.data_bytes_min..=c.data_bytes_max)
            .step_by(c.data_bytes_step as usize)
            .collect()
    }

    pub fn tasks(&self) -> Vec<ComputeTask> {
        self.data_grid().into_iter().map(|d| self.task(d)).collect()
    }

    pub fn bandwidth_grid(&self) -> Vec<f64> {
        let s = &self.config.sweep;
        inclusive_grid("sweep.bandwidth", s.bandwidth_min_hz, s.bandwidth_max_hz, s.bandwidth_step_hz)
            .expect("validated at load")
    }

    pub fn separation_grid(&self) -> Vec<f64> {
        let s = &self.config.sweep;
        inclusive_grid(
            "sweep.separation",
            s.separation_min_m,
            s.separation_max_m,
            s.separation_step_m,
        )
        .expect("validated at load")
    }
}
