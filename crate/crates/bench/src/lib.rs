//! Shared fixtures for the criterion benches.

use irs_mec::Scenario;

/// The reference deployment with the best-fitting gain reading.
pub fn reference_scenario() -> Scenario {
    Scenario::default()
        .with_overrides(&["irs.gain_interpretation=linear"])
        .expect("reference overrides are valid")
}
