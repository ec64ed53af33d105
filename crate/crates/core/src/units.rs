//! Unit conversions used at the config and CLI boundary.

/// Propagation speed used to derive the carrier wavelength.
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 2.998e8;

pub const BITS_PER_BYTE: f64 = 8.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts * 1e3).log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) / 1e3
}

pub fn wavelength_m(carrier_frequency_hz: f64) -> f64 {
    SPEED_OF_LIGHT_M_PER_S / carrier_frequency_hz
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_db_is_one_hundred() {
        assert_eq!(db_to_linear(20.0), 100.0);
        assert_eq!(linear_to_db(100.0), 20.0);
        assert_eq!(db_to_linear(0.0), 1.0);
    }

    #[test]
    fn dbm_reference_points() {
        assert!((watts_to_dbm(1.0) - 30.0).abs() < 1e-12);
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-12);
        assert!((watts_to_dbm(1e-3)).abs() < 1e-12);
    }

    #[test]
    fn wavelength_at_120_ghz() {
        let lambda = wavelength_m(120e9);
        assert!((lambda - 2.498_333_333_333_333e-3).abs() < 1e-15);
    }

    #[test]
    fn db_round_trip_is_tight() {
        for &db in &[-30.0, -3.0, 0.0, 0.5, 3.0, 17.3, 20.0, 45.0] {
            let back = linear_to_db(db_to_linear(db));
            let scale = f64::max(db.abs(), 1.0);
            assert!((back - db).abs() / scale <= 1e-12, "{db} -> {back}");
        }
    }
}
