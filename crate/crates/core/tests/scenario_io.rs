use irs_mec::experiments::{run_figure, FigureId};
use irs_mec::{load_scenario, GainInterpretation, Scenario, ScenarioError};

/// (config key, documented default) for every parameter-table row.
const TABLE: &[(&str, &str, f64)] = &[
    ("direct", "tx_power_w", 5.0),
    ("irs", "tx_power_w", 2.0),
    ("direct", "bandwidth_hz", 1e6),
    ("environment", "path_loss_exponent", 5.5),
    ("environment", "carrier_frequency_hz", 120e9),
    ("irs", "tx_gain_db", 20.0),
    ("irs", "rx_gain_db", 20.0),
    ("irs", "elements_m", 100.0),
    ("irs", "elements_n", 100.0),
    ("irs", "element_len_x_m", 0.0038),
    ("irs", "element_len_y_m", 0.0038),
    ("irs", "theta_t_deg", 45.0),
    ("irs", "theta_r_deg", 45.0),
    ("irs", "amplitude", 0.9),
    ("compute", "data_bytes_min", 5000.0),
    ("compute", "data_bytes_max", 20000.0),
    ("compute", "cycles_per_bit", 1000.0),
    ("compute", "mec_total_hz", 80e9),
    ("compute", "mec_per_user_hz", 8e9),
    ("compute", "deadline_s", 0.030),
    ("geometry", "cell_side_m", 200.0),
];

#[test]
fn every_table_row_has_one_key_with_its_default() {
    let rendered: toml::Table = Scenario::default().render().parse().unwrap();
    for &(section, key, value) in TABLE {
        let v = &rendered[section][key];
        let got = v.as_float().or(v.as_integer().map(|i| i as f64)).unwrap();
        assert_eq!(got, value, "{section}.{key}");
        let sections_with_key = rendered
            .values()
            .filter(|s| s.as_table().is_some_and(|t| t.contains_key(key)))
            .count();
        assert!(sections_with_key == 1 || key == "tx_power_w" || key == "bandwidth_hz", "{key}");
    }
    assert_eq!(
        rendered["compute"]["ue_cpu_hz"].as_array().unwrap().len(),
        3,
        "three UE CPU frequencies"
    );
}

#[test]
fn render_load_is_idempotent_for_edited_scenarios() {
    let edits: &[&[&str]] = &[
        &[],
        &["irs.gain_interpretation=linear"],
        &["irs.tx_gain_db=17.3", "direct.distance_m=123.4"],
        &["environment.interference_power_w=1e-12", "compute.ue_cpu_hz=[1e9, 2.5e9]"],
    ];
    for set in edits {
        let a = Scenario::default().with_overrides(set).unwrap();
        let b = load_scenario(&a.render()).unwrap();
        assert_eq!(a, b, "{set:?}");
        assert_eq!(a.render(), b.render());
        assert_eq!(a.fingerprint(), b.fingerprint());
    }
}

#[test]
fn parse_errors_name_key_and_line() {
    let err = load_scenario("[direct]\nbandwidth_hz = 1e6\nbandwith_hz = 2e6\n").unwrap_err();
    assert!(matches!(err, ScenarioError::UnknownKey { line: Some(3), .. }), "{err:?}");
    let err = load_scenario("[environment]\npath_loss_exponent = -1\n").unwrap_err();
    assert!(err.to_string().contains("path_loss_exponent"), "{err}");
}

#[test]
fn gain_interpretation_changes_only_irs_figures() {
    let db = Scenario::default();
    let lin = db.modified(|c| c.irs.gain_interpretation = GainInterpretation::Linear).unwrap();
    for id in [2, 6, 7] {
        let id = FigureId::new(id).unwrap();
        assert_eq!(run_figure(id, &db).unwrap().rows, run_figure(id, &lin).unwrap().rows);
    }
    let id = FigureId::new(8).unwrap();
    assert_ne!(run_figure(id, &db).unwrap().rows, run_figure(id, &lin).unwrap().rows);
}

#[test]
fn figure_rows_are_monotone() {
    let s = Scenario::default();
    // Latency falls with bandwidth at each task size.
    for id in [7, 9] {
        let ds = run_figure(FigureId::new(id).unwrap(), &s).unwrap();
        let bytes = s.data_grid();
        for &d in &bytes {
            let series: Vec<_> = ds.rows.iter().filter(|r| r[1] == d as f64).map(|r| r[2]).collect();
            assert_eq!(series.len(), s.bandwidth_grid().len());
            assert!(series.windows(2).all(|w| w[1] < w[0]), "fig{id} at {d} B");
        }
    }
    // Local latency rises with data and falls with CPU speed.
    let fig2 = run_figure(FigureId::new(2).unwrap(), &s).unwrap();
    for cpu in [2e9, 3e9, 4e9] {
        let series: Vec<_> = fig2.rows.iter().filter(|r| r[1] == cpu).map(|r| r[2]).collect();
        assert!(series.windows(2).all(|w| w[1] > w[0]));
    }
}
