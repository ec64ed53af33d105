//! Figure datasets and the headline comparison, emitted as CSV.
//!
//! Each figure has a fixed column set (see [`FigureId::header`]). Rows are
//! evaluated in parallel but always returned in ascending order of the
//! sweep variables, so identical scenarios give byte-identical files.

mod headline;

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

pub use headline::{
    fit_gain_interpretation, grid_min_bandwidth, headline_report, GainFit, HeadlineReport,
    REPORTED_BANDWIDTH_RATIO, REPORTED_DIRECT_THROUGHPUT_BPS, REPORTED_IRS_THROUGHPUT_BPS,
    REPORTED_MIN_BANDWIDTH_DIRECT_HZ, REPORTED_MIN_BANDWIDTH_IRS_HZ, REPORTED_POWER_REDUCTION,
    REPORTED_THROUGHPUT_RATIO, THROUGHPUT_REFERENCE_BANDWIDTHS_HZ,
};

use crate::error::ModelError;
use crate::model::{
    local_latency, offload_latency, received_power_direct, received_power_irs, snr, throughput,
    DirectLink, IrsLink,
};
use crate::scenario::{Scenario, ScenarioError};

/// Task sizes of the three latency-vs-bandwidth figures.
pub const FIG3_DATA_BYTES: u64 = 6000;
pub const FIG4_DATA_BYTES: u64 = 17000;
pub const FIG5_DATA_BYTES: u64 = 20000;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("figure id {0} is not one of 2..=9")]
    InvalidFigure(u32),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FigureId(u8);

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId(2),
        FigureId(3),
        FigureId(4),
        FigureId(5),
        FigureId(6),
        FigureId(7),
        FigureId(8),
        FigureId(9),
    ];

    pub fn new(id: u32) -> Result<Self, ExperimentError> {
        match id {
            2..=9 => Ok(Self(id as u8)),
            other => Err(ExperimentError::InvalidFigure(other)),
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn header(self) -> &'static [&'static str] {
        match self.0 {
            2 => &["data_bytes", "cpu_hz", "latency_s", "deadline_s"],
            3..=5 => &["bandwidth_hz", "latency_noirs_s", "latency_irs_s", "deadline_s"],
            6 | 8 => &["bandwidth_hz", "separation_m", "throughput_bps"],
            7 | 9 => &["bandwidth_hz", "data_bytes", "latency_s", "deadline_s"],
            _ => unreachable!("FigureId is range-checked"),
        }
    }

    pub fn file_name(self) -> String {
        format!("fig{}.csv", self.0)
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One figure's data: a fixed header, numeric rows, and provenance notes
/// written as `#` comment lines ahead of the header.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureDataset {
    pub figure: FigureId,
    pub rows: Vec<Vec<f64>>,
    pub fingerprint: String,
    pub notes: Vec<(String, String)>,
}

impl FigureDataset {
    pub fn header(&self) -> &'static [&'static str] {
        self.figure.header()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header().iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# figure: {}", self.figure).unwrap();
        writeln!(out, "# scenario_fingerprint: {}", self.fingerprint).unwrap();
        for (key, value) in &self.notes {
            writeln!(out, "# {key}: {value}").unwrap();
        }
        writeln!(out, "{}", self.header().join(",")).unwrap();
        for row in &self.rows {
            let mut first = true;
            for value in row {
                if !first {
                    out.push(',');
                }
                first = false;
                // Shortest round-trip form; never locale dependent.
                write!(out, "{value}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, dir: &Path) -> Result<PathBuf, ExperimentError> {
        let path = dir.join(self.figure.file_name());
        fs::write(&path, self.to_csv()).map_err(|source| ExperimentError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }
}

/// Direct-link rate at the given bandwidth and UE-BS distance.
pub fn direct_rate(
    scenario: &Scenario,
    bandwidth_hz: f64,
    distance_m: f64,
) -> Result<f64, ModelError> {
    let env = &scenario.environment;
    let link = DirectLink {
        bandwidth_hz,
        distance_m,
        ..scenario.direct
    };
    throughput(bandwidth_hz, snr(received_power_direct(&link, env)?, env)?)
}

/// IRS-link rate at the given bandwidth and segment distances.
pub fn irs_rate(
    scenario: &Scenario,
    bandwidth_hz: f64,
    d1_m: f64,
    d2_m: f64,
) -> Result<f64, ModelError> {
    let env = &scenario.environment;
    let link = IrsLink {
        bandwidth_hz,
        d1_m,
        d2_m,
        ..scenario.irs
    };
    throughput(bandwidth_hz, snr(received_power_irs(&link, env)?, env)?)
}

fn cartesian<A: Copy + Sync, B: Copy + Sync>(outer: &[A], inner: &[B]) -> Vec<(A, B)> {
    outer
        .iter()
        .flat_map(|&a| inner.iter().map(move |&b| (a, b)))
        .collect()
}

fn evaluate<P, F>(points: Vec<P>, row: F) -> Result<Vec<Vec<f64>>, ModelError>
where
    P: Send,
    F: Fn(P) -> Result<Vec<f64>, ModelError> + Send + Sync,
{
    // Indexed parallel collect keeps input order.
    points.into_par_iter().map(row).collect()
}

/// Builds the dataset for one figure from `scenario`.
pub fn run_figure(figure: FigureId, scenario: &Scenario) -> Result<FigureDataset, ExperimentError> {
    let deadline = scenario.deadline_s;
    let bandwidths = scenario.bandwidth_grid();
    let mut notes = Vec::new();
    let rows = match figure.get() {
        2 => {
            let cpus: Vec<_> = scenario.ue_cpus.clone();
            evaluate(cartesian(&scenario.data_grid(), &cpus), |(bytes, cpu)| {
                let latency = local_latency(&scenario.task(bytes), &cpu)?;
                Ok(vec![bytes as f64, cpu.total_hz, latency, deadline])
            })?
        }
        id @ 3..=5 => {
            let bytes = match id {
                3 => FIG3_DATA_BYTES,
                4 => FIG4_DATA_BYTES,
                _ => FIG5_DATA_BYTES,
            };
            notes.push(("data_bytes".to_owned(), bytes.to_string()));
            let task = scenario.task(bytes);
            let irs = &scenario.irs;
            evaluate(bandwidths, |b| {
                let direct = direct_rate(scenario, b, scenario.direct.distance_m)?;
                let reflected = irs_rate(scenario, b, irs.d1_m, irs.d2_m)?;
                Ok(vec![
                    b,
                    offload_latency(&task, direct, &scenario.mec)?.total_s(),
                    offload_latency(&task, reflected, &scenario.mec)?.total_s(),
                    deadline,
                ])
            })?
        }
        id @ (6 | 8) => {
            let with_irs = id == 8;
            notes.push((
                "separation".to_owned(),
                if with_irs {
                    "d1 = d2 = separation / 2".to_owned()
                } else {
                    "direct distance = separation".to_owned()
                },
            ));
            evaluate(cartesian(&bandwidths, &scenario.separation_grid()), |(b, sep)| {
                let rate = if with_irs {
                    irs_rate(scenario, b, sep / 2.0, sep / 2.0)?
                } else {
                    direct_rate(scenario, b, sep)?
                };
                Ok(vec![b, sep, rate])
            })?
        }
        id @ (7 | 9) => {
            let with_irs = id == 9;
            let irs = &scenario.irs;
            notes.push((
                "link".to_owned(),
                if with_irs {
                    format!("irs d1 = {} m, d2 = {} m", irs.d1_m, irs.d2_m)
                } else {
                    format!("direct distance = {} m", scenario.direct.distance_m)
                },
            ));
            evaluate(cartesian(&bandwidths, &scenario.data_grid()), |(b, bytes)| {
                let rate = if with_irs {
                    irs_rate(scenario, b, irs.d1_m, irs.d2_m)?
                } else {
                    direct_rate(scenario, b, scenario.direct.distance_m)?
                };
                let latency = offload_latency(&scenario.task(bytes), rate, &scenario.mec)?;
                Ok(vec![b, bytes as f64, latency.total_s(), deadline])
            })?
        }
        _ => unreachable!("FigureId is range-checked"),
    };
    if matches!(figure.get(), 3..=9) {
        notes.push((
            "gain_interpretation".to_owned(),
            scenario.config.irs.gain_interpretation.to_string(),
        ));
    }
    Ok(FigureDataset {
        figure,
        rows,
        fingerprint: scenario.fingerprint(),
        notes,
    })
}

/// Runs every figure and writes `fig2.csv` .. `fig9.csv` into `dir`.
pub fn write_all_figures(
    scenario: &Scenario,
    dir: &Path,
) -> Result<Vec<(PathBuf, usize)>, ExperimentError> {
    fs::create_dir_all(dir).map_err(|source| ExperimentError::Io {
        path: dir.to_owned(),
        source,
    })?;
    FigureId::ALL
        .iter()
        .map(|&id| {
            let dataset = run_figure(id, scenario)?;
            let path = dataset.write_to(dir)?;
            Ok((path, dataset.rows.len()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn figure_ids_are_range_checked() {
        assert!(FigureId::new(1).is_err());
        assert!(FigureId::new(10).is_err());
        assert!(FigureId::new(11).is_err());
        assert_eq!(FigureId::new(9).unwrap().file_name(), "fig9.csv");
    }

    #[test]
    fn fig2_grid_and_anchor_row() {
        let ds = run_figure(FigureId::new(2).unwrap(), &Scenario::default()).unwrap();
        assert_eq!(ds.rows.len(), 61 * 3);
        let row = ds
            .rows
            .iter()
            .find(|r| r[0] == 7500.0 && r[1] == 2e9)
            .unwrap();
        assert!(rel(row[2], 0.030) < 1e-12);
        assert!(ds.rows.iter().all(|r| r[3] == 0.030));
    }

    #[test]
    fn fig6_anchor_point() {
        let ds = run_figure(FigureId::new(6).unwrap(), &Scenario::default()).unwrap();
        assert_eq!(ds.rows.len(), 37 * 39);
        let row = ds
            .rows
            .iter()
            .find(|r| r[0] == 10e6 && r[1] == 200.0)
            .unwrap();
        assert!(rel(row[2], 20.01e6) < 1e-9, "{}", row[2]);
    }

    #[test]
    fn csv_layout() {
        let ds = run_figure(FigureId::new(3).unwrap(), &Scenario::default()).unwrap();
        let csv = ds.to_csv();
        let mut lines = csv.lines().skip_while(|l| l.starts_with('#'));
        assert_eq!(
            lines.next(),
            Some("bandwidth_hz,latency_noirs_s,latency_irs_s,deadline_s")
        );
        assert_eq!(lines.count(), 37);
        assert!(csv.contains(&Scenario::default().fingerprint()));
        assert!(csv.lines().nth(3).unwrap().starts_with('#'));
    }

    #[test]
    fn rows_are_sorted() {
        for id in FigureId::ALL {
            let ds = run_figure(id, &Scenario::default()).unwrap();
            let keys: Vec<(f64, f64)> = ds.rows.iter().map(|r| (r[0], r[1])).collect();
            assert!(
                keys.windows(2).all(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Greater)),
                "fig {id} unsorted"
            );
        }
    }
}
