//! Flat-file persistence: one CSV per series with the fixed header
//! `sweep,sim_mean,sim_stderr,asymptotic,trials,b_used,seed`, plus a JSON
//! summary mirroring the full result (histograms included). Rates are
//! converted to bits at write time when the config asks for it; the
//! in-memory result always holds nats.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{ExperimentConfig, ExperimentResult, ResultRow};
use crate::Result;

/// Files produced by [`write_outputs`].
#[derive(Debug, Clone)]
pub struct OutputPaths {
    pub csv: Vec<PathBuf>,
    pub json: PathBuf,
}

pub(super) fn config_hash(config: &ExperimentConfig) -> String {
    let canonical = serde_json::to_vec(config).expect("config serializes");
    let mut hasher = Sha256::new();
    hasher.update(&canonical);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

#[derive(Serialize)]
struct CsvRow {
    sweep: f64,
    sim_mean: Option<f64>,
    sim_stderr: Option<f64>,
    asymptotic: Option<f64>,
    trials: u64,
    b_used: u32,
    seed: u64,
}

impl CsvRow {
    fn from_row(row: &ResultRow, to_bits: bool) -> Self {
        let conv = |x: Option<f64>| {
            x.map(|v| {
                if to_bits && v.is_finite() {
                    v * crate::NATS_TO_BITS
                } else {
                    v
                }
            })
        };
        CsvRow {
            sweep: row.sweep,
            sim_mean: conv(row.sim_mean),
            sim_stderr: conv(row.sim_stderr),
            asymptotic: conv(row.asymptotic),
            trials: row.trials,
            b_used: row.b_used,
            seed: row.seed,
        }
    }
}

/// Write one CSV per series plus the JSON summary into `dir`, creating it if
/// needed. File names are `<preset>_<series>.csv` and `<preset>.json`.
pub fn write_outputs(
    dir: &Path,
    config: &ExperimentConfig,
    result: &ExperimentResult,
) -> Result<OutputPaths> {
    std::fs::create_dir_all(dir)?;
    let to_bits = config.bits;
    let mut csv_paths = Vec::new();
    for series in &result.series {
        let path = dir.join(format!("{}_{}.csv", result.metadata.preset, series.name));
        let mut writer = csv::Writer::from_path(&path)?;
        for row in &series.rows {
            writer.serialize(CsvRow::from_row(row, to_bits))?;
        }
        writer.flush()?;
        csv_paths.push(path);
    }
    let json_path = dir.join(format!("{}.json", result.metadata.preset));
    let mut converted = result.clone();
    if to_bits {
        for series in &mut converted.series {
            for row in &mut series.rows {
                for v in [&mut row.sim_mean, &mut row.sim_stderr, &mut row.asymptotic]
                    .into_iter()
                    .flatten()
                {
                    if v.is_finite() {
                        *v *= crate::NATS_TO_BITS;
                    }
                }
            }
        }
    }
    std::fs::write(&json_path, serde_json::to_vec_pretty(&converted)?)?;
    Ok(OutputPaths {
        csv: csv_paths,
        json: json_path,
    })
}
